#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "heis/bump.hpp"
#include "heis/diffops.hpp"
#include "heis/riesz.hpp"
#include "heis/spectral.hpp"
#include "oracles.hpp"

using heis::cplx;
using heis::GridSpec;
using heis::GroupPoint;
using heis::SampledField;
using heis::SpectralGrid;
using heis::ZField;

namespace {

SampledField gaussian_field(const GridSpec& g, double a = 1.0, double b = 1.0) {
  return SampledField::sample(g, [=](auto zc, double t) {
    double zz = 0.0;
    for (double c : zc) zz += c * c;
    return cplx(std::exp(-(a * zz + b * t * t)), 0.0);
  });
}

double rel_l2(const SampledField& a, const SampledField& b) {
  return heis::lp_norm(a - b, 2.0) / heis::lp_norm(b, 2.0);
}

}  // namespace

TEST_CASE("Gauss-Legendre rule") {
  const auto rule = heis::gauss_legendre<double>(16, -1.0, 1.0);
  double s2 = 0.0, s6 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    s2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    s6 += rule.weights[i] * std::pow(rule.nodes[i], 6);
  }
  REQUIRE_THAT(s2, Catch::Matchers::WithinRel(2.0 / 3.0, 1e-13));
  REQUIRE_THAT(s6, Catch::Matchers::WithinRel(2.0 / 7.0, 1e-13));
  for (std::size_t i = 1; i < rule.nodes.size(); ++i)
    REQUIRE(rule.nodes[i] > rule.nodes[i - 1]);
}

TEST_CASE("spectral grid") {
  const SpectralGrid g = SpectralGrid::make_gauss_legendre(1, 16, 0.05, 8.0, 24);
  REQUIRE(g.size() == 24);
  const double density = std::pow(2.0 * std::numbers::pi, -2);
  for (std::size_t i = 0; i < g.size(); ++i)
    REQUIRE_THAT(g.lambda_weights[i],
                 Catch::Matchers::WithinRel(
                     g.raw_weights[i] * density * g.lambda_nodes[i], 1e-13));
  REQUIRE_THROWS_AS(SpectralGrid::make_gauss_legendre(1, 16, -1.0, 8.0, 24),
                    std::invalid_argument);
}

TEST_CASE("matrix coefficients") {
  SECTION("value at the origin is binomial(k+n-1, k)") {
    const GroupPoint origin = GroupPoint::identity(1);
    for (int k = 0; k <= 8; ++k) {
      const cplx v = heis::matrix_coeff(k, 1.3, origin);
      REQUIRE_THAT(v.real(), Catch::Matchers::WithinRel(
                                 oracles::binomial(k, k), 1e-13));
      REQUIRE(v.imag() == 0.0);
    }
  }

  SECTION("modulus independent of t") {
    const GroupPoint a(cplx(0.7, -0.2), 0.0);
    const GroupPoint b(cplx(0.7, -0.2), 5.1);
    for (int k = 0; k <= 4; ++k)
      REQUIRE_THAT(std::abs(heis::matrix_coeff(k, 0.9, a)),
                   Catch::Matchers::WithinRel(
                       std::abs(heis::matrix_coeff(k, 0.9, b)), 1e-13));
  }

  SECTION("rescaled coefficient at k = 0, n = 1 equals the plain one") {
    const GroupPoint p(cplx(0.4, 0.1), -0.7);
    const cplx a = heis::matrix_coeff(0, 1.7, p, heis::MatrixCoeffKind::Rescaled);
    const cplx b = heis::matrix_coeff(0, 1.7, p, heis::MatrixCoeffKind::Standard);
    REQUIRE(std::abs(a - b) <= 1e-15);
  }

  SECTION("lambda = 0 rejected") {
    REQUIRE_THROWS_AS(heis::matrix_coeff(0, 0.0, GroupPoint::identity(1)),
                      std::invalid_argument);
  }
}

TEST_CASE("twisted convolution") {
  SECTION("lambda = 0 reduces to ordinary convolution") {
    const heis::ZSpec s{1, 3.0, 8};
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ZField u = ZField::zero(s), v = ZField::zero(s);
    for (auto& x : u.v) x = cplx(unif(rng), unif(rng));
    for (auto& x : v.v) x = cplx(unif(rng), unif(rng));
    const ZField got = heis::twisted_convolve(u, v, 0.0);
    const ZField want = oracles::dense_convolution(u, v);
    for (std::size_t i = 0; i < got.v.size(); ++i)
      REQUIRE(std::abs(got.v[i] - want.v[i]) <= 1e-12);
  }

  SECTION("grid mismatch rejected") {
    const ZField u = ZField::zero({1, 3.0, 8});
    const ZField v = ZField::zero({1, 3.0, 10});
    REQUIRE_THROWS_AS(heis::twisted_convolve(u, v, 1.0), std::invalid_argument);
  }

  SECTION("Gaussian pair matches a fine brute-force quadrature") {
    const heis::ZSpec s{1, 5.0, 40};
    auto gz = [](cplx z) { return cplx(std::exp(-std::norm(z)), 0.0); };
    const ZField u = ZField::sample(s, [&](auto zc) {
      return gz(cplx(zc[0], zc[1]));
    });
    const double lambda = 1.3;
    const ZField conv = heis::twisted_convolve(u, u, lambda);
    for (const cplx z : {cplx(0.0, 0.0), cplx(0.75, -0.5), cplx(1.25, 1.0)}) {
      const cplx want = oracles::twisted_point(gz, gz, lambda, z, 5.0, 160);
      const int ix = static_cast<int>(std::lround((z.real() + s.extent) / s.h()));
      const int iy = static_cast<int>(std::lround((z.imag() + s.extent) / s.h()));
      const cplx got = conv.v[static_cast<std::size_t>(ix) * s.m + iy];
      REQUIRE(std::abs(got - want) <= 1e-6 * std::max(1.0, std::abs(want)));
    }
    // radial output for radial inputs: compare two points at equal radius
    const auto at = [&](int ix, int iy) {
      return conv.v[static_cast<std::size_t>(ix) * s.m + iy];
    };
    const int c = s.m / 2;
    REQUIRE(std::abs(at(c + 4, c) - at(c, c + 4)) <= 1e-10);
  }

  SECTION("general-n path agrees with the n = 1 fast path") {
    const heis::ZSpec s{1, 2.0, 6};
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ZField u = ZField::zero(s), v = ZField::zero(s);
    for (auto& x : u.v) x = cplx(unif(rng), unif(rng));
    for (auto& x : v.v) x = cplx(unif(rng), unif(rng));
    const ZField fast = heis::twisted_convolve(u, v, 0.9);
    // force the generic path through an n = 2 embedding is not directly
    // comparable; instead check against a literal nested-loop evaluation
    const int m = s.m, half = m / 2;
    double cell = s.h() * s.h();
    for (int zx = 0; zx < m; ++zx)
      for (int zy = 0; zy < m; ++zy) {
        cplx acc = 0.0;
        for (int wx = 0; wx < m; ++wx)
          for (int wy = 0; wy < m; ++wy) {
            const int ux = zx - wx + half, uy = zy - wy + half;
            if (ux < 0 || ux >= m || uy < 0 || uy >= m) continue;
            const double im = s.coord(zy) * s.coord(wx) - s.coord(zx) * s.coord(wy);
            const double arg = 0.45 * im;  // lambda/2
            acc += u.v[static_cast<std::size_t>(ux) * m + uy] *
                   v.v[static_cast<std::size_t>(wx) * m + wy] *
                   cplx(std::cos(arg), std::sin(arg));
          }
        REQUIRE(std::abs(fast.v[static_cast<std::size_t>(zx) * m + zy] -
                         acc * cell) <= 1e-12);
      }
  }

  SECTION("special Hermite orthogonality under twisted convolution") {
    // phi_k^l *_l phi_j^l is proportional to delta_kj phi_k^l for l > 0
    const heis::ZSpec s{1, 8.0, 48};
    const double lambda = 1.0;
    std::vector<ZField> phis;
    for (int k = 0; k <= 2; ++k)
      phis.push_back(heis::phi_field(s, k, lambda, 1));
    auto inner = [&](const ZField& a, const ZField& b) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < a.v.size(); ++i)
        acc += a.v[i] * std::conj(b.v[i]);
      return acc * s.h() * s.h();
    };
    for (int k = 0; k <= 2; ++k)
      for (int j = 0; j <= 2; ++j) {
        const ZField conv = heis::twisted_convolve(phis[static_cast<std::size_t>(k)],
                                                   phis[static_cast<std::size_t>(j)], lambda);
        // project the result onto each phi_i
        for (int i = 0; i <= 2; ++i) {
          const cplx coeff = inner(conv, phis[static_cast<std::size_t>(i)]) /
                             inner(phis[static_cast<std::size_t>(i)],
                                   phis[static_cast<std::size_t>(i)]);
          if (k == j && i == k) {
            // diagonal: proportionality constant (2 pi)^n / lambda^n
            REQUIRE_THAT(coeff.real(),
                         Catch::Matchers::WithinRel(2.0 * std::numbers::pi, 1e-3));
          } else {
            REQUIRE(std::abs(coeff) <= 1e-6 * 2.0 * std::numbers::pi);
          }
        }
      }
  }
}

TEST_CASE("spectral piece") {
  SECTION("zero field maps to zero") {
    const GridSpec g{1, 4.0, 4.0, 8, 8};
    const SampledField z = SampledField::zero(g);
    const SampledField piece = heis::spectral_piece(z, 1, 0.7);
    REQUIRE(heis::lp_norm(piece, 2.0) == 0.0);
  }

  SECTION("lambda = 0 rejected") {
    const GridSpec g{1, 4.0, 4.0, 8, 8};
    REQUIRE_THROWS_AS(heis::spectral_piece(SampledField::zero(g), 0, 0.0),
                      std::invalid_argument);
  }

  SECTION("matches direct group-convolution quadrature") {
    // the identity f * e_k^lambda = e^{-i lambda t} (f^lambda *_lambda
    // phi_k^lambda) is validated against the O(M^2) group convolution.
    // e_k^lambda does not decay in the central variable, so the oracle's
    // own s-truncation needs a tall t-box and a core comparison region:
    // the twist term Im(z . conj(w))/2 shifts the f argument.
    const GridSpec g{1, 4.0, 10.0, 16, 48};
    auto f_analytic = [](const GroupPoint& p) {
      return cplx(std::exp(-(p.abs_z_squared() + p.t() * p.t())), 0.0);
    };
    std::vector<std::size_t> core;
    {
      heis::ZOdometer od(g.zspec());
      std::size_t flat = 0;
      do {
        const auto zc = od.coords();
        const bool zin = std::abs(zc[0]) <= 1.5 && std::abs(zc[1]) <= 1.5;
        for (int it = 0; it < g.m_t; ++it, ++flat)
          if (zin && std::abs(g.tcoord(it)) <= 2.5) core.push_back(flat);
      } while (od.next());
    }
    for (const auto& [k, lambda] : std::vector<std::pair<int, double>>{
             {0, 0.8}, {1, 0.8}, {2, -1.1}}) {
      auto ek = [&](const GroupPoint& p) {
        return heis::matrix_coeff(k, lambda, p);
      };
      const SampledField oracle = oracles::group_convolution(g, f_analytic, ek);
      const SampledField f = SampledField::sample(g, [&](auto zc, double t) {
        GroupPoint p(cplx(zc[0], zc[1]), t);
        return f_analytic(p);
      });
      const SampledField got = heis::spectral_piece(f, k, lambda);
      INFO("k = " << k << ", lambda = " << lambda);
      REQUIRE(heis::relative_l2_on(got, oracle, core) <= 1e-6);
    }
  }

  SECTION("eigenfunction of the sublaplacian") {
    const GridSpec g{1, 6.0, 6.0, 32, 32};
    const SampledField f = gaussian_field(g);
    const int k = 1;
    const double lambda = 1.0;
    const SampledField piece = heis::spectral_piece(f, k, lambda);
    const SampledField lf = heis::apply_sublaplacian(piece);
    const double eig = (2.0 * k + 1.0) * std::abs(lambda);
    const auto interior = heis::interior_nodes(g, 0.5);
    const SampledField want = cplx(eig, 0.0) * piece;
    // finite-difference limited at this h; the second-order improvement
    // is covered by the acceptance suite
    REQUIRE(heis::relative_l2_on(lf, want, interior) <= 0.12);
  }
}

TEST_CASE("P_lambda projections") {
  // grids below keep the twist phase resolved: lambda extent_z h_z / 2 < pi
  const GridSpec g{1, 6.0, 6.0, 32, 32};
  const SampledField f = gaussian_field(g);

  SECTION("zero maps to zero and lambda <= 0 rejected") {
    REQUIRE(heis::lp_norm(heis::p_lambda(SampledField::zero(g), 1.0, 8), 2.0) ==
            0.0);
    REQUIRE_THROWS_AS(heis::p_lambda(f, -1.0, 8), std::invalid_argument);
  }

  SECTION("eigenfunction with eigenvalue lambda") {
    const double lambda = 1.0;
    const SampledField pf = heis::p_lambda(f, lambda, 24);
    const SampledField lf = heis::apply_sublaplacian(pf);
    const auto interior = heis::interior_nodes(g, 0.5);
    const SampledField want = cplx(lambda, 0.0) * pf;
    REQUIRE(heis::relative_l2_on(lf, want, interior) <= 8e-2);
  }

  SECTION("reconstruction from the inversion formula") {
    const GridSpec gr{1, 4.5, 6.0, 28, 24};
    const SampledField fr = gaussian_field(gr, 1.0, 0.5);
    const SpectralGrid sg = SpectralGrid::make_gauss_legendre(1, 28, 0.05, 3.5, 40);
    const auto proj = heis::project_all(fr, sg);
    const SampledField rec = heis::reconstruct(proj);
    REQUIRE(rel_l2(rec, fr) <= 1e-2);
  }

  SECTION("projections at distinct lambda are orthogonal") {
    const GridSpec gr{1, 4.5, 6.0, 28, 24};
    const SampledField fr = gaussian_field(gr, 1.0, 0.5);
    const SampledField p1 = heis::p_lambda(fr, 0.8, 24);
    const SampledField p2 = heis::p_lambda(fr, 2.0, 24);
    const double cross = std::abs(heis::inner_product(p1, p2));
    const double n1 = heis::lp_norm(p1, 2.0), n2 = heis::lp_norm(p2, 2.0);
    REQUIRE(cross <= 2e-2 * n1 * n2);
  }
}

TEST_CASE("Plancherel identity") {
  const GridSpec g{1, 4.5, 6.0, 24, 24};
  const SpectralGrid sg = SpectralGrid::make_gauss_legendre(1, 24, 0.05, 3.5, 32);

  SECTION("zero field gives (0, 0)") {
    const auto res = heis::plancherel_check(SampledField::zero(g), sg);
    REQUIRE(res.lhs == 0.0);
    REQUIRE(res.rhs == 0.0);
  }

  SECTION("Gaussian agreement and quadratic scaling") {
    const SampledField f = gaussian_field(g, 1.0, 0.5);
    const auto res = heis::plancherel_check(f, sg);
    REQUIRE(std::abs(res.lhs - res.rhs) / res.lhs <= 5e-2);

    const auto scaled = heis::plancherel_check(cplx(0.0, 2.0) * f, sg);
    REQUIRE_THAT(scaled.lhs, Catch::Matchers::WithinRel(4.0 * res.lhs, 1e-12));
    REQUIRE_THAT(scaled.rhs, Catch::Matchers::WithinRel(4.0 * res.rhs, 1e-10));
  }

  SECTION("agreement improves monotonically in K") {
    const SampledField f = gaussian_field(g, 1.0, 0.5);
    const auto res = heis::plancherel_check(f, sg);
    double prev = std::abs(res.lhs - res.rhs_up_to(2));
    for (int K : {6, 12, 24}) {
      const double err = std::abs(res.lhs - res.rhs_up_to(K));
      REQUIRE(err <= prev * (1.0 + 1e-12));
      prev = err;
    }
  }
}

TEST_CASE("Littlewood-Paley projections") {
  const GridSpec g{1, 4.5, 6.0, 20, 20};
  const SpectralGrid sg = SpectralGrid::make_gauss_legendre(1, 20, 0.05, 3.0, 32);
  const SampledField f = gaussian_field(g, 1.0, 0.5);
  const heis::BumpFunction beta = heis::make_lp_beta();

  SECTION("vanishes when the dyadic band misses the grid") {
    const SampledField p = heis::littlewood_paley_project(f, sg, 12, beta);
    REQUIRE(heis::lp_norm(p, 2.0) == 0.0);
  }

  SECTION("bands covering the grid sum to the reconstruction") {
    const auto proj = heis::project_all(f, sg);
    SampledField sum = SampledField::zero(g);
    for (int m = -6; m <= 5; ++m)
      sum = sum + heis::littlewood_paley_project(proj, m, beta);
    const SampledField rec = heis::reconstruct(proj);
    REQUIRE(rel_l2(sum, rec) <= 1e-12);
    REQUIRE(rel_l2(sum, f) <= 3e-2);
  }

  SECTION("support bookkeeping for the localized multiplier") {
    // F_{rho,delta,2^k r}(P_m f) vanishes unless -3 <= k + m <= 2 for
    // rho in [1/2,1], r in [1,2], delta <= 1/4: the multiplier product
    // phi((rho - 2^k r lambda)/delta) beta(2^-m lambda) is zero at every
    // quadrature node. The composition is evaluated on one cache.
    const auto proj = heis::project_all(f, sg);
    const heis::BumpFunction phi = heis::make_standard_bump({-1.0, 1.0});
    const double delta = 0.25, rho = 0.75, r = 1.5;
    bool saw_nonzero_inside = false;
    for (int m = -4; m <= 4; ++m) {
      auto banded = proj;  // node fields scaled by beta(2^-m lambda_i)
      for (std::size_t i = 0; i < banded.grid.size(); ++i) {
        const double b = beta(std::pow(2.0, -m) * banded.grid.lambda_nodes[i]);
        for (auto& v : banded.at_node[i].v) v *= b;
      }
      for (int k = -5; k <= 5; ++k) {
        const SampledField fr =
            heis::multiplier_op(banded, phi, rho, delta, std::pow(2.0, k) * r);
        const double norm = heis::lp_norm(fr, 2.0);
        INFO("k = " << k << ", m = " << m);
        if (k + m >= -3 && k + m <= 2) {
          if (norm > 0.0) saw_nonzero_inside = true;
        } else {
          REQUIRE(norm == 0.0);
        }
      }
    }
    REQUIRE(saw_nonzero_inside);
  }
}
