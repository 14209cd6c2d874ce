#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "heis/bump.hpp"

using heis::BumpFunction;

namespace {

/// Central-difference derivative of the bump's (order-1)-th derivative.
double fd_derivative(const BumpFunction& f, double t, int order, double h) {
  if (order == 1) return (f(t + h) - f(t - h)) / (2.0 * h);
  return (f.derivative(t + h, order - 1) - f.derivative(t - h, order - 1)) /
         (2.0 * h);
}

}  // namespace

TEST_CASE("standard bump") {
  const BumpFunction phi = heis::make_standard_bump({-1.0, 1.0});

  SECTION("positive at the midpoint, zero at the endpoints") {
    REQUIRE(phi(0.0) > 0.0);
    REQUIRE(phi(-1.0) == 0.0);
    REQUIRE(phi(1.0) == 0.0);
    REQUIRE(phi(1.5) == 0.0);
  }

  SECTION("all derivatives vanish at the endpoints") {
    for (int order = 0; order <= 8; ++order) {
      REQUIRE(std::abs(phi.derivative(-1.0, order)) <= 1e-10);
      REQUIRE(std::abs(phi.derivative(1.0 - 1e-9, order)) <= 1e-10);
    }
  }

  SECTION("normalized C^N norm stays at 1") {
    REQUIRE(phi.cn_norm_bound() == 1.0);
    REQUIRE(heis::in_cn_class(phi, phi.norm_order()));
  }

  SECTION("support outside [-1,1] fails the class predicate") {
    const BumpFunction wide = heis::make_standard_bump({-2.0, 2.0});
    REQUIRE_FALSE(heis::in_cn_class(wide, 4));
  }

  SECTION("derivatives agree with finite differences") {
    for (int order = 1; order <= 6; ++order)
      for (double t : {-0.6, -0.1, 0.3, 0.8}) {
        const double analytic = phi.derivative(t, order);
        const double fd = fd_derivative(phi, t, order, 1e-6);
        REQUIRE(std::abs(analytic - fd) <=
                1e-6 * std::max(1.0, std::abs(analytic)) + 1e-8);
      }
  }
}

TEST_CASE("unity partition") {
  const BumpFunction phi = heis::make_unity_partition();

  SECTION("translates sum to one") {
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = -1.0 + 2.0 * i / 1000.0;
      double s = 0.0;
      for (int l = -3; l <= 3; ++l) s += phi(t + l);
      worst = std::max(worst, std::abs(s - 1.0));
    }
    REQUIRE(worst <= 1e-10);
  }

  SECTION("phi(0) = 1 and phi >= 0") {
    REQUIRE_THAT(phi(0.0), Catch::Matchers::WithinAbs(1.0, 1e-12));
    for (int i = 0; i <= 500; ++i) {
      const double t = -1.0 + 2.0 * i / 500.0;
      REQUIRE(phi(t) >= -1e-15);
    }
  }

  SECTION("support inside [-3/4, 3/4]") {
    REQUIRE(phi(-0.76) == 0.0);
    REQUIRE(phi(0.76) == 0.0);
    REQUIRE(phi.support().lo >= -0.75);
    REQUIRE(phi.support().hi <= 0.75);
  }
}

TEST_CASE("phi_beta") {
  const BumpFunction phi = heis::make_unity_partition();

  SECTION("beta = 0 returns the same function") {
    const BumpFunction same = heis::make_phi_beta(phi, 0);
    for (double t : {-0.5, 0.0, 0.3}) REQUIRE(same(t) == phi(t));
  }

  SECTION("phi_1 vanishes at the origin") {
    const BumpFunction phi1 = heis::make_phi_beta(phi, 1);
    REQUIRE(phi1(0.0) == 0.0);
    REQUIRE_THAT(phi1(0.25), Catch::Matchers::WithinRel(0.25 * phi(0.25), 1e-12));
  }

  SECTION("derivative consistency") {
    const BumpFunction phi2 = heis::make_phi_beta(phi, 2);
    for (double t : {-0.4, 0.2, 0.5}) {
      const double analytic = phi2.derivative(t, 1);
      const double fd = fd_derivative(phi2, t, 1, 1e-6);
      REQUIRE(std::abs(analytic - fd) <= 1e-6 * std::max(1.0, std::abs(analytic)));
    }
  }
}

TEST_CASE("Littlewood-Paley beta") {
  const BumpFunction beta = heis::make_lp_beta();

  SECTION("dyadic dilates sum to one") {
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = std::pow(2.0, -6.0 + 12.0 * i / 1000.0);
      double s = 0.0;
      for (int m = -8; m <= 8; ++m) s += beta(std::pow(2.0, -m) * t);
      worst = std::max(worst, std::abs(s - 1.0));
    }
    REQUIRE(worst <= 1e-10);
  }

  SECTION("range [0, 1] and support [1/2, 2]") {
    for (int i = 0; i <= 10000; ++i) {
      const double t = 0.01 + 4.0 * i / 10000.0;
      const double v = beta(t);
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0 + 1e-12);
      if (t < 0.5 || t > 2.0) REQUIRE(v == 0.0);
    }
    REQUIRE_THAT(beta(1.0), Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("Riesz splitting") {
  SECTION("supports") {
    const auto [psi, psi0] = heis::make_riesz_splitting(1.5);
    for (double s : {0.4, 0.49, 2.01, 3.0}) REQUIRE(psi(s) == 0.0);
    for (double t : {-0.9, -0.76, 0.76, 0.9}) REQUIRE(psi0(t) == 0.0);
    REQUIRE(psi.support().lo >= 0.5);
    REQUIRE(psi.support().hi <= 2.0);
    REQUIRE(psi0.support().lo >= -0.75);
    REQUIRE(psi0.support().hi <= 0.75);
  }

  SECTION("identity at t = 0") {
    for (double alpha : {0.5, 1.0, 2.0}) {
      const auto [psi, psi0] = heis::make_riesz_splitting(alpha);
      double sum = psi0(0.0);
      for (int k = -2; k >= -20; --k) {
        const double d = std::pow(2.0, k);
        sum += std::pow(d, alpha) * psi(1.0 / d);
      }
      REQUIRE_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
  }

  SECTION("splitting residual on [0, 1 - 2^-10] at truncation 2^-12") {
    for (double alpha : {0.5, 1.0, 2.0}) {
      const auto [psi, psi0] = heis::make_riesz_splitting(alpha);
      double worst = 0.0;
      for (int i = 0; i <= 500; ++i) {
        const double t = (1.0 - std::pow(2.0, -10)) * i / 500.0;
        double sum = psi0(t);
        for (int k = -2; k >= -12; --k) {
          const double d = std::pow(2.0, k);
          sum += std::pow(d, alpha) * psi((1.0 - t) / d);
        }
        worst = std::max(worst, std::abs(std::pow(1.0 - t, alpha) - sum));
      }
      REQUIRE(worst <= 2.0 * std::pow(2.0, -12.0 * alpha) + 1e-14);
    }
  }

  SECTION("residual shrinks by about 2^-alpha per retained level") {
    // with truncation at level L the worst residual sits near t = 1 and
    // scales like 2^(-L alpha)
    for (double alpha : {0.5, 1.0}) {
      const auto [psi, psi0] = heis::make_riesz_splitting(alpha);
      auto residual = [&](int level) {
        double worst = 0.0;
        for (int i = 0; i <= 4000; ++i) {
          const double u = std::pow(2.0, -14.0 + 14.0 * i / 4000.0);
          const double t = 1.0 - u;
          double sum = psi0(t);
          for (int k = -2; k >= -level; --k) {
            const double d = std::pow(2.0, k);
            sum += std::pow(d, alpha) * psi(u / d);
          }
          worst = std::max(worst, std::abs(std::pow(u, alpha) - sum));
        }
        return worst;
      };
      const double r8 = residual(8);
      const double r9 = residual(9);
      const double r10 = residual(10);
      REQUIRE(r9 / r8 <= std::pow(2.0, -alpha) * 1.3);
      REQUIRE(r10 / r9 <= std::pow(2.0, -alpha) * 1.3);
    }
  }

  SECTION("extended-precision values agree with double evaluation") {
    const auto [psi, psi0] = heis::make_riesz_splitting(2.0);
    for (double s : {0.6, 1.0, 1.7}) {
      const double dv = psi(s);
      const double qv = static_cast<double>(psi.value_ext(s));
      REQUIRE(std::abs(dv - qv) <= 1e-13 * std::max(1.0, std::abs(dv)));
    }
  }
}

TEST_CASE("sigma support verification") {
  const auto [psi, psi0] = heis::make_riesz_splitting(2.0);
  const BumpFunction phi = heis::make_unity_partition();

  for (double delta : {0.125, 0.25}) {
    const auto rep = heis::verify_sigma_support(psi, phi, delta, 2.0, 10000, 42);
    INFO("delta = " << delta);
    REQUIRE(rep.violations == 0);
    REQUIRE(rep.max_violation == 0.0);
    REQUIRE(rep.witness_found);
  }

  REQUIRE_THROWS_AS(heis::verify_sigma_support(psi, phi, 0.3, 2.0, 10, 1),
                    std::invalid_argument);
}

TEST_CASE("Taylor reconstruction") {
  const auto [psi, psi0] = heis::make_riesz_splitting(2.0);
  const double delta = 1.0 / 16.0, kappa = 2.0;
  const double dt = std::pow(delta, 1.0 + kappa);

  SECTION("zero displacement reproduces psi exactly at N_max = 0") {
    const double sigma = 1.0 - delta;  // x0 = 1
    const double rho = 0.5, u1 = rho, u2 = sigma - rho;
    const auto res = heis::taylor_reconstruct(psi, delta, kappa, 0, sigma, rho, u1, u2);
    REQUIRE_THAT(res.truncated, Catch::Matchers::WithinRel(res.exact, 1e-13));
  }

  SECTION("error decreases geometrically with the expansion order") {
    // worst error over a sample of admissible points per truncation order;
    // under the converged plateau small remainder cancellations may wobble
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::array<double, 7> worst{};
    for (int pt = 0; pt < 64; ++pt) {
      const double x0 = 0.6 + 1.3 * unif(rng);
      const double sigma = dt * std::round((1.0 - delta * x0) / dt);
      const double rho = dt * std::round(2.0 * unif(rng) / dt);
      const double u1 = rho - dt * (2.0 * unif(rng) - 1.0);
      const double u2 = sigma - rho - dt * (2.0 * unif(rng) - 1.0);
      for (int nmax = 0; nmax <= 6; ++nmax) {
        const auto res =
            heis::taylor_reconstruct(psi, delta, kappa, nmax, sigma, rho, u1, u2);
        worst[static_cast<std::size_t>(nmax)] =
            std::max(worst[static_cast<std::size_t>(nmax)], res.error());
      }
    }
    const double plateau = 1e-6 * worst[0];
    for (int nmax = 1; nmax <= 6; ++nmax)
      REQUIRE(worst[static_cast<std::size_t>(nmax)] <=
              std::max(worst[static_cast<std::size_t>(nmax) - 1], plateau));
    REQUIRE(worst[6] <= 1e-4 * worst[0]);
  }

  SECTION("psi derivatives agree with finite differences up to order 8") {
    for (int order = 1; order <= 8; ++order)
      for (double s : {0.8, 1.2, 1.6}) {
        const double analytic = psi.derivative(s, order);
        const double fd = fd_derivative(psi, s, order, 1e-6);
        REQUIRE(std::abs(analytic - fd) <=
                2e-6 * std::max(1.0, std::abs(analytic)) + 1e-7);
      }
  }
}
