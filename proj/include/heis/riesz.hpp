#pragma once

// Linear and bilinear Riesz means, their kernels, the auxiliary multiplier
// F_{rho,delta,r} and square function D_{delta,k}, the localized bilinear
// pieces of the dyadic decomposition, and finite-grid maximal operators.
//
// All multiplier-type operators consume cached spectral projections
// (SpectralProjections); each application is then a weighted combination
// of the cached P_lambda fields.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "heis/bump.hpp"
#include "heis/grid.hpp"
#include "heis/laguerre.hpp"
#include "heis/quadrature.hpp"
#include "heis/spectral.hpp"

namespace heis {

// Parameter bundle of the maximal-operator experiments. p1, p2 are the
// input Lebesgue exponents (may be infinity), 1/p = 1/p1 + 1/p2.
struct RieszParams {
  int n = 1;
  double alpha = 1.0;   // smoothness exponent
  double r = 1.0;       // scale
  double delta = 0.25;  // localization width, in (0, 1/4]
  double kappa = 2.0;   // double-partition exponent, delta_tilde = delta^(1+kappa)
  double b = 1.1;       // Sobolev-type exponent, > (D-1)/2
  double p1 = 4.0;
  double p2 = 4.0;

  int homogeneous_dim() const { return 2 * n + 2; }        // Q
  int topological_dim() const { return 2 * n + 1; }        // D
  int kernel_order() const { return homogeneous_dim() / 2 + 1; }  // m = Q/2 + 1

  double p() const {
    const double i1 = std::isinf(p1) ? 0.0 : 1.0 / p1;
    const double i2 = std::isinf(p2) ? 0.0 : 1.0 / p2;
    const double ip = i1 + i2;
    return ip == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / ip;
  }

  double delta_tilde() const { return std::pow(delta, 1.0 + kappa); }

  void validate() const {
    if (n < 1) throw std::invalid_argument("RieszParams: n >= 1");
    if (!(alpha >= 0.0)) throw std::invalid_argument("RieszParams: alpha >= 0");
    if (!(r > 0.0)) throw std::invalid_argument("RieszParams: r > 0");
    if (!(delta > 0.0 && delta <= 0.25))
      throw std::invalid_argument("RieszParams: delta in (0, 1/4]");
    if (!(kappa > 0.0)) throw std::invalid_argument("RieszParams: kappa > 0");
    if (!(b > 0.5 * (topological_dim() - 1)))
      throw std::invalid_argument("RieszParams: b > (D-1)/2");
    if (!(p1 >= 2.0) || !(p2 >= 2.0))
      throw std::invalid_argument("RieszParams: p1, p2 in [2, inf]");
  }
};

// Finite realization of sup_{r>0} = sup_k sup_{1<=r<=2} at scales 2^k r.
// r_samples counts subintervals of [1, 2]; the sample set uses the
// r_samples+1 lattice points 1 + j/r_samples so that doubling r_samples
// refines to a superset.
struct MaximalGrid {
  int k_min = -6;
  int k_max = 6;
  int r_samples = 16;

  void validate() const {
    if (k_min > k_max) throw std::invalid_argument("MaximalGrid: empty k range");
    if (r_samples < 4) throw std::invalid_argument("MaximalGrid: r_samples >= 4");
  }

  double r_point(int j) const { return 1.0 + static_cast<double>(j) / r_samples; }
  /// Trapezoid weight for the integral over [1, 2].
  double r_weight(int j) const {
    return (j == 0 || j == r_samples ? 0.5 : 1.0) / r_samples;
  }
};

/// (1-u)_+^a with the right-continuous convention (value 0 at u = 1).
inline double riesz_multiplier(double u, double a) {
  const double v = 1.0 - u;
  if (v <= 0.0) return 0.0;
  return a == 0.0 ? 1.0 : std::pow(v, a);
}

// ---- linear operators ------------------------------------------------------

/// S_r^a f = int (1 - r lambda)_+^a P_lambda f dmu(lambda).
inline SampledField linear_riesz(const SpectralProjections& proj, double r,
                                 double exponent) {
  SampledField acc = SampledField::zero(proj.field_spec);
  for (std::size_t i = 0; i < proj.grid.size(); ++i) {
    const double m = riesz_multiplier(r * proj.grid.lambda_nodes[i], exponent);
    if (m != 0.0) axpy(acc, m * proj.grid.lambda_weights[i], proj.at_node[i]);
  }
  return acc;
}

/// T_m f = int_a^b m(lambda) P_lambda f dmu(lambda).
inline SampledField general_multiplier(const SpectralProjections& proj,
                                       const std::function<double(double)>& m_fn,
                                       double a, double b_end) {
  if (!(a >= 0.0) || !(a < b_end))
    throw std::invalid_argument("general_multiplier: need 0 <= a < b_end");
  SampledField acc = SampledField::zero(proj.field_spec);
  for (std::size_t i = 0; i < proj.grid.size(); ++i) {
    const double lam = proj.grid.lambda_nodes[i];
    if (lam < a || lam > b_end) continue;
    axpy(acc, m_fn(lam) * proj.grid.lambda_weights[i], proj.at_node[i]);
  }
  return acc;
}

/// F_{rho,delta,r}^phi f = int phi((rho - r lambda)/delta) P_lambda f dmu.
inline SampledField multiplier_op(const SpectralProjections& proj,
                                  const BumpFunction& phi, double rho,
                                  double delta, double r) {
  if (!(delta > 0.0) || !(r > 0.0))
    throw std::invalid_argument("multiplier_op: delta, r > 0");
  SampledField acc = SampledField::zero(proj.field_spec);
  for (std::size_t i = 0; i < proj.grid.size(); ++i) {
    const double arg = (rho - r * proj.grid.lambda_nodes[i]) / delta;
    if (!phi.support().contains(arg)) continue;
    const double m = phi(arg);
    if (m != 0.0) axpy(acc, m * proj.grid.lambda_weights[i], proj.at_node[i]);
  }
  return acc;
}

// ---- pointwise kernels ------------------------------------------------------

namespace detail {

/// sum_k (2k+n)^{-n-1} (etilde_k^lambda + etilde_k^{-lambda})(omega);
/// real because the +/- pair contributes 2 cos(mu t) phi_k.
inline double etilde_pair_sum(int n, int K, double lambda,
                              const GroupPoint& omega) {
  const double zz = omega.abs_z_squared();
  double acc = 0.0;
  for (int k = 0; k <= K; ++k) {
    const double mu = lambda / (2 * k + n);
    const double phi = laguerre_fn(k, n, mu * zz);
    const double coeff = std::pow(2.0 * k + n, -(n + 1));
    acc += coeff * 2.0 * std::cos(mu * omega.t()) * phi;
  }
  return acc;
}

}  // namespace detail

// R_t^l(omega): kernel of f -> int_0^t (1 - lambda/t)^l P_lambda f dmu.
// The lambda integral is evaluated with the substitution lambda = t u^2,
// which resolves the sqrt(lambda)-scale oscillation of the Laguerre factor
// and keeps the quadrature smooth in t.
inline cplx riesz_kernel(double t, int l, const GroupPoint& omega, int n, int K,
                         int quad_points = 96) {
  if (!(t > 0.0)) throw std::invalid_argument("riesz_kernel: t > 0");
  if (l < 0) throw std::invalid_argument("riesz_kernel: l >= 0");
  const auto rule = gauss_legendre<double>(quad_points, 0.0, 1.0);
  const double density = std::pow(2.0 * std::numbers::pi, -(n + 1));
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double u = rule.nodes[q];
    const double lam = t * u * u;
    if (lam == 0.0) continue;
    const double mult = std::pow(1.0 - u * u, l);
    const double meas = density * std::pow(lam, n) * 2.0 * t * u * rule.weights[q];
    acc += mult * meas * detail::etilde_pair_sum(n, K, lam, omega);
  }
  return {acc, 0.0};
}

// K_{rho,delta,r}^phi(omega) = sum_k (2k+n)^{-n-1}
//   int_R phi((rho - r|lambda|)/delta) etilde_k^lambda(omega) dmu(lambda).
// The integrand is supported on |lambda| in [rho-delta, rho+delta]/r.
inline cplx multiplier_kernel(const BumpFunction& phi, double rho, double delta,
                              double r, const GroupPoint& omega, int K,
                              int quad_points = 64) {
  if (!(delta > 0.0) || !(r > 0.0))
    throw std::invalid_argument("multiplier_kernel: delta, r > 0");
  const int n = omega.n();
  const double lo = std::max(0.0, (rho - delta) / r);
  const double hi = (rho + delta) / r;
  if (!(hi > lo)) return {0.0, 0.0};
  const auto rule = gauss_legendre<double>(quad_points, lo, hi);
  const double density = std::pow(2.0 * std::numbers::pi, -(n + 1));
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double lam = rule.nodes[q];
    if (lam <= 0.0) continue;
    const double m = phi((rho - r * lam) / delta);
    if (m == 0.0) continue;
    const double meas = density * std::pow(lam, n) * rule.weights[q];
    acc += m * meas * detail::etilde_pair_sum(n, K, lam, omega);
  }
  return {acc, 0.0};
}

// ---- square function ---------------------------------------------------------

// D_{delta,k}^phi f(x) = ( sum_{rho in delta Z cap [0,2]}
//                          int_1^2 |F_{rho,delta,2^k r}^phi f(x)|^2 dr )^(1/2).
// Evaluated as a quadratic form in the cached projections: the scalar matrix
// M_{ij} = sum_rho int w_i w_j phi_i phi_j dr is assembled first (sparse in
// practice since each (rho, r) window touches few lambda nodes), then applied
// to the fields once.
inline SampledField square_fn(const SpectralProjections& proj,
                              const BumpFunction& phi, double delta, int k,
                              const MaximalGrid& grid) {
  if (!(delta > 0.0 && delta <= 0.25))
    throw std::invalid_argument("square_fn: delta in (0, 1/4]");
  grid.validate();
  const std::size_t nn = proj.grid.size();
  const double scale = std::pow(2.0, k);
  std::vector<double> M(nn * nn, 0.0);
  std::vector<double> vals(nn);
  std::vector<std::size_t> active;
  const long n_rho = std::lround(std::floor(2.0 / delta));
  for (long q = 0; q <= n_rho; ++q) {
    const double rho = delta * static_cast<double>(q);
    for (int j = 0; j <= grid.r_samples; ++j) {
      const double r = scale * grid.r_point(j);
      const double rw = grid.r_weight(j);
      active.clear();
      for (std::size_t i = 0; i < nn; ++i) {
        const double arg = (rho - r * proj.grid.lambda_nodes[i]) / delta;
        if (!phi.support().contains(arg)) continue;
        const double m = phi(arg);
        if (m == 0.0) continue;
        vals[i] = m * proj.grid.lambda_weights[i];
        active.push_back(i);
      }
      for (std::size_t a : active)
        for (std::size_t b : active) M[a * nn + b] += rw * vals[a] * vals[b];
    }
  }

  SampledField out = SampledField::zero(proj.field_spec);
  const std::size_t len = out.v.size();
  std::vector<double> acc(len, 0.0);
  for (std::size_t i = 0; i < nn; ++i) {
    if (M[i * nn + i] != 0.0) {
      const double mii = M[i * nn + i];
      const auto& fi = proj.at_node[i].v;
      for (std::size_t x = 0; x < len; ++x) acc[x] += mii * std::norm(fi[x]);
    }
    for (std::size_t j = i + 1; j < nn; ++j) {
      const double mij = M[i * nn + j];
      if (mij == 0.0) continue;
      const auto& fi = proj.at_node[i].v;
      const auto& fj = proj.at_node[j].v;
      for (std::size_t x = 0; x < len; ++x) {
        const cplx p = fi[x] * std::conj(fj[x]);
        acc[x] += 2.0 * mij * p.real();
      }
    }
  }
  for (std::size_t x = 0; x < len; ++x)
    out.v[x] = std::sqrt(std::max(0.0, acc[x]));
  return out;
}

// ---- bilinear operators --------------------------------------------------------

namespace detail {

/// Tensor quadrature sum_{i,j} c(lambda_i + lambda_j) P_i f P_j g over the
/// cached projections, with an arbitrary scalar multiplier c.
template <typename Mult>
inline SampledField bilinear_tensor(const SpectralProjections& pf,
                                    const SpectralProjections& pg,
                                    Mult&& multiplier) {
  if (!(pf.field_spec == pg.field_spec))
    throw std::invalid_argument("bilinear operator: grid mismatch");
  if (pf.grid.lambda_nodes != pg.grid.lambda_nodes)
    throw std::invalid_argument("bilinear operator: spectral grid mismatch");
  const std::size_t nn = pf.grid.size();
  SampledField acc = SampledField::zero(pf.field_spec);
  const std::size_t len = acc.v.size();
  for (std::size_t i = 0; i < nn; ++i) {
    for (std::size_t j = 0; j < nn; ++j) {
      const double c = multiplier(pf.grid.lambda_nodes[i], pg.grid.lambda_nodes[j]);
      if (c == 0.0) continue;
      const double w = c * pf.grid.lambda_weights[i] * pg.grid.lambda_weights[j];
      const auto& fi = pf.at_node[i].v;
      const auto& gj = pg.at_node[j].v;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
      for (long long x = 0; x < static_cast<long long>(len); ++x)
        acc.v[static_cast<std::size_t>(x)] +=
            w * fi[static_cast<std::size_t>(x)] * gj[static_cast<std::size_t>(x)];
    }
  }
  return acc;
}

}  // namespace detail

/// S_r^alpha(f,g) = int int (1 - r(l1+l2))_+^alpha P_{l1}f P_{l2}g dmu dmu.
inline SampledField bilinear_riesz(const SpectralProjections& pf,
                                   const SpectralProjections& pg, double alpha,
                                   double r) {
  if (!(r > 0.0)) throw std::invalid_argument("bilinear_riesz: r > 0");
  return detail::bilinear_tensor(pf, pg, [&](double l1, double l2) {
    return riesz_multiplier(r * (l1 + l2), alpha);
  });
}

enum class LocalizedKind { Psi, Psi0 };

// S_r^delta(f,g) with multiplier psi((1 - r(l1+l2))/delta), or the
// low-frequency piece S_r^0(f,g) with psi_0(r(l1+l2)).
inline SampledField bilinear_localized(const SpectralProjections& pf,
                                       const SpectralProjections& pg,
                                       const BumpFunction& bump,
                                       LocalizedKind kind, double delta,
                                       double r) {
  if (!(r > 0.0)) throw std::invalid_argument("bilinear_localized: r > 0");
  if (kind == LocalizedKind::Psi) {
    const Interval s = bump.support();
    if (s.lo < 0.5 - 1e-12 || s.hi > 2.0 + 1e-12)
      throw std::invalid_argument("bilinear_localized: psi must be supported in [1/2, 2]");
    if (!(delta > 0.0))
      throw std::invalid_argument("bilinear_localized: delta > 0");
    return detail::bilinear_tensor(pf, pg, [&](double l1, double l2) {
      const double arg = (1.0 - r * (l1 + l2)) / delta;
      return bump.support().contains(arg) ? bump(arg) : 0.0;
    });
  }
  const Interval s = bump.support();
  if (s.lo < -0.75 - 1e-12 || s.hi > 0.75 + 1e-12)
    throw std::invalid_argument("bilinear_localized: psi0 must be supported in [-3/4, 3/4]");
  return detail::bilinear_tensor(pf, pg, [&](double l1, double l2) {
    const double arg = r * (l1 + l2);
    return bump.support().contains(arg) ? bump(arg) : 0.0;
  });
}

/// d/dr S_r^delta(f,g) = -(1/delta) int int (l1+l2) psi'((1-r(l1+l2))/delta) ...
inline SampledField bilinear_localized_dr(const SpectralProjections& pf,
                                          const SpectralProjections& pg,
                                          const BumpFunction& psi, double delta,
                                          double r) {
  if (!(r > 0.0) || !(delta > 0.0))
    throw std::invalid_argument("bilinear_localized_dr: r, delta > 0");
  return detail::bilinear_tensor(pf, pg, [&](double l1, double l2) {
    const double arg = (1.0 - r * (l1 + l2)) / delta;
    if (!psi.support().contains(arg)) return 0.0;
    return -(l1 + l2) / delta * psi.derivative(arg, 1);
  });
}

/// Pointwise max of |field(r)| over the maximal grid's scale set.
template <typename FieldAt>
inline SampledField maximal_over_grid(const GridSpec& spec,
                                      const MaximalGrid& grid, FieldAt&& at) {
  grid.validate();
  SampledField out = SampledField::zero(spec);
  for (int k = grid.k_min; k <= grid.k_max; ++k) {
    const double scale = std::pow(2.0, k);
    for (int j = 0; j <= grid.r_samples; ++j) {
      const SampledField s = at(scale * grid.r_point(j));
      for (std::size_t x = 0; x < out.v.size(); ++x)
        out.v[x] = std::max(out.v[x].real(), std::abs(s.v[x]));
    }
  }
  return out;
}

/// S_*^alpha(f,g) restricted to the finite grid of scales.
inline SampledField maximal_bilinear(const SpectralProjections& pf,
                                     const SpectralProjections& pg, double alpha,
                                     const MaximalGrid& grid) {
  return maximal_over_grid(pf.field_spec, grid, [&](double r) {
    return bilinear_riesz(pf, pg, alpha, r);
  });
}

}  // namespace heis
