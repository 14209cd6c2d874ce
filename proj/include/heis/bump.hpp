#pragma once

// Smooth compactly supported cutoffs and every construction the operator
// machinery needs: the C^N(I) mollifier class, the unity partition
// sum_l phi(t+l) = 1, phi_beta = t^beta phi, the dyadic splitting of
// (1-t)_+^alpha into psi/psi_0, the Littlewood-Paley beta, the sigma-support
// verification and the two-variable Taylor reconstruction.
//
// Every bump is built from the classical mollifier exp(-1/(1-s^2)).
// Derivatives of any order come from truncated Taylor-jet arithmetic, so
// they are exact up to rounding (no numerical differentiation). Values are
// additionally evaluable in extended precision: the splitting residual for
// large alpha sits far below double roundoff.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heis/quadrature.hpp"

#if defined(__SIZEOF_FLOAT128__) && !defined(HEIS_NO_FLOAT128)
#include <quadmath.h>
#define HEIS_HAS_FLOAT128 1
#else
#define HEIS_HAS_FLOAT128 0
#endif

namespace heis {

#if HEIS_HAS_FLOAT128
using real128 = __float128;
#else
using real128 = long double;
#endif

namespace detail {

inline double r_exp(double x) { return std::exp(x); }
inline long double r_exp(long double x) { return std::exp(x); }
inline double r_log(double x) { return std::log(x); }
inline long double r_log(long double x) { return std::log(x); }
#if HEIS_HAS_FLOAT128
inline __float128 r_exp(__float128 x) { return expq(x); }
inline __float128 r_log(__float128 x) { return logq(x); }
#endif

inline constexpr int kMaxJetOrder = 32;

// Truncated Taylor series at a point: c[k] = f^{(k)}/k!. Enough arithmetic
// for the mollifier family: +, -, *, /, exp, log, real powers.
template <typename Real>
struct Jet {
  std::vector<Real> c;

  explicit Jet(std::size_t len) : c(len, Real(0)) {}

  static Jet variable(Real x0, std::size_t len) {
    Jet j(len);
    j.c[0] = x0;
    if (len > 1) j.c[1] = Real(1);
    return j;
  }

  static Jet constant(Real v, std::size_t len) {
    Jet j(len);
    j.c[0] = v;
    return j;
  }

  std::size_t len() const { return c.size(); }
};

template <typename Real>
inline Jet<Real> operator+(const Jet<Real>& a, const Jet<Real>& b) {
  Jet<Real> r(a.len());
  for (std::size_t k = 0; k < a.len(); ++k) r.c[k] = a.c[k] + b.c[k];
  return r;
}

template <typename Real>
inline Jet<Real> operator-(const Jet<Real>& a, const Jet<Real>& b) {
  Jet<Real> r(a.len());
  for (std::size_t k = 0; k < a.len(); ++k) r.c[k] = a.c[k] - b.c[k];
  return r;
}

template <typename Real>
inline Jet<Real> operator*(const Jet<Real>& a, const Jet<Real>& b) {
  Jet<Real> r(a.len());
  for (std::size_t k = 0; k < a.len(); ++k) {
    Real s = 0;
    for (std::size_t j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
    r.c[k] = s;
  }
  return r;
}

template <typename Real>
inline Jet<Real> operator*(Real s, const Jet<Real>& a) {
  Jet<Real> r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

template <typename Real>
inline Jet<Real> jet_div(const Jet<Real>& a, const Jet<Real>& b) {
  Jet<Real> r(a.len());
  for (std::size_t k = 0; k < a.len(); ++k) {
    Real s = a.c[k];
    for (std::size_t j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
    r.c[k] = s / b.c[0];
  }
  return r;
}

template <typename Real>
inline Jet<Real> jet_exp(const Jet<Real>& u) {
  Jet<Real> h(u.len());
  h.c[0] = r_exp(u.c[0]);
  for (std::size_t k = 1; k < u.len(); ++k) {
    Real s = 0;
    for (std::size_t j = 1; j <= k; ++j) s += Real(j) * u.c[j] * h.c[k - j];
    h.c[k] = s / Real(k);
  }
  return h;
}

template <typename Real>
inline Jet<Real> jet_log(const Jet<Real>& u) {
  Jet<Real> l(u.len());
  l.c[0] = r_log(u.c[0]);
  for (std::size_t k = 1; k < u.len(); ++k) {
    Real s = Real(k) * u.c[k];
    for (std::size_t j = 1; j < k; ++j) s -= Real(j) * l.c[j] * u.c[k - j];
    l.c[k] = s / (Real(k) * u.c[0]);
  }
  return l;
}

/// u^alpha for u_0 > 0.
template <typename Real>
inline Jet<Real> jet_pow(const Jet<Real>& u, Real alpha) {
  return jet_exp(alpha * jet_log(u));
}

// ---- the mollifier family --------------------------------------------

// exp(-1/(1-s^2)^2) on (-1,1), identically zero outside. The squared
// denominator keeps high-order derivatives moderate: the two-variable
// Taylor expansion of psi must converge per order at kappa = 2,
// delta = 1/16, which the 1/(1-s^2) exponent cannot sustain beyond
// order four.
template <typename Real>
inline Real mollifier_value(Real s) {
  if (!(s > Real(-1) && s < Real(1))) return Real(0);
  const Real w = Real(1) - s * s;
  return r_exp(Real(-1) / (w * w));
}

template <typename Real>
inline Jet<Real> mollifier_jet(Real s0, std::size_t len) {
  if (!(s0 > Real(-1) && s0 < Real(1))) return Jet<Real>(len);
  Jet<Real> s = Jet<Real>::variable(s0, len);
  Jet<Real> w = Jet<Real>::constant(Real(1), len) - s * s;
  Jet<Real> g = jet_div(Jet<Real>::constant(Real(-1), len), w * w);
  return jet_exp(g);
}

/// integral of the mollifier over [-1, 1], cached per Real type.
template <typename Real>
inline Real mollifier_mass() {
  static const Real mass = [] {
    // composite Gauss-Legendre; the integrand is flat at the endpoints.
    const auto rule = gauss_legendre<Real>(48);
    Real total = 0;
    const int panels = 16;
    for (int p = 0; p < panels; ++p) {
      const Real a = Real(-1) + Real(2 * p) / Real(panels);
      const Real b = Real(-1) + Real(2 * (p + 1)) / Real(panels);
      const Real mid = (a + b) / Real(2), half = (b - a) / Real(2);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        total += half * rule.weights[i] * mollifier_value(mid + half * rule.nodes[i]);
    }
    return total;
  }();
  return mass;
}

/// Smooth step: 0 for x <= lo, 1 for x >= hi, strictly increasing between.
template <typename Real>
inline Real step_value(Real x, Real lo, Real hi) {
  if (x <= lo) return Real(0);
  if (x >= hi) return Real(1);
  // Theta(x) = int_{-1}^{s(x)} mollifier / mass, s affine [lo,hi] -> [-1,1]
  const Real s_end = (Real(2) * x - lo - hi) / (hi - lo);
  const auto& rule = [] {
    static const auto r = gauss_legendre<Real>(48);
    return r;
  }();
  Real total = 0;
  const int panels = 16;
  for (int p = 0; p < panels; ++p) {
    Real a = Real(-1) + (s_end + Real(1)) * Real(p) / Real(panels);
    Real b = Real(-1) + (s_end + Real(1)) * Real(p + 1) / Real(panels);
    const Real mid = (a + b) / Real(2), half = (b - a) / Real(2);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      total += half * rule.weights[i] * mollifier_value(mid + half * rule.nodes[i]);
  }
  total /= mollifier_mass<Real>();
  // quadrature noise must not push the step outside [0, 1]
  if (total < Real(0)) return Real(0);
  if (total > Real(1)) return Real(1);
  return total;
}

template <typename Real>
inline Jet<Real> step_jet(Real x, Real lo, Real hi, std::size_t len) {
  Jet<Real> out(len);
  out.c[0] = step_value(x, lo, hi);
  if (len == 1 || x <= lo || x >= hi) return out;
  // Theta'(x) = mollifier(s(x)) * s'(x) / mass
  const Real sx = (Real(2) * x - lo - hi) / (hi - lo);
  const Real chain = Real(2) / (hi - lo);
  Jet<Real> m = mollifier_jet(sx, len - 1);
  Real chain_k = chain / mollifier_mass<Real>();
  for (std::size_t k = 1; k < len; ++k) {
    out.c[k] = m.c[k - 1] * chain_k / Real(k);  // Taylor coeff bookkeeping
    chain_k *= chain;
  }
  return out;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double t) const { return t >= lo && t <= hi; }
  double width() const { return hi - lo; }
};

// Evaluation backend. Implementations are immutable; BumpFunction shares
// them by shared_ptr so copies are cheap and thread-safe.
class BumpImpl {
 public:
  virtual ~BumpImpl() = default;
  /// Taylor coefficients (value, f'/1!, f''/2!, ...) at t.
  virtual Jet<double> taylor(double t, std::size_t len) const = 0;
  virtual real128 value_ext(real128 t) const = 0;
  virtual Interval support() const = 0;
  virtual std::string preset_name() const = 0;
  virtual std::map<std::string, double> preset_params() const = 0;
};

// Scaled mollifier on [a, b]: amplitude * exp(-1/(1-s^2)), s affine.
class MollifierImpl final : public BumpImpl {
 public:
  MollifierImpl(Interval sup, double amplitude, int norm_order)
      : sup_(sup), amp_(amplitude), norm_order_(norm_order) {}

  template <typename Real>
  Real value_core(Real t) const {
    const Real s = (Real(2) * t - Real(sup_.lo) - Real(sup_.hi)) / Real(sup_.width());
    return Real(amp_) * mollifier_value(s);
  }

  Jet<double> taylor(double t, std::size_t len) const override {
    if (!sup_.contains(t)) return Jet<double>(len);
    const double s0 = (2.0 * t - sup_.lo - sup_.hi) / sup_.width();
    const double chain = 2.0 / sup_.width();
    Jet<double> m = mollifier_jet(s0, len);
    double ck = amp_;
    for (std::size_t k = 0; k < len; ++k) {
      m.c[k] *= ck;
      ck *= chain;
    }
    return m;
  }

  real128 value_ext(real128 t) const override { return value_core<real128>(t); }
  Interval support() const override { return sup_; }
  std::string preset_name() const override { return "mollifier"; }
  std::map<std::string, double> preset_params() const override {
    return {{"lo", sup_.lo}, {"hi", sup_.hi}, {"norm_order", double(norm_order_)}};
  }

  double amplitude() const { return amp_; }
  int norm_order() const { return norm_order_; }

 private:
  Interval sup_;
  double amp_;
  int norm_order_;
};

// phi(t) = Theta(t + 1/2) - Theta(t - 1/2), Theta rising on [-1/4, 1/4];
// the translates phi(t + l) telescope to 1.
class UnityPartitionImpl final : public BumpImpl {
 public:
  template <typename Real>
  Real value_core(Real t) const {
    const Real q = Real(0.25);
    return step_value(t + Real(0.5), -q, q) - step_value(t - Real(0.5), -q, q);
  }

  Jet<double> taylor(double t, std::size_t len) const override {
    return step_jet(t + 0.5, -0.25, 0.25, len) - step_jet(t - 0.5, -0.25, 0.25, len);
  }

  real128 value_ext(real128 t) const override { return value_core<real128>(t); }
  Interval support() const override { return {-0.75, 0.75}; }
  std::string preset_name() const override { return "unity-partition"; }
  std::map<std::string, double> preset_params() const override { return {}; }
};

// chi(u) = Theta(2u) - Theta(u), Theta rising on [1, 2]. Supported in
// [1/2, 2], values in [0, 1], and sum_j chi(2^j u) = 1 for u > 0. Serves
// as the Littlewood-Paley beta and as the angular factor of psi.
class DyadicChiImpl final : public BumpImpl {
 public:
  template <typename Real>
  static Real chi_value(Real u) {
    return step_value(Real(2) * u, Real(1), Real(2)) - step_value(u, Real(1), Real(2));
  }

  static Jet<double> chi_taylor(double u, std::size_t len) {
    Jet<double> a = step_jet(2.0 * u, 1.0, 2.0, len);
    double pw = 1.0;
    for (std::size_t k = 0; k < len; ++k) {
      a.c[k] *= pw;
      pw *= 2.0;
    }
    return a - step_jet(u, 1.0, 2.0, len);
  }

  Jet<double> taylor(double t, std::size_t len) const override {
    return chi_taylor(t, len);
  }
  real128 value_ext(real128 t) const override { return chi_value<real128>(t); }
  Interval support() const override { return {0.5, 2.0}; }
  std::string preset_name() const override { return "lp-beta"; }
  std::map<std::string, double> preset_params() const override { return {}; }
};

/// psi(s) = s^alpha chi(s), in C_0^inf([1/2, 2]).
class RieszPsiImpl final : public BumpImpl {
 public:
  explicit RieszPsiImpl(double alpha) : alpha_(alpha) {}

  template <typename Real>
  Real value_core(Real s) const {
    if (!(s > Real(0.5) && s < Real(2))) return Real(0);
    const Real chi = DyadicChiImpl::chi_value(s);
    return r_exp(Real(alpha_) * r_log(s)) * chi;
  }

  Jet<double> taylor(double t, std::size_t len) const override {
    if (!(t > 0.5 && t < 2.0)) return Jet<double>(len);
    Jet<double> s = Jet<double>::variable(t, len);
    return jet_pow(s, alpha_) * DyadicChiImpl::chi_taylor(t, len);
  }

  real128 value_ext(real128 t) const override { return value_core<real128>(t); }
  Interval support() const override { return {0.5, 2.0}; }
  std::string preset_name() const override { return "riesz-psi"; }
  std::map<std::string, double> preset_params() const override {
    return {{"alpha", alpha_}};
  }

 private:
  double alpha_;
};

// psi_0(t) = (1-t)^alpha [chi(1-t) + chi(2(1-t))] cut(t), where cut is a
// smooth step equal to 1 for t >= -1/8; together with the psi terms at
// delta in {1/2, 1} this reproduces (1-t)_+^alpha for 3/4 <= 1-t.
class RieszPsi0Impl final : public BumpImpl {
 public:
  explicit RieszPsi0Impl(double alpha) : alpha_(alpha) {}

  template <typename Real>
  Real value_core(Real t) const {
    const Real u = Real(1) - t;
    if (!(u > Real(0.25) && u < Real(2))) return Real(0);
    const Real cut = step_value(t, Real(-0.625), Real(-0.125));
    if (cut == Real(0)) return Real(0);
    const Real chi2 = DyadicChiImpl::chi_value(u) + DyadicChiImpl::chi_value(Real(2) * u);
    return r_exp(Real(alpha_) * r_log(u)) * chi2 * cut;
  }

  Jet<double> taylor(double t, std::size_t len) const override {
    const double u0 = 1.0 - t;
    if (!(u0 > 0.25 && u0 < 2.0) || t <= -0.625) return Jet<double>(len);
    // jets below are first taken in u = 1 - t; the chain rule flips the
    // sign of odd Taylor coefficients
    Jet<double> u = Jet<double>::variable(u0, len);
    auto flip = [](Jet<double> j) {
      for (std::size_t k = 1; k < j.len(); k += 2) j.c[k] = -j.c[k];
      return j;
    };
    Jet<double> chi_a = flip(DyadicChiImpl::chi_taylor(u0, len));
    Jet<double> chi_b = DyadicChiImpl::chi_taylor(2.0 * u0, len);
    double pw = 1.0;
    for (std::size_t k = 0; k < len; ++k) {
      chi_b.c[k] *= pw;
      pw *= -2.0;
    }
    Jet<double> upow = flip(jet_pow(u, alpha_));
    Jet<double> cut = step_jet(t, -0.625, -0.125, len);
    return upow * (chi_a + chi_b) * cut;
  }

  real128 value_ext(real128 t) const override { return value_core<real128>(t); }
  Interval support() const override { return {-0.625, 0.75}; }
  std::string preset_name() const override { return "riesz-psi0"; }
  std::map<std::string, double> preset_params() const override {
    return {{"alpha", alpha_}};
  }

 private:
  double alpha_;
};

/// t^beta * inner(t).
class PhiBetaImpl final : public BumpImpl {
 public:
  PhiBetaImpl(std::shared_ptr<const BumpImpl> inner, int beta)
      : inner_(std::move(inner)), beta_(beta) {}

  Jet<double> taylor(double t, std::size_t len) const override {
    Jet<double> p = Jet<double>::constant(1.0, len);
    Jet<double> var = Jet<double>::variable(t, len);
    for (int b = 0; b < beta_; ++b) p = p * var;
    return p * inner_->taylor(t, len);
  }

  real128 value_ext(real128 t) const override {
    real128 p = 1;
    for (int b = 0; b < beta_; ++b) p *= t;
    return p * inner_->value_ext(t);
  }

  Interval support() const override { return inner_->support(); }
  std::string preset_name() const override { return "phi-beta"; }
  std::map<std::string, double> preset_params() const override {
    auto m = inner_->preset_params();
    m["beta_exp"] = double(beta_);
    m["base"] = inner_->preset_name() == "unity-partition" ? 0.0 : 1.0;
    return m;
  }

 private:
  std::shared_ptr<const BumpImpl> inner_;
  int beta_;
};

}  // namespace detail

using detail::Interval;

// A smooth compactly supported scalar function with analytic derivatives
// up to kMaxJetOrder, known support, and a recorded C^N norm bound.
class BumpFunction {
 public:
  BumpFunction() = default;
  BumpFunction(std::shared_ptr<const detail::BumpImpl> impl, double cn_bound,
               int norm_order)
      : impl_(std::move(impl)), cn_norm_bound_(cn_bound), norm_order_(norm_order) {}

  double operator()(double t) const { return impl_->taylor(t, 1).c[0]; }

  double derivative(double t, int order) const {
    check_order(order);
    auto j = impl_->taylor(t, static_cast<std::size_t>(order) + 1);
    double fact = 1.0;
    for (int k = 2; k <= order; ++k) fact *= k;
    return j.c[static_cast<std::size_t>(order)] * fact;
  }

  /// out[k] = k-th derivative at t, k = 0..out.size()-1.
  void derivatives(double t, std::span<double> out) const {
    check_order(static_cast<int>(out.size()) - 1);
    auto j = impl_->taylor(t, out.size());
    double fact = 1.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (k > 1) fact *= static_cast<double>(k);
      out[k] = j.c[k] * fact;
    }
  }

  /// Value in extended precision (same function, smaller roundoff floor).
  real128 value_ext(real128 t) const { return impl_->value_ext(t); }

  Interval support() const { return impl_->support(); }
  double cn_norm_bound() const { return cn_norm_bound_; }
  int norm_order() const { return norm_order_; }

  std::string preset_name() const { return impl_->preset_name(); }
  std::map<std::string, double> preset_params() const {
    return impl_->preset_params();
  }

  std::shared_ptr<const detail::BumpImpl> impl() const { return impl_; }

 private:
  static void check_order(int order) {
    if (order < 0 || order > detail::kMaxJetOrder)
      throw std::invalid_argument("BumpFunction: derivative order out of range");
  }

  std::shared_ptr<const detail::BumpImpl> impl_;
  double cn_norm_bound_ = 0.0;
  int norm_order_ = 0;
};

namespace detail {

// max over sampled points and derivative orders 0..N of |d^j f|. The
// 2001-point midpoint scan is the library's measurement convention for
// C^N norms; normalization and the class predicate share it.
inline double measure_cn_norm(const BumpImpl& impl, int N, int samples = 2001) {
  const Interval sup = impl.support();
  double worst = 0.0;
  std::vector<double> fact(static_cast<std::size_t>(N) + 1, 1.0);
  for (int k = 2; k <= N; ++k)
    fact[static_cast<std::size_t>(k)] = fact[static_cast<std::size_t>(k) - 1] * k;
  for (int i = 0; i < samples; ++i) {
    const double t = sup.lo + sup.width() * (i + 0.5) / samples;
    auto j = impl.taylor(t, static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k)
      worst = std::max(worst, std::abs(j.c[static_cast<std::size_t>(k)] *
                                       fact[static_cast<std::size_t>(k)]));
  }
  return worst;
}

}  // namespace detail

/// Mollifier rescaled to `support`, normalized so that derivatives up to
/// `norm_order` stay within 1 on a dense sample scan.
inline BumpFunction make_standard_bump(Interval support, int norm_order = 8) {
  if (!(support.width() > 0.0))
    throw std::invalid_argument("make_standard_bump: empty support");
  auto raw = std::make_shared<detail::MollifierImpl>(support, 1.0, norm_order);
  const double m = detail::measure_cn_norm(*raw, norm_order);
  auto imp = std::make_shared<detail::MollifierImpl>(
      support, 1.0 / (m * (1.0 + 1e-9)), norm_order);
  return BumpFunction(imp, 1.0, norm_order);
}

/// phi in C_0^inf([-3/4, 3/4]) with sum_{l in Z} phi(t + l) = 1.
inline BumpFunction make_unity_partition() {
  auto imp = std::make_shared<detail::UnityPartitionImpl>();
  const int N = 8;
  return BumpFunction(imp, detail::measure_cn_norm(*imp, N), N);
}

/// phi_beta(t) = t^beta phi(t); support unchanged.
inline BumpFunction make_phi_beta(const BumpFunction& phi, int beta_exp) {
  if (beta_exp < 0) throw std::invalid_argument("make_phi_beta: beta_exp >= 0");
  if (beta_exp == 0) return phi;
  auto imp = std::make_shared<detail::PhiBetaImpl>(phi.impl(), beta_exp);
  const int N = phi.norm_order();
  return BumpFunction(imp, detail::measure_cn_norm(*imp, N), N);
}

/// The Littlewood-Paley bump: supp beta = [1/2, 2], 0 <= beta <= 1,
/// sum_m beta(2^{-m} t) = 1 for t > 0.
inline BumpFunction make_lp_beta() {
  auto imp = std::make_shared<detail::DyadicChiImpl>();
  const int N = 8;
  return BumpFunction(imp, detail::measure_cn_norm(*imp, N), N);
}

// (1-t)_+^alpha = sum_{delta in D} delta^alpha psi((1-t)/delta) + psi_0(t)
// on [0, 1], D = {2^k : k <= -2}. psi is supported in [1/2, 2] and psi_0
// in [-3/4, 3/4].
inline std::pair<BumpFunction, BumpFunction> make_riesz_splitting(double alpha) {
  if (!(alpha >= 0.0))
    throw std::invalid_argument("make_riesz_splitting: alpha must be >= 0");
  auto psi_imp = std::make_shared<detail::RieszPsiImpl>(alpha);
  auto psi0_imp = std::make_shared<detail::RieszPsi0Impl>(alpha);
  const int N = 8;
  return {BumpFunction(psi_imp, detail::measure_cn_norm(*psi_imp, N), N),
          BumpFunction(psi0_imp, detail::measure_cn_norm(*psi0_imp, N), N)};
}

/// Named-preset round trip for the experiment config.
struct BumpPreset {
  std::string name;
  std::map<std::string, double> params;
};

inline BumpFunction make_bump_from_preset(const BumpPreset& p) {
  auto get = [&](const char* key, double dflt) {
    auto it = p.params.find(key);
    return it == p.params.end() ? dflt : it->second;
  };
  if (p.name == "mollifier")
    return make_standard_bump({get("lo", -1.0), get("hi", 1.0)},
                              static_cast<int>(get("norm_order", 8)));
  if (p.name == "unity-partition") return make_unity_partition();
  if (p.name == "lp-beta") return make_lp_beta();
  if (p.name == "riesz-psi") return make_riesz_splitting(get("alpha", 1.0)).first;
  if (p.name == "riesz-psi0") return make_riesz_splitting(get("alpha", 1.0)).second;
  if (p.name == "phi-beta")
    return make_phi_beta(make_unity_partition(),
                         static_cast<int>(get("beta_exp", 0)));
  throw std::invalid_argument("make_bump_from_preset: unknown preset " + p.name);
}

/// Membership in C^N(I): support inside [-1, 1] and C^N norm <= 1 under
/// the canonical scan.
inline bool in_cn_class(const BumpFunction& f, int N, int samples = 2001) {
  const Interval sup = f.support();
  if (sup.lo < -1.0 || sup.hi > 1.0) return false;
  return detail::measure_cn_norm(*f.impl(), N, samples) <= 1.0;
}

// ---- sigma-support verification -------------------------------------------

struct SigmaSupportReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double max_violation = 0.0;
  bool witness_found = false;  // nonzero product inside the window
  double witness_value = 0.0;
};

// Checks that phi((rho - u1)/dt) phi((sigma - rho - u2)/dt)
// psi((1 - u1 - u2)/delta), dt = delta^(1+kappa), vanishes whenever
// sigma lies outside [1 - 4 delta, 1 + 2 delta]; u_i stands for r lambda_i.
inline SigmaSupportReport verify_sigma_support(const BumpFunction& psi,
                                               const BumpFunction& phi,
                                               double delta, double kappa,
                                               std::size_t samples = 100000,
                                               std::uint64_t seed = 1) {
  if (!(delta > 0.0 && delta <= 0.25))
    throw std::invalid_argument("verify_sigma_support: need 0 < delta <= 1/4");
  const double dt = std::pow(delta, 1.0 + kappa);
  SigmaSupportReport rep;
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const long max_q = std::lround(std::floor(2.0 / dt));
  for (std::size_t s = 0; s < samples; ++s) {
    const double rho = dt * static_cast<double>(
        std::min<long>(max_q, static_cast<long>(unif(rng) * (max_q + 1))));
    // sigma on the lattice, spread over [-1, 3] to hit both sides
    const double sigma =
        dt * std::floor((unif(rng) * 4.0 - 1.0) / dt);
    const double u1 = unif(rng) * 2.0;
    const double u2 = unif(rng) * 2.0;
    if (sigma >= 1.0 - 4.0 * delta && sigma <= 1.0 + 2.0 * delta) continue;
    const double prod = phi((rho - u1) / dt) * phi((sigma - rho - u2) / dt) *
                        psi((1.0 - u1 - u2) / delta);
    if (prod != 0.0) {
      ++rep.violations;
      rep.max_violation = std::max(rep.max_violation, std::abs(prod));
    }
  }
  // Constructive witness inside the window: rho on the lattice, u1 = rho,
  // u2 = sigma - rho with sigma ~ 1 - delta, so both phi factors sit at 0.
  {
    const double sigma = dt * std::floor((1.0 - delta) / dt);
    const double rho = dt * std::floor(0.5 / dt);
    const double u1 = rho;
    const double u2 = sigma - rho;
    const double prod = phi(0.0) * phi(0.0) * psi((1.0 - u1 - u2) / delta);
    rep.witness_value = prod;
    rep.witness_found = prod != 0.0;
  }
  return rep;
}

// ---- Taylor reconstruction --------------------------------------------------

struct TaylorResult {
  double truncated = 0.0;
  double exact = 0.0;
  double error() const { return std::abs(truncated - exact); }
};

// Double Taylor expansion of psi((1 - u1 - u2)/delta) around (1 - sigma)/delta:
//   sum_{a+b<=N_max} psi^{(a+b)}((1-sigma)/delta) / (a! b!)
//     * delta^{kappa(a+b)} * ((rho-u1)/dt)^a ((sigma-rho-u2)/dt)^b
// with dt = delta^(1+kappa); the delta^{kappa(a+b)} weights make the series
// geometric for admissible points.
inline TaylorResult taylor_reconstruct(const BumpFunction& psi, double delta,
                                       double kappa, int n_max, double sigma,
                                       double rho, double u1, double u2) {
  if (n_max < 0 || n_max > detail::kMaxJetOrder - 1)
    throw std::invalid_argument("taylor_reconstruct: bad n_max");
  const double dt = std::pow(delta, 1.0 + kappa);
  const double x0 = (1.0 - sigma) / delta;
  const double at = (rho - u1) / dt;
  const double bt = (sigma - rho - u2) / dt;
  const double dk = std::pow(delta, kappa);

  std::vector<double> deriv(static_cast<std::size_t>(n_max) + 1);
  psi.derivatives(x0, deriv);
  std::vector<double> fact(static_cast<std::size_t>(n_max) + 1, 1.0);
  for (int k = 2; k <= n_max; ++k)
    fact[static_cast<std::size_t>(k)] = fact[static_cast<std::size_t>(k) - 1] * k;

  double total = 0.0;
  for (int N = 0; N <= n_max; ++N) {
    double level = 0.0;
    for (int a = 0; a <= N; ++a) {
      const int b = N - a;
      level += std::pow(at, a) * std::pow(bt, b) /
               (fact[static_cast<std::size_t>(a)] * fact[static_cast<std::size_t>(b)]);
    }
    total += deriv[static_cast<std::size_t>(N)] * std::pow(dk, N) * level;
  }
  TaylorResult res;
  res.truncated = total;
  res.exact = psi((1.0 - u1 - u2) / delta);
  return res;
}

}  // namespace heis
