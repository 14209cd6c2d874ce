#pragma once

// Laguerre polynomials L_k^a (three-term recurrence) and the Laguerre
// functions phi_k(z) = L_k^{n-1}(|z|^2/2) e^{-|z|^2/4} on C^n.

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "heis/group.hpp"

namespace heis {

/// Fills out[k] = L_k^a(t) for k = 0..out.size()-1 in one upward sweep:
/// (k+1) L_{k+1}^a = (2k+a+1-t) L_k^a - (k+a) L_{k-1}^a.
template <typename Real = double>
inline void laguerre_all(int a, Real t, std::span<Real> out) {
  if (a < 0) throw std::invalid_argument("laguerre_all: a must be >= 0");
  if (out.empty()) return;
  out[0] = Real(1);
  if (out.size() == 1) return;
  out[1] = Real(1 + a) - t;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const Real kk = static_cast<Real>(k);
    out[k + 1] =
        ((Real(2) * kk + Real(a + 1) - t) * out[k] - (kk + Real(a)) * out[k - 1]) /
        (kk + Real(1));
  }
}

inline double laguerre_poly(int k, int a, double t) {
  if (k < 0) throw std::invalid_argument("laguerre_poly: k must be >= 0");
  if (a < 0) throw std::invalid_argument("laguerre_poly: a must be >= 0");
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = 1.0 + a - t;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + a + 1 - t) * cur - (j + a) * prev) / (j + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// phi_k(z), radial in |z|.
inline double laguerre_fn(int k, int n, double abs_z_squared) {
  return laguerre_poly(k, n - 1, 0.5 * abs_z_squared) *
         std::exp(-0.25 * abs_z_squared);
}

inline double laguerre_fn(int k, std::span<const cplx> z) {
  double zz = 0.0;
  for (const auto& c : z) zz += std::norm(c);
  return laguerre_fn(k, static_cast<int>(z.size()), zz);
}

/// binomial(k+n-1, k) = L_k^{n-1}(0), exact in integer arithmetic.
inline double laguerre_at_zero(int k, int n) {
  long double b = 1.0L;
  for (int i = 1; i <= k; ++i) b = b * (n - 1 + i) / i;
  return static_cast<double>(b);
}

// Recurrence state for evaluating all phi_k, k <= K, at many radii.
// Immutable after construction; evaluation allocates nothing.
class LaguerreTable {
 public:
  LaguerreTable(int n, int K) : n_(n), K_(K) {
    if (n < 1 || K < 0) throw std::invalid_argument("LaguerreTable: bad n or K");
  }

  int n() const { return n_; }
  int K() const { return K_; }

  /// out[k] = phi_k at |z|^2 = abs_z_squared, k = 0..K.
  void phi_all(double abs_z_squared, std::span<double> out) const {
    laguerre_all<double>(n_ - 1, 0.5 * abs_z_squared, out.subspan(0, static_cast<std::size_t>(K_) + 1));
    const double damp = std::exp(-0.25 * abs_z_squared);
    for (int k = 0; k <= K_; ++k) out[static_cast<std::size_t>(k)] *= damp;
  }

  /// Max recurrence residual over k <= K at the given argument; the
  /// invariant check behind the table.
  double recurrence_residual(double t) const {
    std::vector<double> l(static_cast<std::size_t>(K_) + 2);
    laguerre_all<double>(n_ - 1, t, l);
    double worst = 0.0;
    const int a = n_ - 1;
    for (int k = 1; k <= K_; ++k) {
      const double lhs = (k + 1) * l[static_cast<std::size_t>(k) + 1];
      const double rhs =
          (2.0 * k + a + 1 - t) * l[static_cast<std::size_t>(k)] -
          (k + a) * l[static_cast<std::size_t>(k) - 1];
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
  }

 private:
  int n_;
  int K_;
};

}  // namespace heis
