#pragma once

// Gauss-Legendre rules and deterministic pairwise reductions shared by
// the quadrature-heavy parts of the library.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace heis {

// Nodes and weights on [-1, 1]. Newton iteration on the Legendre
// recurrence; works for any floating-point Real with basic arithmetic
// (double, long double, __float128).
template <typename Real = double>
struct GaussLegendre {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

template <typename Real = double>
inline GaussLegendre<Real> gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count >= 1");
  GaussLegendre<Real> rule;
  rule.nodes.resize(static_cast<std::size_t>(count));
  rule.weights.resize(static_cast<std::size_t>(count));
  const int m = (count + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_count.
    double guess =
        std::cos(3.14159265358979323846 * (i + 0.75) / (count + 0.5));
    Real x = static_cast<Real>(guess);
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= count; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1);
      Real dx = p1 / dp;
      x -= dx;
      if (!(dx > Real(1e-35) || dx < Real(-1e-35))) break;
    }
    Real w = Real(2) / ((1 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.nodes[static_cast<std::size_t>(count - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(count - 1 - i)] = w;
  }
  if (count % 2 == 1) rule.nodes[static_cast<std::size_t>(count / 2)] = 0;
  return rule;
}

/// Same rule mapped to [a, b].
template <typename Real = double>
inline GaussLegendre<Real> gauss_legendre(int count, Real a, Real b) {
  GaussLegendre<Real> rule = gauss_legendre<Real>(count);
  const Real mid = (a + b) / 2, half = (b - a) / 2;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

// Pairwise (tree) summation: deterministic order independent of any
// threading, and better conditioned than running sums on long inputs.
template <typename T>
inline T pairwise_sum(std::span<const T> v) {
  if (v.empty()) return T{};
  if (v.size() <= 16) {
    T s = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) s += v[i];
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
inline T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v));
}

}  // namespace heis
