#pragma once

// Exact group-theoretic primitives of the Heisenberg group H^n:
// points, group law, inverse, non-isotropic dilations, homogeneous
// norm and the left-invariant distance built from it.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace heis {

using cplx = std::complex<double>;

/// Dimension bookkeeping for H^n. Q and D are always derived from n.
struct HomogeneousStructure {
  int n = 1;
  constexpr int homogeneous_dim() const { return 2 * n + 2; }  // Q
  constexpr int topological_dim() const { return 2 * n + 1; }  // D
};

// A point (z, t) in C^n x R. Coordinates are stored as a flat array of
// 2n+1 reals [x_1, y_1, ..., x_n, y_n, t] so bulk loops over grids of
// points can walk contiguous memory.
class GroupPoint {
 public:
  GroupPoint() : c_(3, 0.0) {}

  explicit GroupPoint(int n) : c_(2 * static_cast<std::size_t>(n) + 1, 0.0) {
    if (n < 1) throw std::invalid_argument("GroupPoint: n must be >= 1");
  }

  GroupPoint(std::span<const cplx> z, double t)
      : c_(2 * z.size() + 1, 0.0) {
    if (z.empty()) throw std::invalid_argument("GroupPoint: n must be >= 1");
    for (std::size_t j = 0; j < z.size(); ++j) {
      c_[2 * j] = z[j].real();
      c_[2 * j + 1] = z[j].imag();
    }
    c_.back() = t;
  }

  /// Convenience for n = 1.
  GroupPoint(cplx z, double t) : c_{z.real(), z.imag(), t} {}

  static GroupPoint identity(int n) { return GroupPoint(n); }

  int n() const { return static_cast<int>((c_.size() - 1) / 2); }
  double x(int j) const { return c_[2 * static_cast<std::size_t>(j)]; }
  double y(int j) const { return c_[2 * static_cast<std::size_t>(j) + 1]; }
  double t() const { return c_.back(); }
  cplx z(int j) const { return {x(j), y(j)}; }

  double& x(int j) { return c_[2 * static_cast<std::size_t>(j)]; }
  double& y(int j) { return c_[2 * static_cast<std::size_t>(j) + 1]; }
  double& t() { return c_.back(); }

  /// Flat coordinate view [x_1, y_1, ..., x_n, y_n, t].
  std::span<const double> coords() const { return c_; }

  double abs_z_squared() const {
    double s = 0.0;
    for (int j = 0; j < n(); ++j) s += x(j) * x(j) + y(j) * y(j);
    return s;
  }

 private:
  std::vector<double> c_;
};

inline void require_same_n(const GroupPoint& a, const GroupPoint& b,
                           const char* what) {
  if (a.n() != b.n())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

/// Group law (z,t)(w,s) = (z+w, t+s+Im(z . conj(w))/2).
inline GroupPoint group_mul(const GroupPoint& a, const GroupPoint& b) {
  require_same_n(a, b, "group_mul");
  const int n = a.n();
  GroupPoint out(n);
  double im = 0.0;  // Im(z . conj(w)) = sum_j (y_j u_j - x_j v_j)
  for (int j = 0; j < n; ++j) {
    out.x(j) = a.x(j) + b.x(j);
    out.y(j) = a.y(j) + b.y(j);
    im += a.y(j) * b.x(j) - a.x(j) * b.y(j);
  }
  out.t() = a.t() + b.t() + 0.5 * im;
  return out;
}

inline GroupPoint group_inv(const GroupPoint& a) {
  const int n = a.n();
  GroupPoint out(n);
  for (int j = 0; j < n; ++j) {
    out.x(j) = -a.x(j);
    out.y(j) = -a.y(j);
  }
  out.t() = -a.t();
  return out;
}

/// Non-isotropic dilation delta_r(z,t) = (r z, r^2 t), r > 0.
inline GroupPoint dilate(double r, const GroupPoint& a) {
  if (!(r > 0.0)) throw std::invalid_argument("dilate: r must be positive");
  const int n = a.n();
  GroupPoint out(n);
  for (int j = 0; j < n; ++j) {
    out.x(j) = r * a.x(j);
    out.y(j) = r * a.y(j);
  }
  out.t() = r * r * a.t();
  return out;
}

/// Homogeneous norm |x| = (|z|^4/16 + t^2)^(1/4).
inline double homogeneous_norm(const GroupPoint& a) {
  const double zz = a.abs_z_squared();
  return std::pow(zz * zz / 16.0 + a.t() * a.t(), 0.25);
}

/// Left-invariant distance d(x,y) = |x^{-1} y|.
inline double group_distance(const GroupPoint& a, const GroupPoint& b) {
  require_same_n(a, b, "group_distance");
  return homogeneous_norm(group_mul(group_inv(a), b));
}

}  // namespace heis
