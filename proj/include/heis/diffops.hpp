#pragma once

// Finite-difference realizations of the left-invariant vector fields
//   X_j = d/dx_j + (y_j/2) d/dt,   Y_j = d/dy_j - (x_j/2) d/dt
// and the sublaplacian L = -sum_j (X_j^2 + Y_j^2).
//
// Partial derivatives use second-order centered stencils in the interior
// and second-order one-sided stencils on the boundary planes.

#include <stdexcept>
#include <vector>

#include "heis/grid.hpp"

namespace heis {

enum class VectorFieldKind { X, Y };

namespace detail {

/// d/d(axis) with axes ordered [x_1, y_1, ..., x_n, y_n, t].
inline SampledField derivative_axis(const SampledField& f, int axis) {
  const GridSpec& g = f.spec;
  const int dims = 2 * g.n + 1;
  if (axis < 0 || axis >= dims)
    throw std::invalid_argument("derivative_axis: axis out of range");
  const bool is_t = axis == dims - 1;
  const int m = is_t ? g.m_t : g.m_z;
  const double h = is_t ? g.ht() : g.hz();

  std::vector<std::size_t> stride(static_cast<std::size_t>(dims));
  stride[static_cast<std::size_t>(dims - 1)] = 1;
  for (int a = dims - 2; a >= 0; --a)
    stride[static_cast<std::size_t>(a)] =
        stride[static_cast<std::size_t>(a + 1)] *
        static_cast<std::size_t>(a + 1 == dims - 1 ? g.m_t : g.m_z);
  const std::size_t st = stride[static_cast<std::size_t>(axis)];

  SampledField out = SampledField::zero(g);
  const std::size_t total = f.v.size();
  // Index along `axis` for a flat offset: (flat / st) % m.
  for (std::size_t flat = 0; flat < total; ++flat) {
    const int i = static_cast<int>((flat / st) % static_cast<std::size_t>(m));
    cplx d;
    if (i == 0) {
      d = (-3.0 * f.v[flat] + 4.0 * f.v[flat + st] - f.v[flat + 2 * st]) /
          (2.0 * h);
    } else if (i == m - 1) {
      d = (3.0 * f.v[flat] - 4.0 * f.v[flat - st] + f.v[flat - 2 * st]) /
          (2.0 * h);
    } else {
      d = (f.v[flat + st] - f.v[flat - st]) / (2.0 * h);
    }
    out.v[flat] = d;
  }
  return out;
}

}  // namespace detail

/// Applies X_j or Y_j (j is 1-based, as in the operator subscripts).
inline SampledField apply_vector_field(const SampledField& f,
                                       VectorFieldKind which, int j) {
  const GridSpec& g = f.spec;
  if (j < 1 || j > g.n)
    throw std::invalid_argument("apply_vector_field: j out of range");
  const int xa = 2 * (j - 1), ya = 2 * (j - 1) + 1;
  const int ta = 2 * g.n;

  SampledField spatial =
      detail::derivative_axis(f, which == VectorFieldKind::X ? xa : ya);
  SampledField dt = detail::derivative_axis(f, ta);

  // X_j adds +(y_j/2) d/dt, Y_j adds -(x_j/2) d/dt.
  const int coord_axis = which == VectorFieldKind::X ? ya : xa;
  const double sign = which == VectorFieldKind::X ? 0.5 : -0.5;
  ZOdometer od(g.zspec());
  std::size_t flat = 0;
  do {
    const double c = sign * od.coords()[static_cast<std::size_t>(coord_axis)];
    for (int it = 0; it < g.m_t; ++it, ++flat)
      spatial.v[flat] += c * dt.v[flat];
  } while (od.next());
  return spatial;
}

/// L f = -sum_j (X_j X_j f + Y_j Y_j f).
inline SampledField apply_sublaplacian(const SampledField& f) {
  SampledField acc = SampledField::zero(f.spec);
  for (int j = 1; j <= f.spec.n; ++j) {
    for (VectorFieldKind k : {VectorFieldKind::X, VectorFieldKind::Y}) {
      SampledField second = apply_vector_field(apply_vector_field(f, k, j), k, j);
      for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] -= second.v[i];
    }
  }
  return acc;
}

/// Restriction mask for "interior" comparisons: nodes whose index lies in
/// the central fraction of every axis (boundary stencils excluded).
inline std::vector<std::size_t> interior_nodes(const GridSpec& g,
                                               double central_fraction = 0.5) {
  const int dims = 2 * g.n + 1;
  std::vector<std::size_t> keep;
  std::vector<int> lo(static_cast<std::size_t>(dims)), hi(static_cast<std::size_t>(dims));
  for (int a = 0; a < dims; ++a) {
    const int m = a == dims - 1 ? g.m_t : g.m_z;
    const int skip = static_cast<int>(m * (1.0 - central_fraction) / 2.0);
    lo[static_cast<std::size_t>(a)] = skip;
    hi[static_cast<std::size_t>(a)] = m - skip;
  }
  ZOdometer od(g.zspec());
  std::size_t flat = 0;
  do {
    bool zin = true;
    const auto idx = od.index();
    for (int a = 0; a < dims - 1 && zin; ++a)
      zin = idx[static_cast<std::size_t>(a)] >= lo[static_cast<std::size_t>(a)] &&
            idx[static_cast<std::size_t>(a)] < hi[static_cast<std::size_t>(a)];
    for (int it = 0; it < g.m_t; ++it, ++flat)
      if (zin && it >= lo[static_cast<std::size_t>(dims - 1)] &&
          it < hi[static_cast<std::size_t>(dims - 1)])
        keep.push_back(flat);
  } while (od.next());
  return keep;
}

/// Relative L^2 difference of two fields restricted to the given nodes.
inline double relative_l2_on(const SampledField& a, const SampledField& b,
                             const std::vector<std::size_t>& nodes) {
  require_same_grid(a, b, "relative_l2_on");
  double num = 0.0, den = 0.0;
  for (std::size_t i : nodes) {
    num += std::norm(a.v[i] - b.v[i]);
    den += std::norm(b.v[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace heis
