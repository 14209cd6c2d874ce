#pragma once

// Sampled complex scalar fields on a box in C^n x R with Haar (=Lebesgue)
// quadrature: integration, L^p norms, the partial Fourier transform in t,
// dilation resampling, and a flat binary serialization.
//
// Grid convention: each of the 2n real z-coordinates takes m_z uniform
// values -extent_z + i*h_z, i = 0..m_z-1, and t takes m_t values
// -extent_t + i*h_t. Every node carries the cell volume h_z^(2n)*h_t as
// quadrature weight; for fields that decay below roundoff at the box
// boundary this is the trapezoid rule.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "heis/group.hpp"
#include "heis/quadrature.hpp"

namespace heis {

/// z-part of a grid: 2n axes with m points each over [-extent, extent).
struct ZSpec {
  int n = 1;
  double extent = 6.0;
  int m = 16;

  double h() const { return 2.0 * extent / m; }
  double coord(int i) const { return -extent + i * h(); }
  int axes() const { return 2 * n; }

  std::size_t nodes() const {
    std::size_t s = 1;
    for (int a = 0; a < axes(); ++a) s *= static_cast<std::size_t>(m);
    return s;
  }

  bool operator==(const ZSpec&) const = default;
};

struct GridSpec {
  int n = 1;
  double extent_z = 6.0;
  double extent_t = 6.0;
  int m_z = 16;
  int m_t = 16;

  void validate() const {
    if (n < 1) throw std::invalid_argument("GridSpec: n must be >= 1");
    if (!(extent_z > 0.0) || !(extent_t > 0.0))
      throw std::invalid_argument("GridSpec: extents must be positive");
    if (m_z < 4 || m_z % 2 != 0 || m_t < 4 || m_t % 2 != 0)
      throw std::invalid_argument("GridSpec: m_z, m_t must be even and >= 4");
  }

  double hz() const { return 2.0 * extent_z / m_z; }
  double ht() const { return 2.0 * extent_t / m_t; }
  double zcoord(int i) const { return -extent_z + i * hz(); }
  double tcoord(int i) const { return -extent_t + i * ht(); }

  ZSpec zspec() const { return ZSpec{n, extent_z, m_z}; }
  std::size_t z_nodes() const { return zspec().nodes(); }
  std::size_t size() const { return z_nodes() * static_cast<std::size_t>(m_t); }
  double cell_volume() const {
    double v = ht();
    for (int a = 0; a < 2 * n; ++a) v *= hz();
    return v;
  }

  bool operator==(const GridSpec&) const = default;
};

// Walks all z multi-indices in row-major order (x_1, y_1, ..., x_n, y_n),
// keeping the coordinate vector in sync without per-node div/mod.
class ZOdometer {
 public:
  explicit ZOdometer(const ZSpec& spec)
      : spec_(spec), idx_(spec.axes(), 0), coord_(spec.axes(), spec.coord(0)) {}

  std::span<const int> index() const { return idx_; }
  std::span<const double> coords() const { return coord_; }

  bool next() {
    for (int a = spec_.axes() - 1; a >= 0; --a) {
      if (++idx_[a] < spec_.m) {
        coord_[a] = spec_.coord(idx_[a]);
        return true;
      }
      idx_[a] = 0;
      coord_[a] = spec_.coord(0);
    }
    return false;
  }

 private:
  ZSpec spec_;
  std::vector<int> idx_;
  std::vector<double> coord_;
};

/// Complex samples over the z-grid only (no t axis).
struct ZField {
  ZSpec spec;
  std::vector<cplx> v;

  static ZField zero(const ZSpec& s) { return {s, std::vector<cplx>(s.nodes())}; }

  template <typename F>  // F(std::span<const double> zcoords) -> cplx
  static ZField sample(const ZSpec& s, F&& f) {
    ZField out = zero(s);
    ZOdometer od(s);
    std::size_t flat = 0;
    do {
      out.v[flat++] = f(od.coords());
    } while (od.next());
    return out;
  }
};

/// Complex samples over the full (z, t) grid, t fastest-varying.
struct SampledField {
  GridSpec spec;
  std::vector<cplx> v;

  static SampledField zero(const GridSpec& s) {
    s.validate();
    return {s, std::vector<cplx>(s.size())};
  }

  template <typename F>  // F(std::span<const double> zcoords, double t) -> cplx
  static SampledField sample(const GridSpec& s, F&& f) {
    SampledField out = zero(s);
    const int mt = s.m_t;
    ZOdometer od(s.zspec());
    std::size_t flat = 0;
    do {
      for (int it = 0; it < mt; ++it)
        out.v[flat++] = f(od.coords(), s.tcoord(it));
    } while (od.next());
    return out;
  }

  cplx& at(std::size_t zflat, int it) {
    return v[zflat * static_cast<std::size_t>(spec.m_t) + it];
  }
  cplx at(std::size_t zflat, int it) const {
    return v[zflat * static_cast<std::size_t>(spec.m_t) + it];
  }
};

inline void require_same_grid(const SampledField& a, const SampledField& b,
                              const char* what) {
  if (!(a.spec == b.spec))
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

// ---- field arithmetic -------------------------------------------------

inline SampledField operator+(const SampledField& a, const SampledField& b) {
  require_same_grid(a, b, "operator+");
  SampledField out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return out;
}

inline SampledField operator-(const SampledField& a, const SampledField& b) {
  require_same_grid(a, b, "operator-");
  SampledField out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
  return out;
}

inline SampledField operator*(cplx c, const SampledField& a) {
  SampledField out = a;
  for (auto& x : out.v) x *= c;
  return out;
}

/// Pointwise product, used by the bilinear operators' r -> 0 oracle.
inline SampledField pointwise_mul(const SampledField& a,
                                  const SampledField& b) {
  require_same_grid(a, b, "pointwise_mul");
  SampledField out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b.v[i];
  return out;
}

inline void axpy(SampledField& acc, cplx c, const SampledField& x) {
  require_same_grid(acc, x, "axpy");
  for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += c * x.v[i];
}

// ---- quadrature -------------------------------------------------------

/// Haar integral: sum of node values times the cell volume.
inline cplx integrate(const SampledField& f) {
  return pairwise_sum(f.v) * f.spec.cell_volume();
}

inline cplx inner_product(const SampledField& f, const SampledField& g) {
  require_same_grid(f, g, "inner_product");
  std::vector<cplx> prod(f.v.size());
  for (std::size_t i = 0; i < prod.size(); ++i)
    prod[i] = f.v[i] * std::conj(g.v[i]);
  return pairwise_sum(prod) * f.spec.cell_volume();
}

inline double lp_norm(const SampledField& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& x : f.v) m = std::max(m, std::abs(x));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  std::vector<double> terms(f.v.size());
  if (p == 2.0) {
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::norm(f.v[i]);
  } else {
    for (std::size_t i = 0; i < terms.size(); ++i)
      terms[i] = std::pow(std::abs(f.v[i]), p);
  }
  const double s = pairwise_sum(terms) * f.spec.cell_volume();
  return p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

inline double l2_norm_z(const ZField& u) {
  std::vector<double> terms(u.v.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::norm(u.v[i]);
  double vol = 1.0;
  for (int a = 0; a < u.spec.axes(); ++a) vol *= u.spec.h();
  return std::sqrt(pairwise_sum(terms) * vol);
}

/// f^lambda(z) = integral of e^{i lambda t} f(z,t) dt, per z-node.
inline ZField partial_fourier_t(const SampledField& f, double lambda) {
  const GridSpec& s = f.spec;
  ZField out = ZField::zero(s.zspec());
  const int mt = s.m_t;
  std::vector<cplx> phase(static_cast<std::size_t>(mt));
  for (int it = 0; it < mt; ++it) {
    const double a = lambda * s.tcoord(it);
    phase[static_cast<std::size_t>(it)] =
        cplx(std::cos(a), std::sin(a)) * s.ht();
  }
  const std::size_t zn = s.z_nodes();
  for (std::size_t zf = 0; zf < zn; ++zf) {
    cplx acc = 0.0;
    const cplx* row = f.v.data() + zf * static_cast<std::size_t>(mt);
    for (int it = 0; it < mt; ++it)
      acc += phase[static_cast<std::size_t>(it)] * row[it];
    out.v[zf] = acc;
  }
  return out;
}

// ---- dilation resampling ---------------------------------------------

// f_s(x) = f(delta_s x) by multilinear interpolation; reads outside the
// box are zero. s = 1 reproduces f exactly because every node maps to
// itself.
inline SampledField dilate_field(const SampledField& f, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("dilate_field: s must be > 0");
  const GridSpec& g = f.spec;
  const int dims = 2 * g.n + 1;
  const int corners = 1 << dims;
  std::vector<std::size_t> stride(static_cast<std::size_t>(dims));
  // layout [z-axes..., t], t fastest
  stride[static_cast<std::size_t>(dims - 1)] = 1;
  for (int a = dims - 2; a >= 0; --a)
    stride[static_cast<std::size_t>(a)] =
        stride[static_cast<std::size_t>(a + 1)] *
        static_cast<std::size_t>(a + 1 == dims - 1 ? g.m_t : g.m_z);

  SampledField out = SampledField::zero(g);
  ZOdometer od(g.zspec());
  std::vector<int> base(static_cast<std::size_t>(dims));
  std::vector<double> frac(static_cast<std::size_t>(dims));
  std::size_t flat = 0;
  do {
    const auto zc = od.coords();
    bool z_ok = true;
    for (int a = 0; a < dims - 1; ++a) {
      const double u = (s * zc[static_cast<std::size_t>(a)] + g.extent_z) / g.hz();
      const double fl = std::floor(u);
      base[static_cast<std::size_t>(a)] = static_cast<int>(fl);
      frac[static_cast<std::size_t>(a)] = u - fl;
      if (fl < -1.0 || fl > g.m_z - 1) z_ok = false;
    }
    for (int it = 0; it < g.m_t; ++it, ++flat) {
      if (!z_ok) continue;
      const double tt = s * s * g.tcoord(it);
      const double u = (tt + g.extent_t) / g.ht();
      const double fl = std::floor(u);
      base[static_cast<std::size_t>(dims - 1)] = static_cast<int>(fl);
      frac[static_cast<std::size_t>(dims - 1)] = u - fl;
      if (fl < -1.0 || fl > g.m_t - 1) continue;

      cplx acc = 0.0;
      for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::size_t off = 0;
        bool inside = true;
        for (int a = 0; a < dims && inside; ++a) {
          const int bit = (c >> a) & 1;
          const int idx = base[static_cast<std::size_t>(a)] + bit;
          const int extent_a = (a == dims - 1) ? g.m_t : g.m_z;
          const double fr = frac[static_cast<std::size_t>(a)];
          w *= bit ? fr : 1.0 - fr;
          if (idx < 0 || idx >= extent_a) {
            inside = false;  // zero outside the box
          } else {
            off += static_cast<std::size_t>(idx) * stride[static_cast<std::size_t>(a)];
          }
        }
        if (inside && w != 0.0) acc += w * f.v[off];
      }
      out.v[flat] = acc;
    }
  } while (od.next());
  return out;
}

// ---- binary serialization ----------------------------------------------
// Header: n, m_z, m_t as little-endian int64, extent_z, extent_t as
// little-endian binary64; then re/im pairs of binary64 in index order.

namespace detail {

inline void put_u64(std::string& buf, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

inline std::uint64_t get_u64(const char* p) {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i)
    x |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return x;
}

inline void put_f64(std::string& buf, double d) {
  std::uint64_t x;
  std::memcpy(&x, &d, 8);
  put_u64(buf, x);
}

inline double get_f64(const char* p) {
  const std::uint64_t x = get_u64(p);
  double d;
  std::memcpy(&d, &x, 8);
  return d;
}

}  // namespace detail

inline void write_field(const SampledField& f, const std::string& path) {
  std::string buf;
  buf.reserve(40 + 16 * f.v.size());
  detail::put_u64(buf, static_cast<std::uint64_t>(f.spec.n));
  detail::put_u64(buf, static_cast<std::uint64_t>(f.spec.m_z));
  detail::put_u64(buf, static_cast<std::uint64_t>(f.spec.m_t));
  detail::put_f64(buf, f.spec.extent_z);
  detail::put_f64(buf, f.spec.extent_t);
  for (const auto& x : f.v) {
    detail::put_f64(buf, x.real());
    detail::put_f64(buf, x.imag());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw std::runtime_error("write_field: write failed for " + path);
}

inline SampledField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(is)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < 40) throw std::runtime_error("read_field: truncated header in " + path);
  GridSpec spec;
  spec.n = static_cast<int>(detail::get_u64(buf.data()));
  spec.m_z = static_cast<int>(detail::get_u64(buf.data() + 8));
  spec.m_t = static_cast<int>(detail::get_u64(buf.data() + 16));
  spec.extent_z = detail::get_f64(buf.data() + 24);
  spec.extent_t = detail::get_f64(buf.data() + 32);
  spec.validate();
  SampledField f = SampledField::zero(spec);
  if (buf.size() != 40 + 16 * f.v.size())
    throw std::runtime_error("read_field: size mismatch in " + path);
  const char* p = buf.data() + 40;
  for (auto& x : f.v) {
    x = cplx(detail::get_f64(p), detail::get_f64(p + 8));
    p += 16;
  }
  return f;
}

}  // namespace heis
