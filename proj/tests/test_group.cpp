#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "heis/group.hpp"
#include "oracles.hpp"

using heis::cplx;
using heis::GroupPoint;

TEST_CASE("group law basics") {
  const GroupPoint x(cplx(0.3, -0.7), 1.2);
  const GroupPoint id = GroupPoint::identity(1);

  SECTION("identity element") {
    const GroupPoint r = heis::group_mul(x, id);
    REQUIRE(r.x(0) == x.x(0));
    REQUIRE(r.y(0) == x.y(0));
    REQUIRE(r.t() == x.t());
  }

  SECTION("(1,0)(i,0) = (1+i, -1/2)") {
    const GroupPoint a(cplx(1.0, 0.0), 0.0);
    const GroupPoint b(cplx(0.0, 1.0), 0.0);
    const GroupPoint r = heis::group_mul(a, b);
    REQUIRE(r.x(0) == 1.0);
    REQUIRE(r.y(0) == 1.0);
    REQUIRE(r.t() == -0.5);
  }

  SECTION("inverse formula and round trip") {
    const GroupPoint inv = heis::group_inv(x);
    REQUIRE(inv.x(0) == -x.x(0));
    REQUIRE(inv.t() == -x.t());
    const GroupPoint r = heis::group_mul(x, inv);
    REQUIRE(r.x(0) == 0.0);
    REQUIRE(r.y(0) == 0.0);
    REQUIRE(r.t() == 0.0);

    const GroupPoint z = heis::group_inv(id);
    REQUIRE(z.t() == 0.0);

    const GroupPoint w(cplx(1.0, 1.0), 3.0);
    const GroupPoint wi = heis::group_inv(w);
    REQUIRE(wi.x(0) == -1.0);
    REQUIRE(wi.y(0) == -1.0);
    REQUIRE(wi.t() == -3.0);
  }

  SECTION("dimension mismatch rejected") {
    REQUIRE_THROWS_AS(heis::group_mul(x, GroupPoint::identity(2)),
                      std::invalid_argument);
  }
}

TEST_CASE("dilations") {
  const GroupPoint x(cplx(1.0, 0.0), 1.0);

  SECTION("dilate(1) is the identity map") {
    const GroupPoint r = heis::dilate(1.0, x);
    REQUIRE(r.x(0) == x.x(0));
    REQUIRE(r.t() == x.t());
  }

  SECTION("dilate(2, (1,1)) = (2,4)") {
    const GroupPoint r = heis::dilate(2.0, x);
    REQUIRE(r.x(0) == 2.0);
    REQUIRE(r.t() == 4.0);
  }

  SECTION("nonpositive scale rejected") {
    REQUIRE_THROWS_AS(heis::dilate(0.0, x), std::invalid_argument);
    REQUIRE_THROWS_AS(heis::dilate(-1.0, x), std::invalid_argument);
  }

  SECTION("semigroup property") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
      const GroupPoint p = oracles::random_point(rng, 2);
      const GroupPoint a = heis::dilate(0.7, heis::dilate(1.9, p));
      const GroupPoint b = heis::dilate(0.7 * 1.9, p);
      for (int c = 0; c < 5; ++c)
        REQUIRE(oracles::ulps_at_scale(a.coords()[c], b.coords()[c],
                                       oracles::max_coord(p)) <= 8.0);
    }
  }
}

TEST_CASE("homogeneous norm") {
  SECTION("(0,t) has norm sqrt(|t|)") {
    const GroupPoint p(cplx(0.0, 0.0), 2.25);
    REQUIRE_THAT(heis::homogeneous_norm(p),
                 Catch::Matchers::WithinULP(1.5, 2));
  }

  SECTION("(2,0) has norm 1 when n = 1") {
    const GroupPoint p(cplx(2.0, 0.0), 0.0);
    REQUIRE_THAT(heis::homogeneous_norm(p), Catch::Matchers::WithinULP(1.0, 2));
  }

  SECTION("norm homogeneity under dilation") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
      const GroupPoint p = oracles::random_point(rng, 1);
      const double r = 0.1 + 3.0 * std::generate_canonical<double, 53>(rng);
      const double a = heis::homogeneous_norm(heis::dilate(r, p));
      const double b = r * heis::homogeneous_norm(p);
      REQUIRE(oracles::ulps_at_scale(a, b, std::max(1.0, b)) <= 8.0);
    }
  }

  SECTION("triangle inequality on random triples") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 10000; ++i) {
      const GroupPoint x = oracles::random_point(rng, 1);
      const GroupPoint y = oracles::random_point(rng, 1);
      const GroupPoint w = oracles::random_point(rng, 1);
      const double dxy = heis::group_distance(x, y);
      const double dxw = heis::group_distance(x, w);
      const double dwy = heis::group_distance(w, y);
      REQUIRE(dxy <= dxw + dwy + 1e-12);
    }
  }
}

TEST_CASE("group identities on random tuples") {
  std::mt19937_64 rng(17);

  SECTION("associativity within 8 ulps") {
    for (int i = 0; i < 2000; ++i) {
      const GroupPoint x = oracles::random_point(rng, 1);
      const GroupPoint y = oracles::random_point(rng, 1);
      const GroupPoint w = oracles::random_point(rng, 1);
      const GroupPoint a = heis::group_mul(heis::group_mul(x, y), w);
      const GroupPoint b = heis::group_mul(x, heis::group_mul(y, w));
      const double scale = std::max({oracles::max_coord(x), oracles::max_coord(y),
                                     oracles::max_coord(w)});
      for (int c = 0; c < 3; ++c)
        REQUIRE(oracles::ulps_at_scale(a.coords()[c], b.coords()[c],
                                       scale * scale) <= 8.0);
    }
  }

  SECTION("dilation is an automorphism") {
    for (int i = 0; i < 2000; ++i) {
      const GroupPoint x = oracles::random_point(rng, 1);
      const GroupPoint y = oracles::random_point(rng, 1);
      const double r = 0.2 + 2.0 * std::generate_canonical<double, 53>(rng);
      const GroupPoint a = heis::dilate(r, heis::group_mul(x, y));
      const GroupPoint b = heis::group_mul(heis::dilate(r, x), heis::dilate(r, y));
      const double zscale =
          std::max(1.0, r) * std::max(oracles::max_coord(x), oracles::max_coord(y));
      const double tscale =
          std::max(1.0, r * r) * oracles::t_term_scale(x, y);
      for (int c = 0; c < 2; ++c)
        REQUIRE(oracles::ulps_at_scale(a.coords()[c], b.coords()[c], zscale) <=
                8.0);
      REQUIRE(oracles::ulps_at_scale(a.t(), b.t(), tscale) <= 8.0);
    }
  }

  SECTION("left invariance of the distance") {
    for (int i = 0; i < 2000; ++i) {
      const GroupPoint w = oracles::random_point(rng, 1);
      const GroupPoint x = oracles::random_point(rng, 1);
      const GroupPoint y = oracles::random_point(rng, 1);
      const double a = heis::group_distance(heis::group_mul(w, x),
                                            heis::group_mul(w, y));
      const double b = heis::group_distance(x, y);
      REQUIRE(std::abs(a - b) <= 1e-12 * std::max(1.0, b));
    }
  }
}

TEST_CASE("homogeneous structure constants") {
  for (int n : {1, 2, 3}) {
    const heis::HomogeneousStructure h{n};
    REQUIRE(h.homogeneous_dim() == 2 * n + 2);
    REQUIRE(h.topological_dim() == 2 * n + 1);
    REQUIRE(h.homogeneous_dim() == h.topological_dim() + 1);
  }
}
