#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "nodalab/errors.hpp"
#include "nodalab/fields.hpp"
#include "nodalab/quadrature.hpp"

using namespace nodalab;

namespace {

Domain upper_half_plane() {
  GraphSpec g;
  g.f = [](double) { return 0.0; };
  g.df = [](double) { return 0.0; };
  g.box = {-5.0, 5.0, -5.0, 5.0};
  return Domain::graph(g);
}

}  // namespace

TEST_CASE("adaptive Gauss-Kronrod") {
  const auto r = adaptive_gk([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-14, 1e-14);
  CHECK(std::abs(r.value - (std::exp(1.0) - 1.0)) < 1e-14);
  const auto s = adaptive_gk([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-12, 400);
  CHECK(std::abs(s.value - 2.0 / 3.0) < 1e-10);
  double w[15], x[15], sum = 0.0;
  gk15_nodes(-1.0, 1.0, x, w);
  for (double wi : w) sum += wi;
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("clip quadrature areas") {
  const auto full = clip_quadrature(Ball({0.0, 0.0}, 1.0), Domain::plane());
  CHECK(std::abs(full.area - kPi) < 1e-10);
  double wsum = 0.0;
  for (const auto& s : full.samples) {
    CHECK(s.w >= 0.0);
    wsum += s.w;
  }
  CHECK(std::abs(wsum - full.area) < 1e-12);

  const auto half = clip_quadrature(Ball({0.0, 0.0}, 1.0), upper_half_plane());
  CHECK(std::abs(half.area - kPi / 2) < 1e-10);
  for (const auto& s : half.samples) CHECK(s.p.y >= 0.0);

  const auto quarter = clip_quadrature(Ball({0.0, 0.0}, 0.5), Domain::unit_square());
  CHECK(std::abs(quarter.area - kPi * 0.25 / 4) < 1e-6);
  CHECK(std::abs(quarter.area - kPi * 0.25 / 4) <= std::max(quarter.error, 1e-12) + 1e-12);

  const auto disk = clip_quadrature(Ball({1.0, 0.0}, 0.5), Domain::disk(1.0));
  // lens area of two circles, radii 1 and 0.5, centres at distance 1
  const double r1 = 1.0, r2 = 0.5, d = 1.0;
  const double lens = r1 * r1 * std::acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1)) +
                      r2 * r2 * std::acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2)) -
                      0.5 * std::sqrt((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2));
  CHECK(std::abs(disk.area - lens) < 1e-8);
}

TEST_CASE("clip quadrature integrates low degree polynomials exactly") {
  const auto q = clip_quadrature(Ball({0.3, -0.2}, 0.7), Domain::plane());
  const double v = q.integrate([](const Point& p) {
    const double x = p.x - 0.3, y = p.y + 0.2;
    return x * x * y * y + x * x * x * x + 3 * x * y + 1.0;
  });
  // ∫ r^4 (cos²sin² + cos⁴) r dr dθ + area
  const double R = 0.7;
  const double exact = std::pow(R, 6) / 6 * (kPi / 4 + 3 * kPi / 4) + kPi * R * R;
  CHECK(std::abs(v - exact) / exact < 1e-8);
}

TEST_CASE("clipped integral of the square mode") {
  SquareMode u(2, 1);
  const auto est = integrate_clipped([&](const Point& p) { return u(p) * u(p); }, Ball({0.5, 0.5}, 0.25),
                                     Domain::unit_square());
  CHECK(std::abs(est.value - fixtures::kSquare21MassCenter) < 1e-10);
}

TEST_CASE("clip quadrature errors") {
  CHECK_THROWS_AS(clip_quadrature(Ball({0.0, 0.0}, 1.0), Domain::plane(), 32), Error);
  try {
    clip_quadrature(Ball({5.0, 5.0}, 0.5), Domain::unit_square());
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyRegion);
  }
}

TEST_CASE("inside intervals of a ray through the disk") {
  const auto iv = inside_intervals(Domain::disk(1.0), {-2.0, 0.0}, {1.0, 0.0}, 4.0);
  REQUIRE(iv.size() == 1);
  CHECK(iv[0].first == doctest::Approx(1.0));
  CHECK(iv[0].second == doctest::Approx(3.0));
}
