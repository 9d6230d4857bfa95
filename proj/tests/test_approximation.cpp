#include <cmath>
#include <random>

#include "doctest.h"
#include "nodalab/approximation.hpp"
#include "nodalab/errors.hpp"

using namespace nodalab;

namespace {

Domain flat_domain() {
  GraphSpec g;
  g.f = [](double) { return 0.0; };
  g.df = [](double) { return 0.0; };
  g.box = {-6.0, 6.0, -1.0, 6.0};
  return Domain::graph(g);
}

}  // namespace

TEST_CASE("trochoid geometry") {
  const Trochoid tr(0.04);
  CHECK(tr.f(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  double slope = 0.0;
  for (int i = 0; i <= 4000; ++i) slope = std::max(slope, std::abs(tr.df(-2.0 + i / 1000.0)));
  CHECK(slope == doctest::Approx(0.04).epsilon(1e-4));
  const Domain d = tr.domain();
  const Field h = tr.harmonic();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    const Point b{x, tr.f(x)};
    const Vec2 nu = d.outward_normal(b);
    CHECK(std::abs(dot(h->gradient_at(b), nu)) < 1e-10);
    const Point p{x, tr.f(x) + 0.5 + std::abs(u(rng))};
    CHECK(std::abs(laplacian_stencil(*h, p, 1e-3)) < 1e-5);
  }
}

TEST_CASE("trace extension") {
  const Domain flat = flat_domain();
  const auto sa = standard_approximation(flat, {0.0, 0.0}, 0.0);
  const auto c = constant_field(2.5);
  const auto t = extend_trace_to_sigma(c, flat, sa);
  CHECK(t.value({-1.0, 0.3}) == 2.5);
  const auto x = make_field([](const Point& p) { return p.x + p.y; });
  const auto tx = extend_trace_to_sigma(x, flat, sa);
  CHECK(tx.value({1.0, 0.4}) == doctest::Approx(1.4));

  const Trochoid tr(0.02);
  const Domain d = tr.domain();
  const auto s2 = standard_approximation(d, {0.0, 0.0}, 0.02);
  const Field h = tr.harmonic();
  const auto th = extend_trace_to_sigma(h, d, s2);
  for (double side : {-1.0, 1.0}) {
    const double c0 = side < 0 ? th.crossing_left : th.crossing_right;
    CHECK(std::abs(c0 - tr.f(side)) < 1e-9);
    CHECK(std::abs(th.value({side, c0 + 1e-9}) - th.value({side, c0 - 1e-9})) <= 1e-6);
    CHECK(th.value({side, s2.cylinder.bottom()}) == th.value({side, c0}));
  }
}

TEST_CASE("approximant") {
  const Domain flat = flat_domain();
  const auto one = build_approximant(constant_field(1.0), flat, {0.0, 0.0}, 0.0, 1.0 / 64);
  CHECK(one.sup_diff < 1e-12);
  CHECK(one.sup_g == doctest::Approx(1.0));

  const auto h = make_field([](const Point& p) { return std::cos(kPi * p.x) * std::cosh(kPi * p.y); });
  const auto r = build_approximant(h, flat, {0.0, 0.0}, 0.0, 1.0 / 128);
  CHECK(r.sup_diff <= 5.0 * r.second_bound / (128.0 * 128.0));
  CHECK(r.max_on_faces);

  std::vector<double> taus{0.04, 0.02, 0.01, 0.005}, diffs;
  for (double tau : taus) {
    const Trochoid tr(tau);
    const auto a = build_approximant(tr.harmonic(), tr.domain(), {0.0, 0.0}, tau, 1.0 / 128);
    diffs.push_back(a.sup_diff);
    CHECK(a.max_on_faces);
    CHECK(std::abs(a.sup_g - a.sup_h) <= 2.0 / 128 * a.grad_bound);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double x = std::log(taus[i]), y = std::log(diffs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(taus.size());
  CHECK((n * sxy - sx * sy) / (n * sxx - sx * sx) >= 0.8);

  CHECK_THROWS_AS(build_approximant(h, flat, {0.0, 0.0}, 0.0, 1.0 / 32), Error);
}

TEST_CASE("barrier phi") {
  CHECK(barrier_phi({0.0, 1.0}) == doctest::Approx(10.0 / 9.0));
  CHECK(barrier_phi({0.0, 2.0 / 3.0}) == doctest::Approx(1.0));
  CHECK(barrier_phi({0.0, 1.0}, 2, 3.0) == doctest::Approx(10.0 / 3.0));
  double lowest = 1e300;
  for (int j = 0; j < 100; ++j)
    for (int i = 0; i < 100; ++i) lowest = std::min(lowest, barrier_phi({-1.0 + 2.0 * i / 99, j / 99.0}));
  CHECK(lowest >= 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto phi = make_field([](const Point& p) { return barrier_phi(p); });
  for (int i = 0; i < 1000; ++i) CHECK(std::abs(laplacian_stencil(*phi, {u(rng), u(rng)}, 0.125)) <= 1e-10);
}

TEST_CASE("uniqueness check") {
  auto f = [](double) { return 1.0 / 6.0; };
  auto df = [](double) { return 0.0; };
  const WProblem unit{[](const Point&) { return 1.0; }, {}};
  const auto zero = uniqueness_check(f, df, unit, 0.0, 1.0 / 32);
  CHECK(zero.sup_w == 0.0);
  const auto a = uniqueness_check(f, df, unit, 1e-3, 1.0 / 32);
  const auto b = uniqueness_check(f, df, unit, 2e-3, 1.0 / 32);
  CHECK(std::abs(b.sup_w - 2.0 * a.sup_w) <= 1e-10);
  CHECK(a.delta == doctest::Approx(1e-3));
  const auto fine = uniqueness_check(f, df, unit, 1e-3, 1.0 / 64);
  CHECK(std::abs(a.ratio - fine.ratio) <= 0.05 * fine.ratio);
  const WProblem wavy{[](const Point& p) { return std::cos(3.0 * p.x); },
                      [](const Point& p) { return 0.5 * std::sin(2.0 * p.x); }};
  const auto c = uniqueness_check([](double x) { return 0.15 + 0.05 * std::sin(4.0 * x); },
                                  [](double x) { return 0.2 * std::cos(4.0 * x); }, wavy, 1e-2, 1.0 / 32);
  CHECK(std::isfinite(c.ratio));
  CHECK(c.ratio > 0.0);
  CHECK_THROWS_AS(uniqueness_check([](double) { return 0.4; }, df, unit, 1e-3, 1.0 / 32), Error);
}

TEST_CASE("psi barrier") {
  const auto rep = psi_barrier_check(0.02, 1.0 / 64);
  CHECK(rep.axis_value >= 0.5);
  CHECK(rep.interior_samples == 1000);
  CHECK(rep.min_margin_l >= 0.0);
  CHECK(rep.min_boundary_psi >= 0.01);
  CHECK(rep.holds);
  const auto psi = solve_dirichlet_disk(2.0, 1.0 / 64);
  for (double x : {-1.5, -0.5, 0.0, 0.7}) CHECK(std::abs(psi->value({x, 0.0})) < 1e-12);
}

TEST_CASE("propagation of smallness") {
  const std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const auto h1 = make_field([](const Point& p) { return 0.5 * std::exp(p.y) * std::cos(p.x) / std::exp(1.0); });
  const auto lin = smallness_propagation_fit([h1](double e) { return scaled_field(h1, e); }, eps);
  CHECK(lin.gamma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lin.residual < 1e-12);

  const auto fit = smallness_propagation_fit(frequency_family_member, eps);
  CHECK(fit.gamma > 0.0);
  CHECK(fit.gamma < 1.0);
  CHECK(fit.residual <= 0.1);
  for (std::size_t i = 0; i + 1 < eps.size(); ++i) CHECK(fit.sup_third[i + 1] <= fit.sup_third[i]);
  CHECK_THROWS_AS(smallness_propagation_fit(frequency_family_member, {1e-2, 1e-3}), Error);
}
