#include "nodalab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "nodalab/errors.hpp"

namespace nodalab {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fv[15];
  fv[7] = f(c);
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - h * kXgk[j]);
    fv[14 - j] = f(c + h * kXgk[j]);
  }
  double rk = kWgk[7] * fv[7], rg = kWg[3] * fv[7];
  for (int j = 0; j < 7; ++j) {
    rk += kWgk[j] * (fv[j] + fv[14 - j]);
    if (j % 2 == 1) rg += kWg[j / 2] * (fv[j] + fv[14 - j]);
  }
  const double mean = 0.5 * rk;
  double asc = kWgk[7] * std::abs(fv[7] - mean);
  for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  asc *= std::abs(h);
  double err = std::abs((rk - rg) * h);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  err = std::max(err, 50.0 * 2.2e-16 * std::abs(rk * h));
  return {a, b, rk * h, err};
}

}  // namespace

void gk15_nodes(double a, double b, double* x, double* w) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  x[7] = c;
  w[7] = kWgk[7] * h;
  for (int j = 0; j < 7; ++j) {
    x[j] = c - h * kXgk[j];
    x[14 - j] = c + h * kXgk[j];
    w[j] = w[14 - j] = kWgk[j] * h;
  }
}

AdaptiveResult adaptive_gk(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           double rel_tol, int max_panels, int initial_panels) {
  AdaptiveResult out;
  if (b == a) return out;
  auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::vector<Panel> heap;
  initial_panels = std::max(1, initial_panels);
  for (int i = 0; i < initial_panels; ++i) {
    heap.push_back(gk15(f, a + (b - a) * i / initial_panels, a + (b - a) * (i + 1) / initial_panels));
    out.evaluations += 15;
  }
  std::make_heap(heap.begin(), heap.end(), cmp);
  auto totals = [&] {
    double v = 0.0, e = 0.0;
    for (const auto& p : heap) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };
  auto [value, error] = totals();
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && static_cast<int>(heap.size()) < max_panels) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const Panel worst = heap.back();
    heap.pop_back();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > std::min(worst.a, worst.b) && m < std::max(worst.a, worst.b))) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), cmp);
      break;
    }
    for (const Panel& p : {gk15(f, worst.a, m), gk15(f, m, worst.b)}) {
      heap.push_back(p);
      std::push_heap(heap.begin(), heap.end(), cmp);
    }
    out.evaluations += 30;
    std::tie(value, error) = totals();
  }
  out.value = value;
  out.error = error;
  out.panels = std::move(heap);
  std::sort(out.panels.begin(), out.panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  return out;
}

std::vector<std::pair<double, double>> inside_intervals(const Domain& domain, const Point& c, const Vec2& dir,
                                                        double rmax) {
  std::vector<double> cuts{0.0};
  for (double t : domain.ray_crossings(c, dir, rmax)) cuts.push_back(t);
  cuts.push_back(rmax);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    if (!domain.inside(c + dir * (0.5 * (a + b)))) continue;
    if (!out.empty() && out.back().second == a) out.back().second = b;
    else out.emplace_back(a, b);
  }
  return out;
}

double ClipQuadrature::integrate(const std::function<double(const Point&)>& g) const {
  double s = 0.0;
  for (const auto& q : samples) s += q.w * g(q.p);
  return s;
}

namespace {

// Radial integral of g(c + r d) r W(r) over [a, b]; the rim substitution
// r = R - u^2 removes a sqrt(R - r) factor in W.
IntegralEstimate radial(const std::function<double(const Point&)>& g, const Point& c, const Vec2& d, double a,
                        double b, double R, const ClipOptions& opt, int* count) {
  const bool weighted = static_cast<bool>(opt.radial_weight);
  if (opt.sqrt_rim && b >= R * (1.0 - 1e-14)) {
    auto f = [&](double u) {
      const double r = R - u * u;
      const double w = weighted ? opt.radial_weight(r) : 1.0;
      return g(c + d * r) * r * w * 2.0 * u;
    };
    const AdaptiveResult res = adaptive_gk(f, 0.0, std::sqrt(R - a), 0.0, 0.1 * opt.rel_tol, 60);
    *count += res.evaluations;
    return {res.value, res.error};
  }
  auto f = [&](double r) { return g(c + d * r) * r * (weighted ? opt.radial_weight(r) : 1.0); };
  const AdaptiveResult res = adaptive_gk(f, a, b, 0.0, 0.1 * opt.rel_tol, 60);
  *count += res.evaluations;
  return {res.value, res.error};
}

}  // namespace

IntegralEstimate integrate_clipped(const std::function<double(const Point&)>& g, const Ball& ball,
                                   const Domain& domain, const ClipOptions& opt) {
  if (opt.budget < 64) fail(ErrorKind::Precondition, "quadrature budget must be at least 64");
  bool any = false;
  double inner_error = 0.0;
  int count = 0;
  auto outer = [&](double theta) {
    const Vec2 d{std::cos(theta), std::sin(theta)};
    double s = 0.0;
    for (const auto& [a, b] : inside_intervals(domain, ball.center, d, ball.radius)) {
      any = true;
      const IntegralEstimate e = radial(g, ball.center, d, a, b, ball.radius, opt, &count);
      s += e.value;
      inner_error = std::max(inner_error, e.error);
    }
    return s;
  };
  const AdaptiveResult res = adaptive_gk(outer, 0.0, 2.0 * kPi, opt.abs_tol, opt.rel_tol, opt.budget, 8);
  if (!any) fail(ErrorKind::EmptyRegion, "ball does not meet the domain");
  return {res.value, res.error + 2.0 * kPi * inner_error};
}

ClipQuadrature clip_quadrature(const Ball& ball, const Domain& domain, int budget) {
  if (budget < 64) fail(ErrorKind::Precondition, "quadrature budget must be at least 64");
  ClipOptions opt;
  opt.budget = budget;
  opt.rel_tol = 1e-13;
  bool any = false;
  auto outer = [&](double theta) {
    const Vec2 d{std::cos(theta), std::sin(theta)};
    double s = 0.0;
    for (const auto& [a, b] : inside_intervals(domain, ball.center, d, ball.radius)) {
      any = true;
      s += 0.5 * (b * b - a * a);
    }
    return s;
  };
  const AdaptiveResult res = adaptive_gk(outer, 0.0, 2.0 * kPi, 0.0, opt.rel_tol, budget, 8);
  if (!any || !(res.value > 0.0)) fail(ErrorKind::EmptyRegion, "ball does not meet the domain");

  ClipQuadrature out;
  out.area = res.value;
  out.error = res.error;
  double tx[15], tw[15], rx[15], rw[15];
  for (const Panel& p : res.panels) {
    gk15_nodes(p.a, p.b, tx, tw);
    for (int i = 0; i < 15; ++i) {
      const Vec2 d{std::cos(tx[i]), std::sin(tx[i])};
      for (const auto& [a, b] : inside_intervals(domain, ball.center, d, ball.radius)) {
        gk15_nodes(a, b, rx, rw);
        for (int j = 0; j < 15; ++j)
          out.samples.push_back({ball.center + d * rx[j], tw[i] * rw[j] * rx[j]});
      }
    }
  }
  return out;
}

}  // namespace nodalab
