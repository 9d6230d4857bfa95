#include "nodalab/doubling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nodalab/errors.hpp"
#include "nodalab/parallel.hpp"

namespace nodalab {

Subject::Subject(Field h, Domain domain) : base_(std::move(h)), domain_(std::move(domain)) {}

Subject::Subject(ExtendedField h, Domain domain)
    : base_(h.base()), domain_(std::move(domain)), extended_(true), rate_(h.rate()) {}

double Subject::value(const Point& x, double t) const {
  const double u = base_->value(x);
  return extended_ ? std::exp(rate_ * t) * u : u;
}

Subject Subject::scaled(double c) const {
  Subject s = *this;
  s.base_ = scaled_field(base_, c);
  return s;
}

namespace {

double slab_weight(double kappa, double s) {
  if (kappa == 0.0) return 2.0 * s;
  return std::sinh(2.0 * kappa * s) / kappa;
}

IntegralEstimate planar_mass(const Subject& h, const Point& x, double r, const MassOptions& opt) {
  ClipOptions co;
  co.rel_tol = opt.rel_tol;
  co.budget = opt.budget;
  const ScalarField& u = *h.base();
  return integrate_clipped([&u](const Point& p) { const double v = u.value(p); return v * v; }, Ball(x, r),
                           h.domain(), co);
}

}  // namespace

IntegralEstimate mass(const Subject& h, const Center& c, double r, const MassOptions& opt) {
  if (!(r > 0.0)) fail(ErrorKind::Input, "mass radius must be positive");
  if (!h.extended()) return planar_mass(h, c.x, r, opt);
  const double kappa = h.rate();
  ClipOptions co;
  co.rel_tol = opt.rel_tol;
  co.budget = opt.budget;
  co.sqrt_rim = true;
  co.radial_weight = [kappa, r](double d) { return slab_weight(kappa, std::sqrt(std::max(0.0, r * r - d * d))); };
  const ScalarField& u = *h.base();
  IntegralEstimate e =
      integrate_clipped([&u](const Point& p) { const double v = u.value(p); return v * v; }, Ball(c.x, r),
                        h.domain(), co);
  const double scale = std::exp(2.0 * kappa * c.t);
  return {e.value * scale, e.error * scale};
}

IntegralEstimate extended_mass_sliced(const Subject& h, const Center& c, double r, const MassOptions& opt) {
  if (!h.extended()) fail(ErrorKind::Input, "sliced mass needs an extended field");
  const double kappa = h.rate();
  double inner_error = 0.0;
  auto slice = [&](double phi) {
    const double rho = r * std::cos(phi);
    if (!(rho > 0.0)) return 0.0;
    IntegralEstimate m;
    try {
      m = planar_mass(h, c.x, rho, opt);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::EmptyRegion) return 0.0;
      throw;
    }
    const double w = std::exp(2.0 * kappa * (c.t + r * std::sin(phi))) * rho;
    inner_error += w * m.error;
    return w * m.value;
  };
  const AdaptiveResult res = adaptive_gk(slice, -0.5 * kPi, 0.5 * kPi, 0.0, opt.rel_tol, 100, 2);
  return {res.value, res.error + inner_error};
}

DoublingReport doubling_index(const Subject& h, const Center& c, double r, const MassOptions& opt) {
  DoublingReport rep;
  rep.center = c.x;
  rep.t = c.t;
  rep.r = r;
  const IntegralEstimate a = mass(h, c, r, opt), b = mass(h, c, 2.0 * r, opt);
  if (!(a.value > 0.0) || !(b.value > 0.0)) fail(ErrorKind::DegenerateField, "field has zero mass on the ball");
  rep.H_r = a.value;
  rep.H_2r = b.value;
  rep.N = std::log(b.value / a.value);
  rep.error = a.error / a.value + b.error / b.value;
  return rep;
}

std::vector<Point> cube_centers(const Cube& Q, const Domain& domain, int lattice) {
  if (lattice < 1) fail(ErrorKind::Input, "lattice size must be positive");
  const Frame f = Q.frame();
  std::vector<Point> out;
  if (lattice == 1) {
    if (domain.level(Q.center) <= kGeomTol) out.push_back(Q.center);
    return out;
  }
  for (int j = 0; j < lattice; ++j)
    for (int i = 0; i < lattice; ++i) {
      const double u = Q.side * (static_cast<double>(i) / (lattice - 1) - 0.5);
      const double v = Q.side * (static_cast<double>(j) / (lattice - 1) - 0.5);
      const Point p = (i * 2 == lattice - 1 && j * 2 == lattice - 1) ? Q.center : f.to_world({u, v});
      if (domain.level(p) <= kGeomTol) out.push_back(p);
    }
  return out;
}

CubeIndexReport max_doubling_index(const Subject& h, const Cube& Q, const CubeGrid& grid, double N0,
                                   const std::vector<Cube>& subcubes, const MassOptions& opt) {
  if (grid.halvings < 0) fail(ErrorKind::Input, "number of radius halvings must be >= 0");
  struct Job {
    Point x;
    double l;
  };
  std::vector<Job> jobs;
  for (const Point& p : cube_centers(Q, h.domain(), grid.lattice)) jobs.push_back({p, Q.diameter()});
  for (const Cube& q : subcubes)
    for (const Point& p : cube_centers(q, h.domain(), grid.lattice)) jobs.push_back({p, q.diameter()});
  if (jobs.empty()) fail(ErrorKind::EmptyRegion, "cube does not meet the closed domain");

  struct Best {
    double N = -1e300;
    double r = 0.0;
    int used = 0, degenerate = 0;
  };
  const int J = grid.halvings;
  std::vector<Best> best(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int k) {
    const Job& job = jobs[k];
    // masses at l·2^{1-i}, i = 0..J+1; N at radius l·2^{-j} uses entries j and j+1
    std::vector<double> H(J + 2);
    for (int i = 0; i <= J + 1; ++i) H[i] = mass(h, Center(job.x), job.l * std::ldexp(1.0, 1 - i), opt).value;
    Best& b = best[k];
    for (int j = 0; j <= J; ++j) {
      if (!(H[j + 1] > 0.0) || !(H[j] > 0.0)) {
        ++b.degenerate;
        continue;
      }
      ++b.used;
      const double N = std::log(H[j] / H[j + 1]);
      if (N > b.N) {
        b.N = N;
        b.r = job.l * std::ldexp(1.0, -j);
      }
    }
  });

  CubeIndexReport rep{Q, grid, 0, 0, 0, 0.0, 0.0, 0.0, {}, 0.0};
  rep.centers = static_cast<int>(jobs.size());
  rep.N0 = N0;
  bool any = false;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    rep.samples += best[k].used;
    rep.degenerate += best[k].degenerate;
    if (best[k].used > 0 && (!any || best[k].N > rep.N_star)) {
      any = true;
      rep.N_star = best[k].N;
      rep.argmax_x = jobs[k].x;
      rep.argmax_r = best[k].r;
    }
  }
  if (!any) fail(ErrorKind::DegenerateField, "field vanishes on every sampled ball");
  rep.N_star_star = std::max(rep.N_star, 0.5 * N0);
  return rep;
}

namespace {

void require_contained(const Domain& d, const Point& x, double R) {
  if (d.kind() == Domain::Kind::Plane) return;
  if (!d.inside(x)) fail(ErrorKind::Geometry, "ball centre lies outside the domain");
  constexpr int dirs = 256;
  for (int i = 0; i < dirs; ++i) {
    const double th = 2.0 * kPi * i / dirs;
    if (!d.ray_crossings(x, {std::cos(th), std::sin(th)}, R).empty() ||
        !d.inside(x + Vec2{std::cos(th), std::sin(th)} * R))
      fail(ErrorKind::Geometry, "ball B(x, 2R) is not contained in the domain");
  }
}

}  // namespace

MonotonicityReport check_interior_monotonicity(const Subject& h, const Center& c, const std::vector<double>& radii,
                                               double tol, const MassOptions& opt) {
  if (radii.empty()) fail(ErrorKind::Input, "radius list is empty");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
      fail(ErrorKind::Input, "radii must be positive and increasing");
  require_contained(h.domain(), c.x, 2.0 * radii.back());
  MonotonicityReport rep;
  rep.radii = radii;
  rep.N.resize(radii.size());
  parallel_for(static_cast<int>(radii.size()), [&](int i) { rep.N[i] = doubling_index(h, c, radii[i], opt).N; });
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (rep.N[i] > rep.N[i + 1] + tol)
      rep.violations.push_back({static_cast<int>(i), radii[i], radii[i + 1], rep.N[i], rep.N[i + 1]});
  return rep;
}

AlmostMonotonicity check_almost_monotonicity(const Subject& h, const Center& c, double r1, double r2,
                                             const MassOptions& opt) {
  if (!(r1 > 0.0) || !(2.0 * r1 <= r2)) fail(ErrorKind::Precondition, "almost monotonicity needs 0 < 2 r1 <= r2");
  AlmostMonotonicity out;
  out.N1 = doubling_index(h, c, r1, opt).N;
  out.N2 = doubling_index(h, c, r2, opt).N;
  out.ratio = out.N1 / (out.N2 + 1.0);
  return out;
}

std::vector<AlmostMonotonicity> check_almost_monotonicity(const Subject& h, const Center& c,
                                                          const std::vector<std::pair<double, double>>& pairs,
                                                          const MassOptions& opt) {
  std::map<double, double> H;
  for (const auto& [r1, r2] : pairs) {
    if (!(r1 > 0.0) || !(2.0 * r1 <= r2)) fail(ErrorKind::Precondition, "almost monotonicity needs 0 < 2 r1 <= r2");
    for (double r : {r1, 2.0 * r1, r2, 2.0 * r2}) H[r] = 0.0;
  }
  for (auto& [r, m] : H) {
    m = mass(h, c, r, opt).value;
    if (!(m > 0.0)) fail(ErrorKind::DegenerateField, "field has zero mass on the ball");
  }
  std::vector<AlmostMonotonicity> out;
  for (const auto& [r1, r2] : pairs) {
    AlmostMonotonicity a;
    a.N1 = std::log(H[2.0 * r1] / H[r1]);
    a.N2 = std::log(H[2.0 * r2] / H[r2]);
    a.ratio = a.N1 / (a.N2 + 1.0);
    out.push_back(a);
  }
  return out;
}

double sampled_sup(const Subject& h, const Center& c, double r, double spacing) {
  if (!(r > 0.0) || !(spacing > 0.0)) fail(ErrorKind::Input, "sup radius and spacing must be positive");
  const int n = static_cast<int>(std::ceil(r / spacing));
  std::vector<double> rows(2 * n + 1, 0.0);
  const double kappa = h.extended() ? h.rate() : 0.0;
  parallel_for(2 * n + 1, [&](int jj) {
    const int j = jj - n;
    double m = 0.0;
    for (int i = -n; i <= n; ++i) {
      const double dx = i * spacing, dy = j * spacing;
      const double d2 = dx * dx + dy * dy;
      if (d2 > r * r) continue;
      const Point p{c.x.x + dx, c.x.y + dy};
      if (h.domain().level(p) > 0.0) continue;
      double v = std::abs(h.base()->value(p));
      if (h.extended()) v *= std::exp(kappa * (c.t + std::sqrt(r * r - d2)));
      m = std::max(m, v);
    }
    rows[jj] = m;
  });
  return *std::max_element(rows.begin(), rows.end());
}

ThreeBallReport three_ball_check(const Subject& h, const Center& c, double r, const ThreeBallFit& fit) {
  if (!(fit.delta > 0.0 && fit.delta < 1.0)) fail(ErrorKind::Input, "three-ball exponent must lie in (0, 1)");
  const double sp = r / 200.0;
  ThreeBallReport rep;
  rep.sup_r = sampled_sup(h, c, r, sp);
  rep.sup_mid = sampled_sup(h, c, 1.5 * r, sp);
  rep.sup_4r = sampled_sup(h, c, 4.0 * r, sp);
  if (!(rep.sup_r > 0.0)) fail(ErrorKind::DegenerateField, "field vanishes on the inner ball samples");
  const double base = std::pow(rep.sup_r, 1.0 - fit.delta) * std::pow(rep.sup_4r, fit.delta);
  rep.rhs = fit.C * base;
  rep.C_needed = rep.sup_mid / base;
  rep.holds = rep.sup_mid <= rep.rhs;
  return rep;
}

ScanResult eigen_doubling_scan(const Field& u, double lambda, const Domain& domain, double r, double r0,
                               const MassOptions& opt) {
  if (!(r > 0.0) || !(r < r0 / 16.0)) fail(ErrorKind::Precondition, "scan radius must satisfy 0 < r < r0/16");
  const std::vector<Point> net = domain.boundary_net(r / 8.0);
  if (net.empty()) fail(ErrorKind::Geometry, "boundary net is empty");
  const Subject h(harmonic_extension(u, lambda), domain);
  ScanResult out;
  out.lambda = lambda;
  out.r = r;
  out.points.resize(net.size());
  parallel_for(static_cast<int>(net.size()), [&](int i) {
    out.points[i] = {net[i], doubling_index(h, Center(net[i], 0.0), r, opt)};
  });
  out.max_N = -1e300;
  for (const auto& p : out.points)
    if (p.report.N > out.max_N) {
      out.max_N = p.report.N;
      out.argmax = p.y;
    }
  return out;
}

}  // namespace nodalab
