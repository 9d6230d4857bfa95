#include "nodalab/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "nodalab/errors.hpp"
#include "nodalab/parallel.hpp"

namespace nodalab {

using cd = std::complex<double>;

Trochoid::Trochoid(double t, double w) : tau(t), omega(w) {
  if (!(t >= 0.0) || !(w > 0.0)) fail(ErrorKind::Input, "trochoid needs tau >= 0 and omega > 0");
  a = t / std::sqrt(1.0 + t * t) / w;
}

namespace {

// parameter of the boundary point with abscissa x: t - a sin(ωt) = x
double trochoid_param(const Trochoid& tr, double x) {
  const double aw = tr.a * tr.omega;
  double t = x;
  for (int it = 0; it < 60; ++it) {
    const double step = (t - tr.a * std::sin(tr.omega * t) - x) / (1.0 - aw * std::cos(tr.omega * t));
    t -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(t))) break;
  }
  return t;
}

}  // namespace

double Trochoid::f(double x) const {
  const double t = trochoid_param(*this, x);
  return a * (std::cos(omega * t) - 1.0);
}

double Trochoid::df(double x) const {
  const double t = trochoid_param(*this, x);
  return -a * omega * std::sin(omega * t) / (1.0 - a * omega * std::cos(omega * t));
}

Domain Trochoid::domain(double half_width) const {
  GraphSpec g;
  const Trochoid self = *this;
  g.f = [self](double x) { return self.f(x); };
  g.df = [self](double x) { return self.df(x); };
  g.box = {-half_width, half_width, -1.0, half_width};
  g.tau = tau;
  return Domain::graph(g);
}

Field Trochoid::harmonic() const {
  const double aa = a, w = omega;
  const cd I(0.0, 1.0);
  auto preimage = [aa, w, I](const Point& p) {
    const cd z(p.x, p.y);
    cd v = z;
    for (int it = 0; it < 80; ++it) {
      const cd e = std::exp(I * w * v);
      const cd step = (v + I * aa * (e - 1.0) - z) / (1.0 - aa * w * e);
      v -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(v))) break;
    }
    return v;
  };
  auto value = [preimage](const Point& p) {
    const cd v = preimage(p);
    return std::real(v + v * v / 4.0);
  };
  auto grad = [preimage, aa, w, I](const Point& p) {
    const cd v = preimage(p);
    const cd d = (1.0 + v / 2.0) / (1.0 - aa * w * std::exp(I * w * v));
    return Vec2{d.real(), -d.imag()};
  };
  return make_field(value, grad, unbounded_box(), "trochoid");
}

SigmaTrace extend_trace_to_sigma(const Field& h, const Domain& domain, const StandardApproximation& sa) {
  const Cylinder& S = sa.cylinder;
  const Frame fr = sa.frame;
  auto crossing = [&](double xp) {
    const Point bottom = fr.to_world({xp, S.bottom()});
    const auto cr = domain.ray_crossings(bottom, fr.vec_to_world({0.0, 1.0}), S.height);
    if (cr.size() > 1) fail(ErrorKind::Geometry, "side of S crosses the boundary more than once");
    if (cr.size() == 1) return S.bottom() + cr[0];
    if (domain.level(bottom) <= 0.0) return S.bottom();
    fail(ErrorKind::Geometry, "side of S does not meet the domain");
  };
  SigmaTrace out;
  out.crossing_left = crossing(S.left());
  out.crossing_right = crossing(S.right());
  const double mid = S.base.x, cl = out.crossing_left, cr = out.crossing_right;
  out.value = [h, fr, mid, cl, cr](const Point& q) {
    const double c = q.x < mid ? cl : cr;
    return h->value(fr.to_world({q.x, std::max(q.y, c)}));
  };
  return out;
}

ApproximationResult build_approximant(const Field& h, const Domain& domain, const Point& x0, double tau,
                                      double delta) {
  if (!(delta > 0.0) || delta > 1.0 / 64.0) fail(ErrorKind::Precondition, "grid spacing must lie in (0, 1/64]");
  const StandardApproximation sa = standard_approximation(domain, x0, tau);
  const Frame fr = sa.frame;
  const Cylinder& S = sa.cylinder;

  ApproximationResult res;
  res.tau = tau;
  {
    const int n = 192;
    const double sp = 3.0 / n;
    std::vector<double> rows(2 * n + 1, 0.0);
    parallel_for(2 * n + 1, [&](int j) {
      for (int i = 0; i <= 2 * n; ++i) {
        const Vec2 d{(i - n) * sp, (j - n) * sp};
        if (norm(d) >= 3.0) continue;
        const Point p = x0 + d;
        if (domain.level(p) > 0.0) continue;
        rows[j] = std::max(rows[j], std::abs(h->value(p)));
      }
    });
    res.normalization = *std::max_element(rows.begin(), rows.end());
    if (!(res.normalization > 0.0)) fail(ErrorKind::DegenerateField, "h vanishes on Ω ∩ B(x0, 3)");
  }
  const Field hn = scaled_field(h, 1.0 / res.normalization);
  const SigmaTrace trace = extend_trace_to_sigma(hn, domain, sa);
  const Vec2 en = fr.vec_to_world({0.0, 1.0});

  MixedData data;
  data.dirichlet_sigma = trace.value;
  data.neumann_top = [&](const Point& q) { return dot(gradient(*hn, fr.to_world(q)), en); };
  data.neumann_bottom = [](const Point&) { return 0.0; };
  res.g = solve_mixed_harmonic(S, data, delta);

  const GridFunction& g = res.g;
  res.sup_g = g.max_abs();
  double faces = 0.0;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      if (i == 0 || i == g.nx || j == g.ny) faces = std::max(faces, std::abs(g.at(i, j)));
  res.max_on_faces = faces >= res.sup_g;

  res.sample_spacing = delta / 2.0;
  const int mx = static_cast<int>(std::lround(2.0 * S.radius / res.sample_spacing));
  const int my = static_cast<int>(std::lround(S.height / res.sample_spacing));
  struct RowMax {
    double diff = 0.0, h = 0.0, grad = 0.0, second = 0.0;
  };
  std::vector<RowMax> rows(my + 1);
  const double eta = 1e-3;
  parallel_for(my + 1, [&](int j) {
    RowMax r;
    for (int i = 0; i <= mx; ++i) {
      const Point q{i == mx ? S.right() : S.left() + i * res.sample_spacing,
                    j == my ? S.top() : S.bottom() + j * res.sample_spacing};
      const Point p = fr.to_world(q);
      if (domain.level(p) > 0.0) continue;
      const double v = hn->value(p);
      r.diff = std::max(r.diff, std::abs(g.interpolate(q) - v));
      r.h = std::max(r.h, std::abs(v));
      r.grad = std::max(r.grad, norm(gradient(*hn, p)));
      const Vec2 ex = fr.vec_to_world({eta, 0.0}), ey = fr.vec_to_world({0.0, eta});
      const double hxx = (hn->value(p + ex) - 2.0 * v + hn->value(p - ex)) / (eta * eta);
      const double hyy = (hn->value(p + ey) - 2.0 * v + hn->value(p - ey)) / (eta * eta);
      const double hxy = (hn->value(p + ex + ey) - hn->value(p + ex - ey) - hn->value(p - ex + ey) +
                          hn->value(p - ex - ey)) / (4.0 * eta * eta);
      r.second = std::max({r.second, std::abs(hxx), std::abs(hyy), std::abs(hxy)});
    }
    rows[j] = r;
  });
  for (const auto& r : rows) {
    res.sup_diff = std::max(res.sup_diff, r.diff);
    res.sup_h = std::max(res.sup_h, r.h);
    res.grad_bound = std::max(res.grad_bound, r.grad);
    res.second_bound = std::max(res.second_bound, r.second);
  }
  return res;
}

double barrier_phi(const Point& p, int n, double a) {
  const double dz = p.y - 2.0 / 3.0;
  return a * ((n - 1) * dz * dz - p.x * p.x + 1.0);
}

UniquenessCheck uniqueness_check(const std::function<double(double)>& f, const std::function<double(double)>& df,
                                 const WProblem& data, double delta, double mesh_h) {
  if (!(delta >= 0.0)) fail(ErrorKind::Input, "data bound must be nonnegative");
  for (int i = 0; i <= 1000; ++i) {
    const double v = f(-1.0 + 2.0 * i / 1000.0);
    if (!(v > 0.0) || !(v < 1.0 / 3.0)) fail(ErrorKind::Precondition, "graph must satisfy 0 < f < 1/3");
  }
  GraphSpec gs;
  gs.f = f;
  gs.df = df;
  gs.box = {-1.0, 1.0, 0.0, 1.0};
  const TriMesh mesh = mesh_domain(Domain::graph(gs), mesh_h);

  auto flux = [&](int marker, const Point& p) {
    if (marker == 2 && data.top) return delta * data.top(p);
    if (marker == 0 && data.graph) return delta * data.graph(p);
    return 0.0;
  };
  P1BoundaryData bd;
  bd.is_dirichlet = [](int marker) { return marker == 1 || marker == 3; };
  bd.dirichlet = [](const Point&) { return 0.0; };
  bd.flux = flux;
  const Eigen::VectorXd w = solve_p1_laplace(mesh, bd);

  UniquenessCheck out;
  out.mesh_h = mesh_h;
  out.nodes = static_cast<int>(mesh.vertices.size());
  for (const auto& e : mesh.boundary_edges)
    if (e.marker == 0 || e.marker == 2)
      for (int v : {e.a, e.b}) out.delta = std::max(out.delta, std::abs(flux(e.marker, mesh.vertices[v])));
  out.sup_w = w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
  out.ratio = out.delta > 0.0 ? out.sup_w / out.delta : 0.0;
  return out;
}

PsiReport psi_barrier_check(double tau, double delta, int interior_samples, int boundary_samples) {
  if (!(tau > 0.0)) fail(ErrorKind::Precondition, "tau must be positive");
  if (interior_samples < 1 || boundary_samples < 2) fail(ErrorKind::Input, "need samples");
  const auto psi = solve_dirichlet_disk(2.0, delta);
  PsiReport rep;
  rep.tau = tau;
  rep.delta = delta;
  rep.axis_value = psi->value({0.0, 1.0});

  std::mt19937_64 rng(0x5EED);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.0, 2.0);
  rep.min_margin_l = std::numeric_limits<double>::infinity();
  while (rep.interior_samples < interior_samples) {
    const Point p{ux(rng), uy(rng)};
    if (norm(p) >= 2.0) continue;
    ++rep.interior_samples;
    rep.min_margin_l = std::min(rep.min_margin_l, psi->value(p) - 0.5 * p.y);
  }

  const Trochoid tr(tau);
  const Point x1{0.0, -3.0 * tau};
  rep.min_boundary_psi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < boundary_samples; ++i) {
    const double x = -2.0 + 4.0 * i / (boundary_samples - 1);
    const Point q = Point{x, tr.f(x)} - x1;
    if (norm(q) >= 2.0) continue;
    if (q.y < tau) fail(ErrorKind::Resolution, "boundary sample below the tau floor");
    ++rep.boundary_samples;
    rep.min_boundary_psi = std::min(rep.min_boundary_psi, psi->value(q));
  }
  rep.min_margin_boundary = rep.min_boundary_psi - 0.5 * tau;
  rep.holds = rep.min_margin_l >= 0.0 && rep.min_margin_boundary >= 0.0;
  return rep;
}

namespace {

// sup of |h| and |∇h| on a polar grid of the half ball of radius R
std::pair<double, double> half_ball_sups(const ScalarField& h, double R, int rings, bool with_gradient) {
  double su = 0.0, sg = 0.0;
  for (int i = 0; i <= rings; ++i) {
    const double r = R * i / rings;
    const int na = i == 0 ? 1 : 2 * rings + 1;
    for (int j = 0; j < na; ++j) {
      const double th = na == 1 ? 0.0 : kPi * j / (na - 1);
      const Point p{r * std::cos(th), r * std::sin(th)};
      su = std::max(su, std::abs(h.value(p)));
      if (with_gradient) sg = std::max(sg, norm(gradient(h, p)));
    }
  }
  return {su, sg};
}

}  // namespace

SmallnessFit smallness_propagation_fit(const std::function<Field(double eps)>& family, const std::vector<double>& eps,
                                       int rings) {
  if (eps.size() < 3) fail(ErrorKind::Fit, "smallness fit needs at least three epsilon values");
  for (double e : eps)
    if (!(e > 0.0)) fail(ErrorKind::Input, "epsilon must be positive");
  SmallnessFit fit;
  fit.eps = eps;
  fit.sup_third.assign(eps.size(), 0.0);
  fit.scale.assign(eps.size(), 1.0);
  parallel_for(static_cast<int>(eps.size()), [&](int k) {
    const Field h = family(eps[k]);
    const auto [su, sg] = half_ball_sups(*h, 1.0, rings, true);
    fit.scale[k] = std::max({1.0, su, sg});
    fit.sup_third[k] = half_ball_sups(*h, 1.0 / 3.0, rings, false).first / fit.scale[k];
  });
  const int n = static_cast<int>(eps.size());
  std::vector<double> x(n), y(n);
  for (int k = 0; k < n; ++k) {
    if (!(fit.sup_third[k] > 0.0)) fail(ErrorKind::DegenerateField, "family member vanishes on (1/3)B+");
    x[k] = std::log(eps[k]);
    y[k] = std::log(fit.sup_third[k]);
  }
  double mx = 0.0, my = 0.0;
  for (int k = 0; k < n; ++k) {
    mx += x[k] / n;
    my += y[k] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (int k = 0; k < n; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::Fit, "epsilon values must not all coincide");
  fit.gamma = sxy / sxx;
  const double b = my - fit.gamma * mx;
  fit.C = std::exp(b);
  for (int k = 0; k < n; ++k) fit.residual = std::max(fit.residual, std::abs(y[k] - b - fit.gamma * x[k]));
  return fit;
}

Field frequency_family_member(double eps) {
  if (!(eps > 0.0) || eps > std::exp(-1.0)) fail(ErrorKind::Precondition, "epsilon must lie in (0, 1/e]");
  const double k = std::log(1.0 / eps);
  return make_field(
      [k](const Point& p) { return std::exp(k * (p.y - 1.0)) * std::cos(k * p.x) / k; },
      [k](const Point& p) {
        const double e = std::exp(k * (p.y - 1.0));
        return Vec2{-e * std::sin(k * p.x), e * std::cos(k * p.x)};
      },
      unbounded_box(), "frequency");
}

}  // namespace nodalab
