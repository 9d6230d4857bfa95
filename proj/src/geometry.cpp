#include "nodalab/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "nodalab/errors.hpp"

namespace nodalab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::DegenerateNormal: return "degenerate normal";
    case ErrorKind::NotAGraph: return "not a graph";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::Geometry: return "geometry error";
    case ErrorKind::Construction: return "construction error";
    case ErrorKind::EmptyRegion: return "empty region";
    case ErrorKind::DegenerateField: return "degenerate field";
    case ErrorKind::Margin: return "margin error";
    case ErrorKind::Input: return "input error";
    case ErrorKind::Convergence: return "convergence error";
    case ErrorKind::RefinementNeeded: return "refinement needed";
    case ErrorKind::Fit: return "fit error";
    case ErrorKind::Resolution: return "resolution error";
    case ErrorKind::Config: return "config error";
  }
  return "error";
}

// ---------------------------------------------------------------------------
// Frames and primitive shapes

Frame::Frame(Point origin, Vec2 normal_axis) : origin_(origin) {
  const double n = norm(normal_axis);
  if (!(n > 0.0)) fail(ErrorKind::Input, "frame axis must be nonzero");
  normal_ = normal_axis * (1.0 / n);
  tangent_ = {normal_.y, -normal_.x};
}

Point Frame::to_local(const Point& p) const {
  const Vec2 d = p - origin_;
  return {dot(d, tangent_), dot(d, normal_)};
}

Point Frame::to_world(const Point& q) const { return origin_ + tangent_ * q.x + normal_ * q.y; }

Ball::Ball(Point c, double r) : center(c), radius(r) {
  if (!(r > 0.0)) fail(ErrorKind::Input, "ball radius must be positive");
}

Cube::Cube(Point c, double s, Vec2 axis) : center(c), side(s), normal_axis(normalized(axis)) {
  if (!(s > 0.0)) fail(ErrorKind::Input, "cube side must be positive");
}

bool Cube::contains(const Point& p, double tol) const {
  const Point q = frame().to_local(p);
  const double h = 0.5 * side + tol;
  return std::abs(q.x) <= h && std::abs(q.y) <= h;
}

bool Cube::inside(const Cube& outer, double tol) const {
  const Frame f = frame();
  const double h = 0.5 * side;
  for (double sx : {-h, h})
    for (double sy : {-h, h})
      if (!outer.contains(f.to_world({sx, sy}), tol)) return false;
  return true;
}

Cylinder::Cylinder(Point b, double r, double h) : base(b), radius(r), height(h) {
  if (!(r > 0.0) || !(h > 0.0)) fail(ErrorKind::Input, "cylinder radius and height must be positive");
}

bool Cylinder::contains(const Point& q) const {
  return std::abs(q.x - base.x) < radius && q.y > bottom() && q.y < top();
}

Cylinder::Face Cylinder::classify(const Point& q, double tol) const {
  const double dx = std::abs(q.x - base.x);
  if (dx > radius + tol || q.y < bottom() - tol || q.y > top() + tol) return Face::Outside;
  if (std::abs(dx - radius) <= tol) return Face::Side;
  if (std::abs(q.y - bottom()) <= tol) return Face::LowerGamma;
  if (std::abs(q.y - top()) <= tol) return Face::UpperGamma;
  return Face::Interior;
}

double RadialProfile::operator()(double theta) const {
  double r = base;
  for (std::size_t j = 0; j < cos_coeffs.size(); ++j) r += cos_coeffs[j] * std::cos((j + 1) * theta);
  for (std::size_t j = 0; j < sin_coeffs.size(); ++j) r += sin_coeffs[j] * std::sin((j + 1) * theta);
  return r;
}

double RadialProfile::derivative(double theta) const {
  double r = 0.0;
  for (std::size_t j = 0; j < cos_coeffs.size(); ++j) r -= (j + 1.0) * cos_coeffs[j] * std::sin((j + 1) * theta);
  for (std::size_t j = 0; j < sin_coeffs.size(); ++j) r += (j + 1.0) * sin_coeffs[j] * std::cos((j + 1) * theta);
  return r;
}

double RadialProfile::second_derivative(double theta) const {
  double r = 0.0;
  for (std::size_t j = 0; j < cos_coeffs.size(); ++j) {
    const double w = j + 1.0;
    r -= w * w * cos_coeffs[j] * std::cos(w * theta);
  }
  for (std::size_t j = 0; j < sin_coeffs.size(); ++j) {
    const double w = j + 1.0;
    r -= w * w * sin_coeffs[j] * std::sin(w * theta);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Domain

Domain Domain::plane() { return Domain{}; }

Domain Domain::unit_square() {
  Domain d;
  d.kind_ = Kind::Square;
  return d;
}

Domain Domain::disk(double radius) {
  if (!(radius > 0.0)) fail(ErrorKind::Input, "disk radius must be positive");
  Domain d;
  d.kind_ = Kind::Disk;
  d.radius_ = radius;
  return d;
}

Domain Domain::graph(GraphSpec spec) {
  if (!spec.f) fail(ErrorKind::Input, "graph domain needs a graph function");
  if (!spec.df) {
    auto f = spec.f;
    spec.df = [f](double x) {
      const double h = 1e-6;
      return (f(x + h) - f(x - h)) / (2.0 * h);
    };
  }
  if (!(spec.box.xmax > spec.box.xmin) || !(spec.box.ymax > spec.box.ymin))
    fail(ErrorKind::Input, "graph domain box is empty");
  Domain d;
  d.kind_ = Kind::Graph;
  d.graph_ = std::move(spec);
  return d;
}

Domain Domain::perturbed_disk(RadialProfile profile) {
  for (int i = 0; i < 720; ++i) {
    if (!(profile(2.0 * kPi * i / 720.0) > 0.0)) fail(ErrorKind::Input, "radial profile must stay positive");
  }
  Domain d;
  d.kind_ = Kind::PerturbedDisk;
  d.profile_ = std::move(profile);
  return d;
}

std::string Domain::name() const {
  switch (kind_) {
    case Kind::Plane: return "plane";
    case Kind::Square: return "square";
    case Kind::Disk: return "disk";
    case Kind::Graph: return "graph";
    case Kind::PerturbedDisk: return "perturbed_disk";
  }
  return "unknown";
}

namespace {

double box_level(const Box& b, const Point& p) {
  return std::max({b.xmin - p.x, p.x - b.xmax, b.ymin - p.y, p.y - b.ymax});
}

}  // namespace

double Domain::level(const Point& p) const {
  switch (kind_) {
    case Kind::Plane: return -1.0;
    case Kind::Square: return std::max({-p.x, p.x - 1.0, -p.y, p.y - 1.0});
    case Kind::Disk: return norm(p) - radius_;
    case Kind::Graph: return std::max(graph_.f(p.x) - p.y, box_level(graph_.box, p));
    case Kind::PerturbedDisk: return norm(p) - profile_(std::atan2(p.y, p.x));
  }
  return -1.0;
}

bool Domain::on_boundary(const Point& p, double tol) const {
  if (kind_ == Kind::Plane) return false;
  return std::abs(level(p)) <= tol;
}

Vec2 Domain::outward_normal(const Point& p) const {
  if (!on_boundary(p)) fail(ErrorKind::Domain, "point is not on the boundary");
  switch (kind_) {
    case Kind::Plane: break;
    case Kind::Square: {
      std::vector<Vec2> active;
      if (std::abs(p.x) <= kGeomTol) active.push_back({-1.0, 0.0});
      if (std::abs(p.x - 1.0) <= kGeomTol) active.push_back({1.0, 0.0});
      if (std::abs(p.y) <= kGeomTol) active.push_back({0.0, -1.0});
      if (std::abs(p.y - 1.0) <= kGeomTol) active.push_back({0.0, 1.0});
      if (active.size() != 1) fail(ErrorKind::DegenerateNormal, "square corner has no normal");
      return active.front();
    }
    case Kind::Disk: return normalized(p);
    case Kind::Graph: {
      const Box& b = graph_.box;
      std::vector<Vec2> active;
      if (std::abs(graph_.f(p.x) - p.y) <= kGeomTol) {
        const double s = graph_.df(p.x);
        active.push_back(normalized({s, -1.0}));
      }
      if (std::abs(p.x - b.xmin) <= kGeomTol) active.push_back({-1.0, 0.0});
      if (std::abs(p.x - b.xmax) <= kGeomTol) active.push_back({1.0, 0.0});
      if (std::abs(p.y - b.ymax) <= kGeomTol) active.push_back({0.0, 1.0});
      if (active.size() != 1) fail(ErrorKind::DegenerateNormal, "graph domain corner has no normal");
      return active.front();
    }
    case Kind::PerturbedDisk: {
      const double th = std::atan2(p.y, p.x);
      const double r = profile_(th), dr = profile_.derivative(th);
      const Vec2 tangent{dr * std::cos(th) - r * std::sin(th), dr * std::sin(th) + r * std::cos(th)};
      return normalized(Vec2{tangent.y, -tangent.x});
    }
  }
  fail(ErrorKind::Domain, "the plane has no boundary");
}

std::vector<double> Domain::ray_crossings(const Point& o, const Vec2& d, double rmax) const {
  std::vector<double> out;
  const double lo = 1e-14 * std::max(1.0, rmax);
  switch (kind_) {
    case Kind::Plane: return out;
    case Kind::Disk: {
      const double b = dot(o, d);
      const double c = dot(o, o) - radius_ * radius_;
      const double disc = b * b - c;
      if (disc <= 0.0) return out;
      const double sq = std::sqrt(disc);
      for (double t : {-b - sq, -b + sq})
        if (t > lo && t < rmax) out.push_back(t);
      return out;
    }
    case Kind::Square: {
      const std::array<std::pair<int, double>, 4> lines{{{0, 0.0}, {0, 1.0}, {1, 0.0}, {1, 1.0}}};
      for (const auto& [axis, value] : lines) {
        const double comp = axis == 0 ? d.x : d.y;
        if (comp == 0.0) continue;
        const double t = (value - (axis == 0 ? o.x : o.y)) / comp;
        if (!(t > lo && t < rmax)) continue;
        const double other = axis == 0 ? o.y + t * d.y : o.x + t * d.x;
        if (other >= -1e-15 && other <= 1.0 + 1e-15) out.push_back(t);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                out.end());
      return out;
    }
    case Kind::Graph:
    case Kind::PerturbedDisk: {
      constexpr int n = 64;
      double t0 = 0.0;
      double v0 = level(o);
      for (int i = 1; i <= n; ++i) {
        const double t1 = rmax * i / n;
        const double v1 = level(o + d * t1);
        if ((v0 < 0.0) != (v1 < 0.0)) {
          double a = t0, b = t1;
          const bool a_inside = v0 < 0.0;
          for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, rmax); ++it) {
            const double m = 0.5 * (a + b);
            if ((level(o + d * m) < 0.0) == a_inside) a = m; else b = m;
          }
          const double t = 0.5 * (a + b);
          if (t > lo && t < rmax) out.push_back(t);
        }
        t0 = t1;
        v0 = v1;
      }
      return out;
    }
  }
  return out;
}

Box Domain::bounding_box() const {
  const double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::Plane: return {-inf, inf, -inf, inf};
    case Kind::Square: return {0.0, 1.0, 0.0, 1.0};
    case Kind::Disk: return {-radius_, radius_, -radius_, radius_};
    case Kind::Graph: {
      Box b = graph_.box;
      double fmin = inf;
      for (int i = 0; i <= 2048; ++i) fmin = std::min(fmin, graph_.f(b.xmin + b.width() * i / 2048.0));
      b.ymin = std::max(b.ymin, fmin);
      return b;
    }
    case Kind::PerturbedDisk: {
      double rmax = 0.0;
      for (int i = 0; i < 4096; ++i) rmax = std::max(rmax, profile_(2.0 * kPi * i / 4096.0));
      rmax *= 1.0 + 1e-6;
      return {-rmax, rmax, -rmax, rmax};
    }
  }
  return {};
}

Point Domain::boundary_point(double param) const {
  switch (kind_) {
    case Kind::Plane: fail(ErrorKind::Domain, "the plane has no boundary");
    case Kind::Square: {
      double s = std::fmod(param, 4.0);
      if (s < 0.0) s += 4.0;
      if (s < 1.0) return {s, 0.0};
      if (s < 2.0) return {1.0, s - 1.0};
      if (s < 3.0) return {3.0 - s, 1.0};
      return {0.0, 4.0 - s};
    }
    case Kind::Disk: return {radius_ * std::cos(param), radius_ * std::sin(param)};
    case Kind::Graph: return {param, graph_.f(param)};
    case Kind::PerturbedDisk: {
      const double r = profile_(param);
      return {r * std::cos(param), r * std::sin(param)};
    }
  }
  return {};
}

std::vector<Point> Domain::boundary_net(double spacing) const {
  if (!(spacing > 0.0)) fail(ErrorKind::Input, "net spacing must be positive");
  std::vector<Point> net;
  switch (kind_) {
    case Kind::Plane: return net;
    case Kind::Square: {
      const int n = static_cast<int>(std::ceil(4.0 / spacing));
      for (int i = 0; i < n; ++i) net.push_back(boundary_point(4.0 * i / n));
      return net;
    }
    case Kind::Disk: {
      const int n = static_cast<int>(std::ceil(2.0 * kPi * radius_ / spacing));
      for (int i = 0; i < n; ++i) net.push_back(boundary_point(2.0 * kPi * i / n));
      return net;
    }
    case Kind::Graph:
    case Kind::PerturbedDisk: {
      const bool closed = kind_ == Kind::PerturbedDisk;
      const double a = closed ? 0.0 : graph_.box.xmin;
      const double b = closed ? 2.0 * kPi : graph_.box.xmax;
      constexpr int dense = 8192;
      std::vector<double> arc(dense + 1, 0.0);
      Point prev = boundary_point(a);
      for (int i = 1; i <= dense; ++i) {
        const Point cur = boundary_point(a + (b - a) * i / dense);
        arc[i] = arc[i - 1] + distance(prev, cur);
        prev = cur;
      }
      const double total = arc.back();
      const int n = static_cast<int>(std::ceil(total / spacing));
      const int count = closed ? n : n + 1;
      for (int j = 0; j < count; ++j) {
        const double target = total * j / n;
        const auto it = std::lower_bound(arc.begin(), arc.end(), target);
        std::size_t i = static_cast<std::size_t>(std::distance(arc.begin(), it));
        i = std::min<std::size_t>(std::max<std::size_t>(i, 1), dense);
        const double w = (target - arc[i - 1]) / std::max(arc[i] - arc[i - 1], 1e-300);
        const double u = a + (b - a) * (static_cast<double>(i - 1) + w) / dense;
        net.push_back(boundary_point(u));
      }
      return net;
    }
  }
  return net;
}

// ---------------------------------------------------------------------------
// Local constructions

Frame local_frame(const Domain& domain, const Point& x0) {
  if (domain.kind() == Domain::Kind::Plane || !domain.on_boundary(x0))
    fail(ErrorKind::Domain, "frame base point is not on the boundary");
  const Vec2 nu = domain.outward_normal(x0);
  return Frame(x0, -nu);
}

double boundary_height(const Domain& domain, const Frame& frame, double xprime, double half_height) {
  constexpr int n = 64;
  auto outside = [&](double y) { return domain.level(frame.to_world({xprime, y})) >= 0.0; };
  int crossings = 0;
  double a = 0.0, b = 0.0;
  double y0 = -half_height;
  bool o0 = outside(y0);
  if (!o0) fail(ErrorKind::NotAGraph, "window bottom is inside the domain");
  for (int i = 1; i <= n; ++i) {
    const double y1 = -half_height + 2.0 * half_height * i / n;
    const bool o1 = outside(y1);
    if (o0 != o1) {
      ++crossings;
      a = y0;
      b = y1;
    }
    y0 = y1;
    o0 = o1;
  }
  if (o0) fail(ErrorKind::NotAGraph, "window top is outside the domain");
  if (crossings != 1) fail(ErrorKind::NotAGraph, "boundary crosses a vertical line more than once");
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, half_height); ++it) {
    const double m = 0.5 * (a + b);
    if (outside(m)) a = m; else b = m;
  }
  return 0.5 * (a + b);
}

namespace {

double max_adjacent_slope(const std::vector<double>& xs, const std::vector<double>& fs) {
  double tau = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    tau = std::max(tau, std::abs(fs[i] - fs[i - 1]) / (xs[i] - xs[i - 1]));
  return tau;
}

double frame_slope(const Domain& domain, const Frame& frame, double r, int samples) {
  std::vector<double> xs(samples), fs(samples);
  for (int i = 0; i < samples; ++i) {
    xs[i] = -r + 2.0 * r * i / (samples - 1);
    fs[i] = boundary_height(domain, frame, xs[i], r);
  }
  return max_adjacent_slope(xs, fs);
}

}  // namespace

double lipschitz_estimate(const Domain& domain, const Point& x0, double r, FrameChoice choice, int samples) {
  if (!(r > 0.0) || samples < 3) fail(ErrorKind::Input, "lipschitz window must be positive with >= 3 samples");
  const bool native = domain.kind() == Domain::Kind::Graph && choice != FrameChoice::Normal;
  if (choice == FrameChoice::Native && domain.kind() != Domain::Kind::Graph)
    fail(ErrorKind::Input, "native frame requires a graph domain");
  if (native) {
    const GraphSpec& g = domain.graph_spec();
    const double a = std::max(g.box.xmin, x0.x - r), b = std::min(g.box.xmax, x0.x + r);
    std::vector<double> xs(samples), fs(samples);
    for (int i = 0; i < samples; ++i) {
      xs[i] = a + (b - a) * i / (samples - 1);
      fs[i] = g.f(xs[i]);
    }
    return max_adjacent_slope(xs, fs);
  }
  return frame_slope(domain, local_frame(domain, x0), r, samples);
}

StandardApproximation standard_approximation(const Domain& domain, const Point& x0, double tau, int face_samples) {
  if (!(tau >= 0.0 && tau < 1.0)) fail(ErrorKind::Precondition, "tau must lie in [0, 1)");
  const Frame frame = local_frame(domain, x0);
  const Point x1{0.0, -3.0 * tau};
  Cylinder S(x1, 1.0, 1.0);
  for (int i = 0; i < face_samples; ++i) {
    const double xp = -1.0 + 2.0 * i / (face_samples - 1);
    if (!(domain.level(frame.to_world({xp, S.top()})) < 0.0))
      fail(ErrorKind::Geometry, "upper face of the cylinder leaves the domain");
    if (domain.level(frame.to_world({xp, S.bottom()})) < -kGeomTol)
      fail(ErrorKind::Geometry, "lower face of the cylinder enters the domain");
  }
  return {frame, x1, frame.to_world(x1), S, tau};
}

std::vector<Cube> StandardConstructionResult::boundary_cubes() const {
  std::vector<Cube> out;
  for (const auto& c : cells) out.push_back(c.q);
  return out;
}

std::vector<Cube> StandardConstructionResult::inner_cubes() const {
  std::vector<Cube> out;
  for (const auto& c : cells) out.insert(out.end(), c.inner.begin(), c.inner.end());
  return out;
}

bool StandardConstructionResult::covers(const Point& p, double tol) const {
  for (const auto& c : cells) {
    if (c.q.contains(p, tol)) return true;
    for (const auto& in : c.inner)
      if (in.contains(p, tol)) return true;
  }
  return false;
}

StandardConstructionResult standard_construction(const Cube& Q, int k, const Domain& domain) {
  if (k < 3 || k > 20) fail(ErrorKind::Precondition, "subdivision order k must lie in [3, 20]");
  const double s = Q.side;
  if (std::abs(domain.level(Q.center)) > kGeomTol * std::max(1.0, s))
    fail(ErrorKind::Precondition, "cube must be centred on the boundary");
  const Frame frame = Q.frame();
  const double half = 0.5 * s;

  double tau_hat = 0.0;
  try {
    tau_hat = frame_slope(domain, frame, half, 1025);
  } catch (const Error& e) {
    fail(ErrorKind::Construction, std::string("boundary leaves the cube: ") + e.what());
  }
  if (tau_hat >= 1.0 / (16.0 * std::sqrt(2.0)))
    fail(ErrorKind::Precondition, "boundary Lipschitz constant too large for the standard construction");

  StandardConstructionResult out{frame, Q, k, tau_hat, {}};
  const int columns = 1 << k;
  const double sq = s / columns;
  for (int i = 0; i < columns; ++i) {
    const double c = -half + (i + 0.5) * sq;
    double F = 0.0;
    try {
      F = boundary_height(domain, frame, c, half);
    } catch (const Error& e) {
      fail(ErrorKind::Construction, std::string("boundary leaves the cube: ") + e.what());
    }
    if (std::abs(F) + 0.5 * sq > half + kGeomTol * s)
      fail(ErrorKind::Construction, "boundary cube leaves the vertical extent of Q");
    BoundaryCell cell{Cube(frame.to_world({c, F}), sq, Q.normal_axis),
                      Rect{{c, F + 0.375 * sq}, sq, 0.25 * sq},
                      {}};
    const double bottom = F + 0.5 * sq;
    const double height = half - bottom;
    const int count = height > 1e-12 * s ? static_cast<int>(std::ceil(height / sq - 1e-9)) : 0;
    for (int j = 0; j < count; ++j) {
      double yc = bottom + (j + 0.5) * sq;
      if (j == count - 1) yc = half - 0.5 * sq;
      cell.inner.emplace_back(frame.to_world({c, yc}), sq, Q.normal_axis);
    }
    out.cells.push_back(std::move(cell));
  }
  return out;
}

}  // namespace nodalab
