#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "nodalab/errors.hpp"
#include "nodalab/pde.hpp"

namespace nodalab {

double TriMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const Point &a = vertices[tri[0]], &b = vertices[tri[1]], &c = vertices[tri[2]];
  return 0.5 * cross(b - a, c - a);
}

double TriMesh::area() const {
  double s = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) s += triangle_area(static_cast<int>(t));
  return s;
}

double TriMesh::min_angle_deg() const {
  double best = 180.0;
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) {
      const Point& p = vertices[tri[k]];
      const Vec2 u = vertices[tri[(k + 1) % 3]] - p, v = vertices[tri[(k + 2) % 3]] - p;
      const double ang = std::atan2(std::abs(cross(u, v)), dot(u, v)) * 180.0 / kPi;
      best = std::min(best, ang);
    }
  }
  return best;
}

double TriMesh::max_diameter() const {
  double d = 0.0;
  for (const auto& tri : triangles)
    for (int k = 0; k < 3; ++k) d = std::max(d, distance(vertices[tri[k]], vertices[tri[(k + 1) % 3]]));
  return d;
}

void TriMesh::validate() const {
  std::map<std::pair<int, int>, int> edges;
  const int nv = static_cast<int>(vertices.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int v : triangles[t])
      if (v < 0 || v >= nv) fail(ErrorKind::Geometry, "triangle references a missing vertex");
    if (!(triangle_area(static_cast<int>(t)) > 0.0))
      fail(ErrorKind::Geometry, "triangle " + std::to_string(t) + " has non-positive area");
    for (int k = 0; k < 3; ++k) {
      const int a = triangles[t][k], b = triangles[t][(k + 1) % 3];
      ++edges[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::map<std::pair<int, int>, int> marked;
  std::vector<int> degree(vertices.size(), 0);
  for (const auto& e : boundary_edges) {
    ++marked[{std::min(e.a, e.b), std::max(e.a, e.b)}];
    ++degree[e.a];
    ++degree[e.b];
  }
  for (const auto& [e, count] : edges) {
    if (count > 2) fail(ErrorKind::Geometry, "edge shared by more than two triangles");
    const bool is_boundary = marked.count(e) > 0;
    if ((count == 1) != is_boundary) fail(ErrorKind::Geometry, "boundary edge markers do not match the mesh");
  }
  for (const auto& [e, count] : marked)
    if (count != 1 || !edges.count(e)) fail(ErrorKind::Geometry, "boundary edge listed twice or not in the mesh");
  for (int d : degree)
    if (d != 0 && d != 2) fail(ErrorKind::Geometry, "boundary edges do not form closed loops");
}

void TriMesh::write(std::ostream& os) const {
  char buf[128];
  os << vertices.size() << ' ' << triangles.size() << ' ' << boundary_edges.size() << '\n';
  for (const auto& p : vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    os << buf;
  }
  for (const auto& t : triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : boundary_edges) os << e.a << ' ' << e.b << ' ' << e.marker << '\n';
}

TriMesh TriMesh::read(std::istream& is) {
  TriMesh m;
  std::size_t nv = 0, nt = 0, ne = 0;
  if (!(is >> nv >> nt >> ne)) fail(ErrorKind::Input, "mesh header must be 'nv nt ne'");
  m.vertices.resize(nv);
  m.triangles.resize(nt);
  m.boundary_edges.resize(ne);
  for (auto& p : m.vertices)
    if (!(is >> p.x >> p.y)) fail(ErrorKind::Input, "truncated vertex list");
  for (auto& t : m.triangles)
    if (!(is >> t[0] >> t[1] >> t[2])) fail(ErrorKind::Input, "truncated triangle list");
  for (auto& e : m.boundary_edges)
    if (!(is >> e.a >> e.b >> e.marker)) fail(ErrorKind::Input, "truncated boundary edge list");
  return m;
}

namespace {

TriMesh mesh_square(double h) {
  const int n = std::max(1, static_cast<int>(std::ceil(1.0 / h - 1e-9)));
  TriMesh m;
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  for (int i = 0; i < n; ++i) m.boundary_edges.push_back({id(i, 0), id(i + 1, 0), 0});
  for (int j = 0; j < n; ++j) m.boundary_edges.push_back({id(n, j), id(n, j + 1), 1});
  for (int i = n; i > 0; --i) m.boundary_edges.push_back({id(i, n), id(i - 1, n), 2});
  for (int j = n; j > 0; --j) m.boundary_edges.push_back({id(0, j), id(0, j - 1), 3});
  return m;
}

TriMesh mesh_graph(const GraphSpec& g, double h) {
  const Box& b = g.box;
  const int nx = std::max(2, static_cast<int>(std::ceil(b.width() / (0.9 * h))));
  std::vector<double> xs(nx + 1), fs(nx + 1);
  double tallest = 0.0;
  for (int i = 0; i <= nx; ++i) {
    xs[i] = b.xmin + b.width() * i / nx;
    fs[i] = g.f(xs[i]);
    if (!(fs[i] > b.ymin) || !(fs[i] < b.ymax)) fail(ErrorKind::Geometry, "graph leaves the bounding box");
    tallest = std::max(tallest, b.ymax - fs[i]);
  }
  const int ny = std::max(2, static_cast<int>(std::ceil(tallest / (0.9 * h))));
  TriMesh m;
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const double y = j == ny ? b.ymax : fs[i] + (b.ymax - fs[i]) * j / ny;
      m.vertices.push_back({xs[i], y});
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), c = id(i + 1, j), d = id(i + 1, j + 1), e = id(i, j + 1);
      if (distance(m.vertices[a], m.vertices[d]) <= distance(m.vertices[c], m.vertices[e])) {
        m.triangles.push_back({a, c, d});
        m.triangles.push_back({a, d, e});
      } else {
        m.triangles.push_back({a, c, e});
        m.triangles.push_back({c, d, e});
      }
    }
  for (int i = 0; i < nx; ++i) m.boundary_edges.push_back({id(i, 0), id(i + 1, 0), 0});
  for (int j = 0; j < ny; ++j) m.boundary_edges.push_back({id(nx, j), id(nx, j + 1), 1});
  for (int i = nx; i > 0; --i) m.boundary_edges.push_back({id(i, ny), id(i - 1, ny), 2});
  for (int j = ny; j > 0; --j) m.boundary_edges.push_back({id(0, j), id(0, j - 1), 3});
  return m;
}

struct Ring {
  std::vector<int> ids;
  std::vector<double> angles;
};

void zip(const Ring& A, const Ring& B, std::vector<std::array<int, 3>>& tris) {
  const int na = static_cast<int>(A.ids.size()), nb = static_cast<int>(B.ids.size());
  auto wrap = [](double a) {
    while (a > kPi) a -= 2.0 * kPi;
    while (a < -kPi) a += 2.0 * kPi;
    return a;
  };
  int j0 = 0;
  for (int j = 1; j < nb; ++j)
    if (std::abs(wrap(B.angles[j] - A.angles[0])) < std::abs(wrap(B.angles[j0] - A.angles[0]))) j0 = j;
  std::vector<double> a(na + 1), b(nb + 1);
  a[0] = A.angles[0];
  for (int i = 1; i <= na; ++i) {
    double d = A.angles[i % na] - A.angles[(i - 1) % na];
    if (d <= 0.0) d += 2.0 * kPi;
    a[i] = a[i - 1] + d;
  }
  b[0] = a[0] + wrap(B.angles[j0] - a[0]);
  for (int t = 1; t <= nb; ++t) {
    double d = B.angles[(j0 + t) % nb] - B.angles[(j0 + t - 1) % nb];
    if (d <= 0.0) d += 2.0 * kPi;
    b[t] = b[t - 1] + d;
  }
  int i = 0, t = 0;
  while (i < na || t < nb) {
    const bool advance_a = t == nb || (i < na && a[i + 1] <= b[t + 1]);
    const int ai = A.ids[i % na], bt = B.ids[(j0 + t) % nb];
    if (advance_a) {
      tris.push_back({ai, A.ids[(i + 1) % na], bt});
      ++i;
    } else {
      tris.push_back({ai, B.ids[(j0 + t + 1) % nb], bt});
      ++t;
    }
  }
}

TriMesh mesh_star(const std::function<double(double)>& rho, double h) {
  constexpr int probe = 4096;
  double mean = 0.0, rmax = 0.0;
  for (int i = 0; i < probe; ++i) {
    const double r = rho(2.0 * kPi * i / probe);
    mean += r / probe;
    rmax = std::max(rmax, r);
  }
  TriMesh m;
  auto point = [&](double s, double th) {
    const double r = s * rho(th);
    return Point{r * std::cos(th), r * std::sin(th)};
  };
  // angular spacing stretches by |c'(theta)| / mean on the boundary and proportionally inside
  double speed = 0.0;
  for (int i = 0; i < probe; ++i)
    speed = std::max(speed, distance(point(1.0, 2.0 * kPi * i / probe), point(1.0, 2.0 * kPi * (i + 1) / probe)));
  speed *= probe / (2.0 * kPi);
  h *= mean / speed;
  const double sag = 5e-5 * 2.0 * rmax;
  const double chord = std::min(h, std::sqrt(8.0 * mean * sag));
  const int nboundary = std::max(12, static_cast<int>(std::ceil(2.0 * kPi * mean / chord)));
  for (int j = 0; j < nboundary; ++j) {
    const Point p0 = point(1.0, 2.0 * kPi * (j - 1) / nboundary);
    const Point p1 = point(1.0, 2.0 * kPi * j / nboundary);
    const Point p2 = point(1.0, 2.0 * kPi * (j + 1) / nboundary);
    const Vec2 u = p1 - p0, v = p2 - p1;
    if (std::atan2(std::abs(cross(u, v)), dot(u, v)) > kPi / 6.0)
      fail(ErrorKind::RefinementNeeded, "boundary turns more than 30 degrees per segment; refine target_h");
  }

  // radii (as fractions of the mean radius) and spacings of the rings
  std::vector<std::pair<double, double>> rings{{mean, chord}};
  double r = mean, sp = chord;
  for (;;) {
    const double next = std::min(h, 1.3 * sp);
    const int steps = static_cast<int>(std::lround(r / (0.866 * next)));
    if (steps <= 1) break;
    if (steps <= 3 || next >= h) {
      const double g = r / steps;
      for (int k = 1; k < steps; ++k) rings.push_back({r - k * g, next});
      break;
    }
    r -= 0.866 * next;
    sp = next;
    rings.push_back({r, sp});
  }

  std::vector<Ring> built;
  for (std::size_t k = 0; k < rings.size(); ++k) {
    const auto [rk, spk] = rings[k];
    const int n = k == 0 ? nboundary : std::max(6, static_cast<int>(std::ceil(2.0 * kPi * rk / spk)));
    const double offset = (k % 2) ? 0.5 : 0.0;
    Ring ring;
    for (int j = 0; j < n; ++j) {
      double th = 2.0 * kPi * (j + offset) / n;
      ring.ids.push_back(static_cast<int>(m.vertices.size()));
      ring.angles.push_back(th);
      m.vertices.push_back(point(rk / mean, th));
    }
    built.push_back(std::move(ring));
  }
  const int center = static_cast<int>(m.vertices.size());
  m.vertices.push_back({0.0, 0.0});
  for (std::size_t k = 0; k + 1 < built.size(); ++k) zip(built[k], built[k + 1], m.triangles);
  const Ring& inner = built.back();
  const int ni = static_cast<int>(inner.ids.size());
  for (int j = 0; j < ni; ++j) m.triangles.push_back({center, inner.ids[j], inner.ids[(j + 1) % ni]});
  for (auto& t : m.triangles) {
    const double a = 0.5 * cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]);
    if (a < 0.0) std::swap(t[1], t[2]);
  }
  const Ring& outer = built.front();
  for (int j = 0; j < nboundary; ++j)
    m.boundary_edges.push_back({outer.ids[j], outer.ids[(j + 1) % nboundary], 0});
  return m;
}

double domain_diameter(const Domain& d) {
  const Box b = d.bounding_box();
  return std::hypot(b.width(), b.height());
}

}  // namespace

TriMesh mesh_domain(const Domain& domain, double target_h) {
  if (!(target_h > 0.0)) fail(ErrorKind::Input, "target_h must be positive");
  if (domain.kind() == Domain::Kind::Plane) fail(ErrorKind::Input, "cannot mesh the whole plane");
  double diam = domain_diameter(domain);
  if (domain.kind() == Domain::Kind::Disk) diam = 2.0 * domain.radius();
  if (domain.kind() == Domain::Kind::PerturbedDisk) diam = domain.bounding_box().width();
  if (target_h > diam / 4.0 * (1.0 + 1e-12)) fail(ErrorKind::Precondition, "target_h exceeds diameter/4");
  TriMesh m;
  switch (domain.kind()) {
    case Domain::Kind::Square: m = mesh_square(target_h); break;
    case Domain::Kind::Graph: m = mesh_graph(domain.graph_spec(), target_h); break;
    case Domain::Kind::Disk: {
      const double R = domain.radius();
      m = mesh_star([R](double) { return R; }, target_h);
      break;
    }
    case Domain::Kind::PerturbedDisk: {
      const RadialProfile prof = domain.profile();
      m = mesh_star([prof](double th) { return prof(th); }, target_h);
      break;
    }
    case Domain::Kind::Plane: break;
  }
  m.validate();
  return m;
}

}  // namespace nodalab
