#include "nodalab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "nodalab/errors.hpp"
#include "nodalab/parallel.hpp"

namespace nodalab {

namespace {

struct Segment {
  Point a, b;
  long ka, kb;  // grid-edge keys of the endpoints, negative when clipped
};

Point boundary_cut(const Domain& d, Point in, Point out) {
  for (int it = 0; it < 60; ++it) {
    const Point mid = 0.5 * (in + out);
    if (d.level(mid) <= 0.0) in = mid;
    else out = mid;
  }
  return in;
}

}  // namespace

NodalCurveSet extract_nodal(const ScalarField& f, const Box& region, const Domain& domain, int m) {
  if (m < 32) fail(ErrorKind::Precondition, "extraction resolution must be at least 32");
  if (!(region.width() > 0.0) || !(region.height() > 0.0)) fail(ErrorKind::Input, "extraction region is empty");
  const double dx = region.width() / m, dy = region.height() / m;
  const int n = m + 1;
  auto node = [&](int i, int j) {
    return Point{i == m ? region.xmax : region.xmin + i * dx, j == m ? region.ymax : region.ymin + j * dy};
  };
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  parallel_for(n, [&](int j) {
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(j) * n + i] = f.value(node(i, j));
  });
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
    fail(ErrorKind::DegenerateField, "field vanishes on the whole sample grid");
  auto val = [&](int i, int j) { return v[static_cast<std::size_t>(j) * n + i]; };
  auto pos = [](double x) { return x >= 0.0; };

  // edge keys: horizontal (i,j)-(i+1,j) -> j*m + i; vertical (i,j)-(i,j+1) -> m*n + i*m + j
  auto hkey = [&](int i, int j) { return static_cast<long>(j) * m + i; };
  auto vkey = [&](int i, int j) { return static_cast<long>(m) * n + static_cast<long>(i) * m + j; };
  auto cross_pt = [&](int i0, int j0, int i1, int j1) {
    const double a = val(i0, j0), b = val(i1, j1);
    const double t = a / (a - b);
    const Point p = node(i0, j0), q = node(i1, j1);
    return p + (q - p) * t;
  };

  std::vector<std::vector<Segment>> rows(m);
  parallel_for(m, [&](int j) {
    for (int i = 0; i < m; ++i) {
      const bool s0 = pos(val(i, j)), s1 = pos(val(i + 1, j)), s2 = pos(val(i + 1, j + 1)),
                 s3 = pos(val(i, j + 1));
      // edges: 0 bottom, 1 right, 2 top, 3 left
      struct E {
        bool on;
        Point p;
        long key;
      } e[4];
      e[0] = {s0 != s1, {}, hkey(i, j)};
      e[1] = {s1 != s2, {}, vkey(i + 1, j)};
      e[2] = {s3 != s2, {}, hkey(i, j + 1)};
      e[3] = {s0 != s3, {}, vkey(i, j)};
      if (e[0].on) e[0].p = cross_pt(i, j, i + 1, j);
      if (e[1].on) e[1].p = cross_pt(i + 1, j, i + 1, j + 1);
      if (e[2].on) e[2].p = cross_pt(i, j + 1, i + 1, j + 1);
      if (e[3].on) e[3].p = cross_pt(i, j, i, j + 1);
      const int count = e[0].on + e[1].on + e[2].on + e[3].on;
      auto add = [&](int a, int b) { rows[j].push_back({e[a].p, e[b].p, e[a].key, e[b].key}); };
      if (count == 2) {
        int a = -1, b = -1;
        for (int k = 0; k < 4; ++k)
          if (e[k].on) (a < 0 ? a : b) = k;
        add(a, b);
      } else if (count == 4) {
        const Point c = node(i, j) + Vec2{0.5 * dx, 0.5 * dy};
        if (pos(f.value(c)) == s0) {
          add(0, 1);
          add(2, 3);
        } else {
          add(0, 3);
          add(1, 2);
        }
      }
    }
  });

  // clip to the closed domain
  std::vector<Segment> segs;
  long fresh = -1;
  for (auto& row : rows)
    for (Segment s : row) {
      const bool ia = domain.level(s.a) <= 0.0, ib = domain.level(s.b) <= 0.0;
      if (!ia && !ib) continue;
      if (!ia) {
        s.a = boundary_cut(domain, s.b, s.a);
        s.ka = fresh--;
      } else if (!ib) {
        s.b = boundary_cut(domain, s.a, s.b);
        s.kb = fresh--;
      }
      segs.push_back(s);
    }

  // chain segments sharing grid-edge points into polylines
  std::map<long, std::vector<int>> at;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    at[segs[s].ka].push_back(s);
    at[segs[s].kb].push_back(s);
  }
  std::vector<char> used(segs.size(), 0);
  NodalCurveSet out;
  out.resolution = m;
  out.region = region;
  auto other = [&](long key, int s) {
    for (int t : at[key])
      if (t != s && !used[t]) return t;
    return -1;
  };
  auto walk = [&](int s, long start_key) {
    std::vector<Point> line;
    long key = start_key;
    Point p = segs[s].ka == key ? segs[s].a : segs[s].b;
    line.push_back(p);
    while (s >= 0) {
      used[s] = 1;
      const bool forward = segs[s].ka == key;
      const Point q = forward ? segs[s].b : segs[s].a;
      key = forward ? segs[s].kb : segs[s].ka;
      out.segment_lengths.push_back(distance(line.back(), q));
      line.push_back(q);
      s = other(key, s);
    }
    out.polylines.push_back(std::move(line));
  };
  // open chains first, starting from an endpoint of degree one
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    if (used[s]) continue;
    if (at[segs[s].ka].size() == 1) walk(s, segs[s].ka);
    else if (at[segs[s].kb].size() == 1) walk(s, segs[s].kb);
  }
  for (int s = 0; s < static_cast<int>(segs.size()); ++s)
    if (!used[s]) walk(s, segs[s].ka);
  for (double l : out.segment_lengths) out.total_length += l;
  return out;
}

namespace {

struct P3 {
  double x, y, t;
};

P3 lerp3(const P3& a, const P3& b, double va, double vb) {
  const double s = va / (va - vb);
  return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y), a.t + s * (b.t - a.t)};
}

double tri_area(const P3& a, const P3& b, const P3& c, const Domain& d) {
  if (d.level({(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0}) > 0.0) return 0.0;
  const double ux = b.x - a.x, uy = b.y - a.y, ut = b.t - a.t;
  const double vx = c.x - a.x, vy = c.y - a.y, vt = c.t - a.t;
  const double cx = uy * vt - ut * vy, cy = ut * vx - ux * vt, ct = ux * vy - uy * vx;
  return 0.5 * std::sqrt(cx * cx + cy * cy + ct * ct);
}

// zero set of the linear interpolant on one tetrahedron
double tet_area(const P3* p, const double* v, const Domain& d) {
  int pos[4], neg[4], np = 0, nn = 0;
  for (int i = 0; i < 4; ++i) {
    if (v[i] > 0.0) pos[np++] = i;
    else neg[nn++] = i;
  }
  if (np == 0 || nn == 0) return 0.0;
  auto cut = [&](int a, int b) { return lerp3(p[a], p[b], v[a], v[b]); };
  if (np == 1 || nn == 1) {
    const int lone = np == 1 ? pos[0] : neg[0];
    const int* rest = np == 1 ? neg : pos;
    return tri_area(cut(lone, rest[0]), cut(lone, rest[1]), cut(lone, rest[2]), d);
  }
  const P3 a = cut(pos[0], neg[0]), b = cut(pos[0], neg[1]), c = cut(pos[1], neg[1]), e = cut(pos[1], neg[0]);
  return tri_area(a, b, c, d) + tri_area(a, c, e, d);
}

}  // namespace

double extended_nodal_area(const ExtendedField& h, const Box& region, const Domain& domain, int m, int t_cells) {
  if (m < 32) fail(ErrorKind::Precondition, "extraction resolution must be at least 32");
  if (t_cells < 2) fail(ErrorKind::Input, "need at least two cells in t");
  if (!(region.width() > 0.0) || !(region.height() > 0.0)) fail(ErrorKind::Input, "extraction region is empty");
  const int n = m + 1, nt = t_cells + 1;
  const double dx = region.width() / m, dy = region.height() / m, dt = 2.0 / t_cells;
  auto at = [&](int i, int j, int k) {
    return P3{i == m ? region.xmax : region.xmin + i * dx, j == m ? region.ymax : region.ymin + j * dy, -1.0 + k * dt};
  };
  std::vector<double> v(static_cast<std::size_t>(n) * n * nt);
  auto idx = [n](int i, int j, int k) { return (static_cast<std::size_t>(k) * n + j) * n + i; };
  parallel_for(nt, [&](int k) {
    double top = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const P3 q = at(i, j, k);
        const double val = h.value({q.x, q.y}, q.t);
        v[idx(i, j, k)] = val;
        top = std::max(top, std::abs(val));
      }
    // roundoff-level values sit on the nodal set
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (std::abs(v[idx(i, j, k)]) <= 1e-13 * top) v[idx(i, j, k)] = 0.0;
  });
  // Kuhn split of the cube along the 0-7 diagonal; corner c has bits (x, y, t)
  static const int kTets[6][4] = {{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7}, {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};
  std::vector<double> rows(static_cast<std::size_t>(t_cells) * m, 0.0);
  parallel_for(t_cells * m, [&](int row) {
    const int k = row / m, j = row % m;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      P3 p[8];
      double c[8];
      for (int b = 0; b < 8; ++b) {
        const int ii = i + (b & 1), jj = j + ((b >> 1) & 1), kk = k + ((b >> 2) & 1);
        p[b] = at(ii, jj, kk);
        c[b] = v[idx(ii, jj, kk)];
      }
      bool any_pos = false, any_neg = false;
      for (double x : c) (x > 0.0 ? any_pos : any_neg) = true;
      if (!any_pos || !any_neg) continue;
      for (const auto& t : kTets) {
        const P3 q[4] = {p[t[0]], p[t[1]], p[t[2]], p[t[3]]};
        const double w[4] = {c[t[0]], c[t[1]], c[t[2]], c[t[3]]};
        sum += tet_area(q, w, domain);
      }
    }
    rows[row] = sum;
  });
  double area = 0.0;
  for (double r : rows) area += r;
  return area;
}

BoundTable verify_main_bound(const Domain& domain, const std::vector<EigenField>& modes, int resolution) {
  BoundTable table;
  const Box region = domain.bounding_box();
  for (const auto& u : modes) {
    const double lambda = u->eigenvalue();
    if (!(lambda > 1e-12)) continue;
    const NodalCurveSet z = extract_nodal(*u, region, domain, resolution);
    table.rows.push_back({u->name(), lambda, z.total_length, z.total_length / std::sqrt(lambda)});
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const BoundRow& a, const BoundRow& b) { return a.lambda < b.lambda; });
  for (const auto& r : table.rows)
    if (r.ratio > table.max_ratio) {
      table.max_ratio = r.ratio;
      table.argmax = r.name;
    }
  return table;
}

ZeroFreeReport cube_zero_free(const ScalarField& f, const Cube& q, const Domain& domain, int lattice) {
  if (lattice < 2) fail(ErrorKind::Input, "zero-free lattice needs at least 2 points per side");
  const Frame fr = q.frame();
  ZeroFreeReport r;
  bool pos = false, neg = false;
  r.min_abs = std::numeric_limits<double>::infinity();
  for (int j = 0; j < lattice; ++j)
    for (int i = 0; i < lattice; ++i) {
      const Point p = fr.to_world({q.side * (static_cast<double>(i) / (lattice - 1) - 0.5),
                                   q.side * (static_cast<double>(j) / (lattice - 1) - 0.5)});
      if (domain.level(p) > 0.0) continue;
      ++r.samples;
      const double v = f.value(p);
      if (v > 0.0) pos = true;
      else if (v < 0.0) neg = true;
      else pos = neg = true;
      r.min_abs = std::min(r.min_abs, std::abs(v));
      r.lipschitz = std::max(r.lipschitz, norm(gradient(f, p)));
    }
  if (r.samples == 0) {
    r.min_abs = 0.0;
    return r;
  }
  const double diag = q.side / (lattice - 1) * std::sqrt(2.0);
  r.margin = r.min_abs - r.lipschitz * diag;
  if (pos != neg) {
    r.sign = pos ? 1 : -1;
    r.zero_free = r.margin > 0.0;
  }
  return r;
}

std::string to_string(GoodStatus s) {
  switch (s) {
    case GoodStatus::Halved: return "halved";
    case GoodStatus::ZeroFree: return "zero_free";
    case GoodStatus::NoneFound: return "none_found";
  }
  return "?";
}

GoodCubeResult find_good_cube(const Subject& h, const Cube& Q, int k, double N0, const GoodCubeOptions& opt) {
  const StandardConstructionResult sc = standard_construction(Q, k, h.domain());
  GoodCubeResult res;
  if (opt.check_zero_free) {
    for (std::size_t i = 0; i < sc.cells.size(); ++i) {
      const ZeroFreeReport z = cube_zero_free(*h.base(), sc.cells[i].q, h.domain());
      if (z.zero_free) {
        res.status = GoodStatus::ZeroFree;
        res.index = static_cast<int>(i);
        res.q = sc.cells[i].q;
        res.zero_free = z;
        return res;
      }
    }
  }
  double nq_max = -1e300;
  for (std::size_t i = 0; i < sc.cells.size(); ++i) {
    const double N = max_doubling_index(h, sc.cells[i].q, opt.grid, 0.0, {}, opt.mass).N_star;
    res.table.push_back({static_cast<int>(i), sc.cells[i].q, N});
    nq_max = std::max(nq_max, N);
  }
  // Q's sample set contains every q's, so N*(q) <= N*(Q) holds exactly
  res.N_star_Q = std::max(max_doubling_index(h, Q, opt.grid, 0.0, {}, opt.mass).N_star, nq_max);
  res.N_star_star_Q = std::max(res.N_star_Q, 0.5 * N0);
  const auto best = std::min_element(res.table.begin(), res.table.end(),
                                     [](const CubeIndexRow& a, const CubeIndexRow& b) { return a.N_star < b.N_star; });
  res.index = best->index;
  res.q = best->q;
  res.N_star_q = best->N_star;
  res.status = best->N_star <= 0.5 * res.N_star_star_Q ? GoodStatus::Halved : GoodStatus::NoneFound;
  return res;
}

ZeroFreeSpot zero_free_spot(const ScalarField& g, const HalfBall& B, double floor, int gamma_samples) {
  if (gamma_samples < 2) fail(ErrorKind::Input, "need at least two samples on the flat face");
  const double R = B.radius;
  auto at = [&](double u, double v) { return std::abs(g.value(B.frame.to_world({u, v}))); };
  // sampled sup on (1/4)B₊
  double sup = 0.0;
  {
    const int n = 64;
    const double sp = 0.25 * R / n;
    for (int j = 0; j <= n; ++j)
      for (int i = -n; i <= n; ++i)
        if ((i * i + j * j) * sp * sp <= 0.0625 * R * R) sup = std::max(sup, at(i * sp, j * sp));
  }
  if (!(sup >= floor)) fail(ErrorKind::DegenerateField, "field vanishes on (1/4)B+");
  ZeroFreeSpot spot;
  spot.normalization = sup;
  double best = -1.0, bu = 0.0;
  for (int i = 0; i < gamma_samples; ++i) {
    const double u = R / 16.0 * (2.0 * i / (gamma_samples - 1) - 1.0);
    const double v = at(u, 0.0) / sup;
    if (v > best) {
      best = v;
      bu = u;
    }
  }
  if (!(best >= floor)) fail(ErrorKind::DegenerateField, "field vanishes on the flat face near the centre");
  spot.x_star = B.frame.to_world({bu, 0.0});
  spot.value_at_x = best;
  constexpr int J = 12;
  for (int jr = 0; jr <= J; ++jr) {
    const double rho = R / 16.0 * std::ldexp(1.0, -jr);
    const int n = 16;
    const double sp = rho / n;
    double mn = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= n; ++j)
      for (int i = -n; i <= n; ++i) {
        const double u = bu + i * sp, v = j * sp;
        if ((i * i + j * j) * sp * sp > rho * rho || u * u + v * v > R * R) continue;
        mn = std::min(mn, at(u, v) / sup);
      }
    spot.rho = rho;
    spot.c0 = mn;
    if (mn >= 0.5 * best) break;
  }
  return spot;
}

void write_svg(std::ostream& os, const NodalCurveSet& curves, const Domain& domain) {
  Box b = curves.region;
  if (domain.kind() != Domain::Kind::Plane && domain.kind() != Domain::Kind::Graph) b = domain.bounding_box();
  const double pad = 0.02 * std::max(b.width(), b.height());
  const double W = b.width() + 2 * pad, H = b.height() + 2 * pad;
  const double stroke = 0.003 * std::max(W, H);
  auto X = [&](double x) { return x - b.xmin + pad; };
  auto Y = [&](double y) { return b.ymax - y + pad; };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << ' ' << H << "\" width=\"600\" height=\""
     << 600.0 * H / W << "\">\n";
  os << "<g fill=\"none\" stroke=\"#888\" stroke-width=\"" << stroke << "\">\n";
  switch (domain.kind()) {
    case Domain::Kind::Disk:
      os << "<circle cx=\"" << X(0.0) << "\" cy=\"" << Y(0.0) << "\" r=\"" << domain.radius() << "\"/>\n";
      break;
    case Domain::Kind::Square:
      os << "<rect x=\"" << X(0.0) << "\" y=\"" << Y(1.0) << "\" width=\"1\" height=\"1\"/>\n";
      break;
    case Domain::Kind::Graph:
    case Domain::Kind::PerturbedDisk: {
      os << "<polyline points=\"";
      const auto net = domain.boundary_net(0.005 * std::max(W, H));
      for (const Point& p : net) os << X(p.x) << ',' << Y(p.y) << ' ';
      if (domain.kind() == Domain::Kind::PerturbedDisk && !net.empty()) os << X(net[0].x) << ',' << Y(net[0].y);
      os << "\"/>\n";
      break;
    }
    case Domain::Kind::Plane: break;
  }
  os << "</g>\n<g fill=\"none\" stroke=\"#c22\" stroke-width=\"" << stroke << "\">\n";
  for (const auto& line : curves.polylines) {
    os << "<polyline points=\"";
    for (const Point& p : line) os << X(p.x) << ',' << Y(p.y) << ' ';
    os << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
}

}  // namespace nodalab
