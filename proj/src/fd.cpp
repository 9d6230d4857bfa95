#include <algorithm>
#include <cmath>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "nodalab/errors.hpp"
#include "nodalab/pde.hpp"

namespace nodalab {

double GridFunction::interpolate(const Point& q) const {
  const double fx = (q.x - S.left()) / delta, fy = (q.y - S.bottom()) / delta;
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 1);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, ny - 1);
  const double tx = fx - i, ty = fy - j;
  return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) + (1 - tx) * ty * at(i, j + 1) +
         tx * ty * at(i + 1, j + 1);
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

namespace {

int divisions(double length, double delta) {
  const double q = length / delta;
  const int n = static_cast<int>(std::lround(q));
  if (n < 1 || std::abs(q - n) > 1e-9 * std::max(1.0, q))
    fail(ErrorKind::Input, "grid spacing must divide the cylinder sides");
  return n;
}

}  // namespace

GridFunction solve_mixed_harmonic(const Cylinder& S, const MixedTraces& tr, double delta) {
  if (!(delta > 0.0)) fail(ErrorKind::Input, "grid spacing must be positive");
  const double width = 2.0 * S.radius;
  if (delta > std::min(width, S.height) / 16.0 * (1.0 + 1e-12))
    fail(ErrorKind::Precondition, "grid spacing exceeds min side/16");
  const int nx = divisions(width, delta), ny = divisions(S.height, delta);
  if (tr.left.size() != static_cast<std::size_t>(ny + 1) || tr.right.size() != static_cast<std::size_t>(ny + 1) ||
      tr.top.size() != static_cast<std::size_t>(nx + 1) || tr.bottom.size() != static_cast<std::size_t>(nx + 1))
    fail(ErrorKind::Input, "trace lengths do not match the grid");

  const int cols = nx - 1;
  auto id = [cols](int i, int j) { return j * cols + (i - 1); };
  const int nunk = cols * (ny + 1);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nunk);
  for (int j = 0; j <= ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const int r = id(i, j);
      const bool face = j == 0 || j == ny;
      const double s = face ? 0.5 : 1.0;
      trip.emplace_back(r, r, 4.0 * s);
      for (int di : {-1, 1}) {
        const int ii = i + di;
        if (ii == 0) rhs[r] += s * tr.left[j];
        else if (ii == nx) rhs[r] += s * tr.right[j];
        else trip.emplace_back(r, id(ii, j), -s);
      }
      if (j == 0) {
        trip.emplace_back(r, id(i, 1), -1.0);
        rhs[r] += -delta * tr.bottom[i];
      } else if (j == ny) {
        trip.emplace_back(r, id(i, ny - 1), -1.0);
        rhs[r] += delta * tr.top[i];
      } else {
        trip.emplace_back(r, id(i, j - 1), -1.0);
        trip.emplace_back(r, id(i, j + 1), -1.0);
      }
    }
  SparseMatrix A(nunk, nunk);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<SparseMatrix> solver(A);
  if (solver.info() != Eigen::Success) fail(ErrorKind::Convergence, "mixed problem factorization failed");
  const Eigen::VectorXd u = solver.solve(rhs);
  if ((A * u - rhs).lpNorm<Eigen::Infinity>() > 1e-10 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()))
    fail(ErrorKind::Convergence, "mixed problem solve did not reach 1e-10");

  GridFunction g;
  g.S = S;
  g.delta = delta;
  g.nx = nx;
  g.ny = ny;
  g.values.assign(static_cast<std::size_t>(nx + 1) * (ny + 1), 0.0);
  for (int j = 0; j <= ny; ++j) {
    g.at(0, j) = tr.left[j];
    g.at(nx, j) = tr.right[j];
    for (int i = 1; i < nx; ++i) g.at(i, j) = u[id(i, j)];
  }
  return g;
}

GridFunction solve_mixed_harmonic(const Cylinder& S, const MixedData& data, double delta) {
  if (!(delta > 0.0)) fail(ErrorKind::Input, "grid spacing must be positive");
  const int nx = divisions(2.0 * S.radius, delta), ny = divisions(S.height, delta);
  MixedTraces tr;
  auto node = [&](int i, int j) { return Point{S.left() + i * delta, S.bottom() + j * delta}; };
  for (int j = 0; j <= ny; ++j) {
    tr.left.push_back(data.dirichlet_sigma ? data.dirichlet_sigma(node(0, j)) : 0.0);
    tr.right.push_back(data.dirichlet_sigma ? data.dirichlet_sigma(node(nx, j)) : 0.0);
  }
  for (int i = 0; i <= nx; ++i) {
    tr.top.push_back(data.neumann_top ? data.neumann_top(node(i, ny)) : 0.0);
    tr.bottom.push_back(data.neumann_bottom ? data.neumann_bottom(node(i, 0)) : 0.0);
  }
  return solve_mixed_harmonic(S, tr, delta);
}

double mixed_residual(const GridFunction& g, const MixedTraces& tr) {
  double worst = 0.0;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const double down = j == 0 ? g.at(i, 1) - 2.0 * g.delta * tr.bottom[i] : g.at(i, j - 1);
      const double up = j == g.ny ? g.at(i, g.ny - 1) + 2.0 * g.delta * tr.top[i] : g.at(i, j + 1);
      const double lap = g.at(i - 1, j) + g.at(i + 1, j) + down + up - 4.0 * g.at(i, j);
      worst = std::max(worst, std::abs(lap));
    }
  return worst;
}

// ---------------------------------------------------------------------------

DiskDirichletSolution::DiskDirichletSolution(double radius, double delta) : radius_(radius) {
  if (!(radius > 0.0) || !(delta > 0.0)) fail(ErrorKind::Input, "disk radius and spacing must be positive");
  n_ = std::max(4, static_cast<int>(std::lround(radius / delta)));
  delta_ = radius / n_;
  const int side = 2 * n_ + 1;
  unknown_.assign(static_cast<std::size_t>(side) * side, -1);
  int count = 0;
  for (int j = -n_; j <= n_; ++j)
    for (int i = -n_; i <= n_; ++i)
      if (i * i + j * j < n_ * n_) unknown_[idx(i, j)] = count++;
  u_.assign(static_cast<std::size_t>(side) * side, 0.0);

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
  const double nn = static_cast<double>(n_) * n_;
  for (int j = -n_; j <= n_; ++j)
    for (int i = -n_; i <= n_; ++i) {
      const int r = unknown_[idx(i, j)];
      if (r < 0) continue;
      double diag = 0.0;
      for (int axis = 0; axis < 2; ++axis) {
        double h[2], val[2];
        int nbr[2];
        for (int side_i = 0; side_i < 2; ++side_i) {
          const int dir = side_i == 0 ? -1 : 1;
          const int ii = axis == 0 ? i + dir : i, jj = axis == 0 ? j : j + dir;
          if (ii * ii + jj * jj < n_ * n_) {
            h[side_i] = 1.0;
            nbr[side_i] = unknown_[idx(ii, jj)];
            val[side_i] = 0.0;
          } else {
            const double along = axis == 0 ? i : j, across = axis == 0 ? j : i;
            h[side_i] = std::sqrt(nn - across * across) - dir * along;
            nbr[side_i] = -1;
            val[side_i] = axis == 0 ? (j > 0 ? 1.0 : (j < 0 ? -1.0 : 0.0)) : dir;
          }
        }
        const double cm = 2.0 / ((h[0] + h[1]) * h[0]), cp = 2.0 / ((h[0] + h[1]) * h[1]);
        diag -= cm + cp;
        for (int side_i = 0; side_i < 2; ++side_i) {
          const double c = side_i == 0 ? cm : cp;
          if (nbr[side_i] >= 0) trip.emplace_back(r, nbr[side_i], c);
          else rhs[r] -= c * val[side_i];
        }
      }
      trip.emplace_back(r, r, diag);
    }
  SparseMatrix A(count, count);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<SparseMatrix> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) fail(ErrorKind::Convergence, "disk Dirichlet factorization failed");
  const Eigen::VectorXd sol = lu.solve(rhs);
  for (int j = -n_; j <= n_; ++j)
    for (int i = -n_; i <= n_; ++i)
      u_[idx(i, j)] = unknown_[idx(i, j)] >= 0 ? sol[unknown_[idx(i, j)]] : (j > 0 ? 1.0 : (j < 0 ? -1.0 : 0.0));
}

double DiskDirichletSolution::boundary_value(const Point& p) const {
  return p.y > 0.0 ? 1.0 : (p.y < 0.0 ? -1.0 : 0.0);
}

double DiskDirichletSolution::node_value(int i, int j) const {
  if (std::abs(i) > n_ || std::abs(j) > n_) return j > 0 ? 1.0 : (j < 0 ? -1.0 : 0.0);
  return u_[idx(i, j)];
}

double DiskDirichletSolution::value(const Point& p) const {
  const double fx = p.x / delta_, fy = p.y / delta_;
  const int i = std::clamp(static_cast<int>(std::floor(fx)), -n_, n_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), -n_, n_ - 1);
  const double tx = fx - i, ty = fy - j;
  return (1 - tx) * (1 - ty) * node_value(i, j) + tx * (1 - ty) * node_value(i + 1, j) +
         (1 - tx) * ty * node_value(i, j + 1) + tx * ty * node_value(i + 1, j + 1);
}

double DiskDirichletSolution::stencil(int i, int j) const {
  const double nn = static_cast<double>(n_) * n_;
  double lap = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    double h[2], v[2];
    for (int s = 0; s < 2; ++s) {
      const int dir = s == 0 ? -1 : 1;
      const int ii = axis == 0 ? i + dir : i, jj = axis == 0 ? j : j + dir;
      if (ii * ii + jj * jj < n_ * n_) {
        h[s] = 1.0;
        v[s] = u_[idx(ii, jj)];
      } else {
        const double along = axis == 0 ? i : j, across = axis == 0 ? j : i;
        h[s] = std::sqrt(nn - across * across) - dir * along;
        v[s] = axis == 0 ? (j > 0 ? 1.0 : (j < 0 ? -1.0 : 0.0)) : dir;
      }
    }
    const double u0 = u_[idx(i, j)];
    lap += 2.0 / (h[0] + h[1]) * ((v[1] - u0) / h[1] - (u0 - v[0]) / h[0]);
  }
  return lap;
}

double DiskDirichletSolution::max_residual(double exclusion) const {
  double worst = 0.0;
  for (int j = -n_; j <= n_; ++j)
    for (int i = -n_; i <= n_; ++i) {
      if (unknown_[idx(i, j)] < 0) continue;
      const Point p{i * delta_, j * delta_};
      if (distance(p, {radius_, 0.0}) < exclusion || distance(p, {-radius_, 0.0}) < exclusion) continue;
      worst = std::max(worst, std::abs(stencil(i, j)));
    }
  return worst;
}

std::shared_ptr<DiskDirichletSolution> solve_dirichlet_disk(double radius, double delta) {
  return std::make_shared<DiskDirichletSolution>(radius, delta);
}

}  // namespace nodalab
