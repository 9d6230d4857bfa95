#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "nodalab/errors.hpp"
#include "nodalab/pde.hpp"

namespace nodalab {

namespace {

std::array<Vec2, 3> basis_gradients(const Point& a, const Point& b, const Point& c, double area) {
  const double s = 1.0 / (2.0 * area);
  return {Vec2{(b.y - c.y) * s, (c.x - b.x) * s}, Vec2{(c.y - a.y) * s, (a.x - c.x) * s},
          Vec2{(a.y - b.y) * s, (b.x - a.x) * s}};
}

}  // namespace

Assembly assemble_p1(const TriMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(mesh.triangles.size() * 9);
  mt.reserve(mesh.triangles.size() * 9);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.triangle_area(static_cast<int>(t));
    const auto g = basis_gradients(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]], area);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        kt.emplace_back(tri[i], tri[j], area * dot(g[i], g[j]));
        mt.emplace_back(tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0));
      }
  }
  Assembly a;
  a.K.resize(n, n);
  a.M.resize(n, n);
  a.K.setFromTriplets(kt.begin(), kt.end());
  a.M.setFromTriplets(mt.begin(), mt.end());
  return a;
}

namespace {

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best]) * (1.0 + 1e-12)) best = i;
  if (v[best] < 0.0) v = -v;
}

EigenPair finish(const Assembly& a, double lambda, Eigen::VectorXd v) {
  fix_sign(v);
  const double nrm = std::sqrt(v.dot(a.M * v));
  v /= nrm;
  EigenPair p;
  p.lambda = lambda;
  const Eigen::VectorXd mu = a.M * v;
  p.residual = (a.K * v - lambda * mu).norm() / mu.norm();
  p.sup_norm = v.cwiseAbs().maxCoeff();
  p.coeffs = std::move(v);
  return p;
}

}  // namespace

std::vector<EigenPair> neumann_eigenpairs(const TriMesh& mesh, int count, const EigenOptions& opt) {
  if (count < 1) fail(ErrorKind::Input, "eigenpair count must be >= 1");
  const int n = static_cast<int>(mesh.vertices.size());
  if (count > n) fail(ErrorKind::Input, "more eigenpairs requested than mesh vertices");
  const Assembly a = assemble_p1(mesh);
  std::vector<EigenPair> out;

  if (n < opt.dense_threshold) {
    const Eigen::MatrixXd K(a.K), M(a.M);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
    if (es.info() != Eigen::Success) fail(ErrorKind::Convergence, "dense generalized eigensolver failed");
    for (int i = 0; i < count; ++i) out.push_back(finish(a, es.eigenvalues()[i], es.eigenvectors().col(i)));
    return out;
  }

  // shift-invert block subspace iteration around sigma = -1
  const SparseMatrix A = a.K + a.M;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(A);
  if (ldlt.info() != Eigen::Success) fail(ErrorKind::Convergence, "factorization of K + M failed");
  const int p = std::min(n, 2 * count + 10);
  std::mt19937_64 rng(opt.seed);
  Eigen::MatrixXd X(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;

  double worst = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::MatrixXd Y = ldlt.solve(a.M * X);
    const Eigen::MatrixXd Kr = Y.transpose() * (a.K * Y);
    const Eigen::MatrixXd Mr = Y.transpose() * (a.M * Y);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Kr + Kr.transpose()),
                                                                 0.5 * (Mr + Mr.transpose()));
    if (es.info() != Eigen::Success) fail(ErrorKind::Convergence, "Rayleigh-Ritz step failed");
    X = Y * es.eigenvectors();
    worst = 0.0;
    const Eigen::MatrixXd KX = a.K * X.leftCols(count), MX = a.M * X.leftCols(count);
    for (int j = 0; j < count; ++j) {
      const double th = es.eigenvalues()[j];
      worst = std::max(worst, (KX.col(j) - th * MX.col(j)).norm() / MX.col(j).norm());
    }
    if (worst <= opt.tolerance) {
      for (int j = 0; j < count; ++j) out.push_back(finish(a, es.eigenvalues()[j], X.col(j)));
      return out;
    }
  }
  fail(ErrorKind::Convergence, "eigen iteration did not converge; attained residual " + std::to_string(worst));
}

// ---------------------------------------------------------------------------

P1Field::P1Field(std::shared_ptr<const TriMesh> mesh, Eigen::VectorXd coeffs, double lambda)
    : mesh_(std::move(mesh)), coeffs_(std::move(coeffs)), lambda_(lambda) {
  if (static_cast<std::size_t>(coeffs_.size()) != mesh_->vertices.size())
    fail(ErrorKind::Input, "coefficient vector does not match the mesh");
  const double inf = std::numeric_limits<double>::infinity();
  box_ = {inf, -inf, inf, -inf};
  for (const auto& v : mesh_->vertices) {
    box_.xmin = std::min(box_.xmin, v.x);
    box_.xmax = std::max(box_.xmax, v.x);
    box_.ymin = std::min(box_.ymin, v.y);
    box_.ymax = std::max(box_.ymax, v.y);
  }
  nb_ = std::max(1, static_cast<int>(std::sqrt(mesh_->triangles.size() / 2.0)));
  buckets_.assign(static_cast<std::size_t>(nb_) * nb_, {});
  auto cell = [&](double v, double lo, double hi) {
    const int c = static_cast<int>((v - lo) / (hi - lo) * nb_);
    return std::clamp(c, 0, nb_ - 1);
  };
  for (std::size_t t = 0; t < mesh_->triangles.size(); ++t) {
    double x0 = inf, x1 = -inf, y0 = inf, y1 = -inf;
    for (int v : mesh_->triangles[t]) {
      x0 = std::min(x0, mesh_->vertices[v].x);
      x1 = std::max(x1, mesh_->vertices[v].x);
      y0 = std::min(y0, mesh_->vertices[v].y);
      y1 = std::max(y1, mesh_->vertices[v].y);
    }
    for (int j = cell(y0, box_.ymin, box_.ymax); j <= cell(y1, box_.ymin, box_.ymax); ++j)
      for (int i = cell(x0, box_.xmin, box_.xmax); i <= cell(x1, box_.xmin, box_.xmax); ++i)
        buckets_[static_cast<std::size_t>(j) * nb_ + i].push_back(static_cast<int>(t));
  }
}

std::array<double, 3> P1Field::barycentric(int t, const Point& p) const {
  const auto& tri = mesh_->triangles[t];
  const Point &a = mesh_->vertices[tri[0]], &b = mesh_->vertices[tri[1]], &c = mesh_->vertices[tri[2]];
  const double det = cross(b - a, c - a);
  const double l1 = cross(p - a, c - a) / det;
  const double l2 = cross(b - a, p - a) / det;
  return {1.0 - l1 - l2, l1, l2};
}

int P1Field::locate(const Point& p) const {
  auto cell = [&](double v, double lo, double hi) {
    const int c = static_cast<int>(std::floor((v - lo) / (hi - lo) * nb_));
    return std::clamp(c, 0, nb_ - 1);
  };
  const int ci = cell(p.x, box_.xmin, box_.xmax), cj = cell(p.y, box_.ymin, box_.ymax);
  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int ring = 0; ring < nb_; ++ring) {
    for (int j = std::max(0, cj - ring); j <= std::min(nb_ - 1, cj + ring); ++j)
      for (int i = std::max(0, ci - ring); i <= std::min(nb_ - 1, ci + ring); ++i) {
        if (std::max(std::abs(i - ci), std::abs(j - cj)) != ring) continue;
        for (int t : buckets_[static_cast<std::size_t>(j) * nb_ + i]) {
          const auto l = barycentric(t, p);
          const double score = std::min({l[0], l[1], l[2]});
          if (score > best_score) {
            best_score = score;
            best = t;
          }
        }
      }
    if (best >= 0 && (best_score >= -1e-12 || ring >= 1)) return best;
  }
  if (best < 0) fail(ErrorKind::Domain, "point cannot be located in the mesh");
  return best;
}

double P1Field::value(const Point& p) const {
  const int t = locate(p);
  const auto l = barycentric(t, p);
  const auto& tri = mesh_->triangles[t];
  return l[0] * coeffs_[tri[0]] + l[1] * coeffs_[tri[1]] + l[2] * coeffs_[tri[2]];
}

Vec2 P1Field::gradient_at(const Point& p) const {
  const int t = locate(p);
  const auto& tri = mesh_->triangles[t];
  const auto g = basis_gradients(mesh_->vertices[tri[0]], mesh_->vertices[tri[1]], mesh_->vertices[tri[2]],
                                 mesh_->triangle_area(t));
  return g[0] * coeffs_[tri[0]] + g[1] * coeffs_[tri[1]] + g[2] * coeffs_[tri[2]];
}

// ---------------------------------------------------------------------------

Eigen::VectorXd solve_p1_laplace(const TriMesh& mesh, const P1BoundaryData& data) {
  const int n = static_cast<int>(mesh.vertices.size());
  const Assembly a = assemble_p1(mesh);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
  std::vector<char> fixed(n, 0);
  const double g = 0.5 / std::sqrt(3.0);
  for (const auto& e : mesh.boundary_edges) {
    if (data.is_dirichlet && data.is_dirichlet(e.marker)) {
      fixed[e.a] = fixed[e.b] = 1;
      continue;
    }
    if (!data.flux) continue;
    const Point &pa = mesh.vertices[e.a], &pb = mesh.vertices[e.b];
    const double len = distance(pa, pb);
    for (double t : {0.5 - g, 0.5 + g}) {
      const double q = 0.5 * len * data.flux(e.marker, pa + (pb - pa) * t);
      load[e.a] += q * (1.0 - t);
      load[e.b] += q * t;
    }
  }
  std::vector<int> map(n, -1);
  int nf = 0;
  for (int i = 0; i < n; ++i)
    if (!fixed[i]) map[i] = nf++;
  if (nf == n) fail(ErrorKind::Input, "mixed problem needs at least one Dirichlet edge");
  Eigen::VectorXd ud = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    if (fixed[i]) ud[i] = data.dirichlet ? data.dirichlet(mesh.vertices[i]) : 0.0;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
  for (int i = 0; i < n; ++i) {
    if (map[i] >= 0) rhs[map[i]] += load[i];
  }
  for (int k = 0; k < a.K.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a.K, k); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      if (map[r] < 0) continue;
      if (map[c] >= 0) trip.emplace_back(map[r], map[c], it.value());
      else rhs[map[r]] -= it.value() * ud[c];
    }
  SparseMatrix Kf(nf, nf);
  Kf.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<SparseMatrix> solver(Kf);
  if (solver.info() != Eigen::Success) fail(ErrorKind::Convergence, "mixed P1 factorization failed");
  const Eigen::VectorXd uf = solver.solve(rhs);
  Eigen::VectorXd u = ud;
  for (int i = 0; i < n; ++i)
    if (map[i] >= 0) u[i] = uf[map[i]];
  return u;
}

}  // namespace nodalab
