#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "nodalab/fields.hpp"
#include "nodalab/geometry.hpp"

namespace nodalab {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct BoundaryEdge {
  int a, b;
  int marker;
};

/// Boundary markers: square and graph domains use 0 bottom (graph), 1 right,
/// 2 top, 3 left; disk-like domains use 0.
struct TriMesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  double area() const;
  double triangle_area(int t) const;
  double min_angle_deg() const;
  double max_diameter() const;
  /// Throws Geometry when areas, edge conformity or boundary loops are broken.
  void validate() const;

  void write(std::ostream& os) const;
  static TriMesh read(std::istream& is);
};

TriMesh mesh_domain(const Domain& domain, double target_h);

struct Assembly {
  SparseMatrix K;  // stiffness
  SparseMatrix M;  // consistent mass
};

Assembly assemble_p1(const TriMesh& mesh);

struct EigenPair {
  double lambda = 0.0;
  Eigen::VectorXd coeffs;  // unit L2 norm
  double sup_norm = 0.0;
  double residual = 0.0;  // ||K u - λ M u|| / ||M u||
};

struct EigenOptions {
  int max_iterations = 400;
  double tolerance = 1e-8;
  std::uint64_t seed = 0x5EED;
  int dense_threshold = 2000;
};

std::vector<EigenPair> neumann_eigenpairs(const TriMesh& mesh, int count, const EigenOptions& opt = {});

/// P1 interpolant on a mesh; points outside the mesh are extrapolated from
/// the nearest triangle.
class P1Field : public Eigenfunction {
 public:
  P1Field(std::shared_ptr<const TriMesh> mesh, Eigen::VectorXd coeffs, double lambda = 0.0);
  double value(const Point& p) const override;
  bool has_gradient() const override { return true; }
  Vec2 gradient_at(const Point& p) const override;
  double eigenvalue() const override { return lambda_; }
  Box validity() const override { return box_; }
  std::string name() const override { return "p1"; }
  const TriMesh& mesh() const { return *mesh_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

 private:
  int locate(const Point& p) const;
  std::array<double, 3> barycentric(int t, const Point& p) const;

  std::shared_ptr<const TriMesh> mesh_;
  Eigen::VectorXd coeffs_;
  double lambda_;
  Box box_;
  int nb_ = 1;
  std::vector<std::vector<int>> buckets_;
};

struct P1BoundaryData {
  std::function<bool(int marker)> is_dirichlet;
  std::function<double(const Point&)> dirichlet;
  /// Prescribed outward flux ∂u/∂ν on Neumann edges.
  std::function<double(int marker, const Point&)> flux;
};

/// Solves Δu = 0 with mixed data by P1 elements.
Eigen::VectorXd solve_p1_laplace(const TriMesh& mesh, const P1BoundaryData& data);

/// Nodal values on the lattice of a cylinder S in local coordinates.
struct GridFunction {
  Cylinder S{{0.0, 0.0}, 1.0, 1.0};
  double delta = 0.0;
  int nx = 0, ny = 0;
  std::vector<double> values;  // index j*(nx+1)+i

  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * (nx + 1) + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * (nx + 1) + i]; }
  Point node(int i, int j) const { return {S.left() + i * delta, S.bottom() + j * delta}; }
  double interpolate(const Point& local) const;
  double max_abs() const;
};

struct MixedTraces {
  std::vector<double> left, right;    // Σ, ny+1 values bottom to top
  std::vector<double> top, bottom;    // ∂/∂e_n on Γ₊ and Γ₋, nx+1 values
};

struct MixedData {
  std::function<double(const Point&)> dirichlet_sigma;
  std::function<double(const Point&)> neumann_top;     // ∂g/∂e_n on Γ₊
  std::function<double(const Point&)> neumann_bottom;  // ∂g/∂e_n on Γ₋
};

GridFunction solve_mixed_harmonic(const Cylinder& S, const MixedTraces& traces, double delta);
GridFunction solve_mixed_harmonic(const Cylinder& S, const MixedData& data, double delta);
/// Max |5-point Laplacian| over interior nodes (ghost closure on Γ±).
double mixed_residual(const GridFunction& g, const MixedTraces& traces);

/// Finite-difference solution of Δψ = 0 in B(0,R) with ψ = ±1 on the upper and
/// lower semicircles (0 at the two jump points), Shortley–Weller at the rim.
class DiskDirichletSolution : public ScalarField {
 public:
  DiskDirichletSolution(double radius, double delta);
  double value(const Point& p) const override;
  Box validity() const override { return {-radius_, radius_, -radius_, radius_}; }
  std::string name() const override { return "psi"; }
  double radius() const { return radius_; }
  double delta() const { return delta_; }
  /// Largest residual of the discrete equations at nodes farther than
  /// `exclusion` from the jump points.
  double max_residual(double exclusion) const;
  double boundary_value(const Point& p) const;

 private:
  int idx(int i, int j) const { return (j + n_) * (2 * n_ + 1) + (i + n_); }
  double node_value(int i, int j) const;
  double stencil(int i, int j) const;

  double radius_, delta_;
  int n_;
  std::vector<int> unknown_;  // -1 outside
  std::vector<double> u_;
};

std::shared_ptr<DiskDirichletSolution> solve_dirichlet_disk(double radius, double delta);

}  // namespace nodalab
