#pragma once

// Planar domains and the local constructions used near their boundaries:
// local frames, Lipschitz sampling, the standard cylinder approximation and
// the dyadic standard construction of boundary cubes.
//
// Coordinates follow the split x = (x', x''): `x` is the tangential coordinate
// and `y` the last (normal) coordinate once a local frame is active.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace nodalab {

inline constexpr double kGeomTol = 1e-8;
inline constexpr double kPi = 3.14159265358979323846;

struct Point {
  double x = 0.0;
  double y = 0.0;

  Point& operator+=(const Point& o) { x += o.x; y += o.y; return *this; }
  Point& operator-=(const Point& o) { x -= o.x; y -= o.y; return *this; }
  Point& operator*=(double s) { x *= s; y *= s; return *this; }
};
using Vec2 = Point;

inline Point operator+(Point a, const Point& b) { return a += b; }
inline Point operator-(Point a, const Point& b) { return a -= b; }
inline Point operator*(Point a, double s) { return a *= s; }
inline Point operator*(double s, Point a) { return a *= s; }
inline Point operator-(const Point& a) { return {-a.x, -a.y}; }
inline bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }
inline Vec2 normalized(const Vec2& a) { return a * (1.0 / norm(a)); }

struct Box {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

/// Orientation-preserving isometry. Local coordinates (x', x'') of a world
/// point p are its components along (tangent, normal_axis) relative to origin.
class Frame {
 public:
  Frame() = default;
  Frame(Point origin, Vec2 normal_axis);

  static Frame identity() { return Frame({0.0, 0.0}, {0.0, 1.0}); }

  Point to_local(const Point& p) const;
  Point to_world(const Point& q) const;
  Vec2 vec_to_world(const Vec2& v) const { return tangent_ * v.x + normal_ * v.y; }
  Vec2 vec_to_local(const Vec2& v) const { return {dot(v, tangent_), dot(v, normal_)}; }

  const Point& origin() const { return origin_; }
  const Vec2& tangent() const { return tangent_; }
  const Vec2& normal_axis() const { return normal_; }
  double determinant() const { return cross(tangent_, normal_); }

 private:
  Point origin_{0.0, 0.0};
  Vec2 tangent_{1.0, 0.0};
  Vec2 normal_{0.0, 1.0};
};

struct Ball {
  Point center;
  double radius;
  Ball(Point c, double r);
};

/// Axis-aligned square in the frame whose last axis is `normal_axis`.
struct Cube {
  Point center;
  double side;
  Vec2 normal_axis{0.0, 1.0};

  Cube(Point c, double s, Vec2 axis = {0.0, 1.0});
  double diameter() const { return side * std::sqrt(2.0); }
  Frame frame() const { return Frame(center, normal_axis); }
  bool contains(const Point& p, double tol = 0.0) const;
  /// True when this cube's point set lies inside `outer` (up to tol).
  bool inside(const Cube& outer, double tol = 1e-12) const;
};

/// Rectangle in a frame, used for the upper quarter q+ of a boundary cube.
struct Rect {
  Point center;  // local coordinates
  double width;
  double height;
};

/// S(x, r, h) = {y : |y' - x'| < r, 0 < y'' - x'' < h}, stored in local coordinates.
struct Cylinder {
  Point base;
  double radius;
  double height;

  Cylinder(Point b, double r, double h);
  double bottom() const { return base.y; }
  double top() const { return base.y + height; }
  double left() const { return base.x - radius; }
  double right() const { return base.x + radius; }
  bool contains(const Point& local) const;

  enum class Face { LowerGamma, UpperGamma, Side, Interior, Outside };
  /// Face classification of a point of the closed cylinder; edges count as Side.
  Face classify(const Point& local, double tol = 1e-12) const;
};

struct GraphSpec {
  std::function<double(double)> f;
  std::function<double(double)> df;
  Box box{-1.0, 1.0, -0.5, 1.0};
  double tau = 0.0;  // declared Lipschitz bound of f
};

/// rho(theta) = base + sum_j a_j cos(j theta) + b_j sin(j theta), j >= 1.
struct RadialProfile {
  double base = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  double operator()(double theta) const;
  double derivative(double theta) const;
  double second_derivative(double theta) const;
};

class Domain {
 public:
  enum class Kind { Plane, Square, Disk, Graph, PerturbedDisk };

  static Domain plane();
  static Domain unit_square();
  static Domain disk(double radius = 1.0);
  static Domain graph(GraphSpec spec);
  static Domain perturbed_disk(RadialProfile profile);

  Kind kind() const { return kind_; }
  std::string name() const;

  /// Continuous function, negative inside, zero on the boundary.
  double level(const Point& p) const;
  bool inside(const Point& p) const { return level(p) < 0.0; }
  bool on_boundary(const Point& p, double tol = kGeomTol) const;

  /// Unit outward normal at a boundary point.
  Vec2 outward_normal(const Point& p) const;

  /// Radii in (0, rmax) where the ray origin + r*dir crosses the boundary, ascending.
  std::vector<double> ray_crossings(const Point& origin, const Vec2& dir, double rmax) const;

  Box bounding_box() const;
  double radius() const { return radius_; }
  const GraphSpec& graph_spec() const { return graph_; }
  const RadialProfile& profile() const { return profile_; }

  /// Boundary points with arc spacing close to `spacing`. For graph domains
  /// only the graph part is returned.
  std::vector<Point> boundary_net(double spacing) const;

  /// Boundary point at polar angle theta (disk-like domains) or abscissa (graph).
  Point boundary_point(double param) const;

 private:
  Kind kind_ = Kind::Plane;
  double radius_ = 1.0;
  GraphSpec graph_;
  RadialProfile profile_;
};

/// Local frame at a boundary point: origin at x0, last axis -nu(x0).
Frame local_frame(const Domain& domain, const Point& x0);

/// Height F(x') of the boundary over the local abscissa x' inside a frame,
/// searching the vertical window [-half_height, half_height].
double boundary_height(const Domain& domain, const Frame& frame, double xprime, double half_height);

enum class FrameChoice { Auto, Native, Normal };

/// Sampled Lipschitz constant of the boundary graph over the window
/// |x'| <= r around x0. Auto uses the native graph for graph domains and the
/// normal frame otherwise.
double lipschitz_estimate(const Domain& domain, const Point& x0, double r,
                          FrameChoice choice = FrameChoice::Auto, int samples = 4097);

struct StandardApproximation {
  Frame frame;
  Point x1_local;
  Point x1_world;
  Cylinder cylinder;
  double tau;
};

/// x1 = x0 - 3 tau e_n and S = S(x1, 1, 1); verifies the upper face lies in
/// the domain and the lower face outside of it.
StandardApproximation standard_approximation(const Domain& domain, const Point& x0, double tau,
                                             int face_samples = 1001);

struct BoundaryCell {
  Cube q;
  Rect q_plus;              // upper quarter, local coordinates of the construction frame
  std::vector<Cube> inner;  // stacked from the top of q, last one clamped to the top of Q
};

struct StandardConstructionResult {
  Frame frame;
  Cube Q;
  int k;
  double tau_hat;
  std::vector<BoundaryCell> cells;  // row-major order along x'

  std::vector<Cube> boundary_cubes() const;
  std::vector<Cube> inner_cubes() const;
  double small_side() const { return Q.side / static_cast<double>(1 << k); }
  /// True when p lies in some boundary or inner cube.
  bool covers(const Point& p, double tol = 1e-12) const;
};

StandardConstructionResult standard_construction(const Cube& Q, int k, const Domain& domain);

}  // namespace nodalab
