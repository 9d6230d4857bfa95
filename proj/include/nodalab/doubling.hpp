#pragma once

// Masses H_h(x,r), doubling indices N_h(x,r) = ln(H(2r)/H(r)), maximal
// indices over cubes and the monotonicity / three-ball checks.

#include <optional>
#include <vector>

#include "nodalab/fields.hpp"
#include "nodalab/geometry.hpp"
#include "nodalab/quadrature.hpp"

namespace nodalab {

/// h over Ω, or the extension e^{√λ t} u over Ω × ℝ.
class Subject {
 public:
  Subject(Field h, Domain domain);
  Subject(ExtendedField h, Domain domain);

  bool extended() const { return extended_; }
  double rate() const { return rate_; }
  const Field& base() const { return base_; }
  const Domain& domain() const { return domain_; }
  double value(const Point& x, double t = 0.0) const;
  /// Same subject with the field multiplied by c.
  Subject scaled(double c) const;

 private:
  Field base_;
  Domain domain_;
  bool extended_ = false;
  double rate_ = 0.0;
};

/// Ball centre; t is ignored for planar subjects.
struct Center {
  Point x;
  double t = 0.0;
  Center(Point p, double tt = 0.0) : x(p), t(tt) {}
};

struct MassOptions {
  double rel_tol = 1e-10;
  int budget = 256;
};

/// H over B(c, r) ∩ Ω. Extended subjects integrate the t-direction in closed
/// form, giving the weight e^{2κt}·sinh(2κ√(r²−d²))/κ over the planar disk.
IntegralEstimate mass(const Subject& h, const Center& c, double r, const MassOptions& opt = {});
/// Extended mass by slices: outer quadrature in t over planar disk masses.
IntegralEstimate extended_mass_sliced(const Subject& h, const Center& c, double r, const MassOptions& opt = {});

struct DoublingReport {
  Point center;
  double t = 0.0;
  double r = 0.0;
  double H_r = 0.0;
  double H_2r = 0.0;
  double N = 0.0;
  double error = 0.0;  // bound on the error of N from the two mass estimates
};

DoublingReport doubling_index(const Subject& h, const Center& c, double r, const MassOptions& opt = {});

struct CubeGrid {
  int lattice = 17;    // m × m centres
  int halvings = 12;   // radii l·2^{-j}, j = 0..J
};

struct CubeIndexReport {
  Cube Q;
  CubeGrid grid;
  int centers = 0;      // sampled centres in Q ∩ Ω̄
  int samples = 0;      // (centre, radius) pairs evaluated
  int degenerate = 0;   // pairs skipped for zero mass
  double N_star = 0.0;
  double N0 = 0.0;
  double N_star_star = 0.0;
  Point argmax_x;
  double argmax_r = 0.0;
};

/// Lattice centres of Q that lie in Ω̄ (the centre of Q is always included when it does).
std::vector<Point> cube_centers(const Cube& Q, const Domain& domain, int lattice);

/// N* = max over the sample grid of Q and, when given, of the sub-cubes'
/// grids too, so N*(q) ≤ N*(Q) for each listed q. Radii run over l·2^{-j}
/// with l the diameter of the cube owning the centre.
CubeIndexReport max_doubling_index(const Subject& h, const Cube& Q, const CubeGrid& grid = {}, double N0 = 0.0,
                                   const std::vector<Cube>& subcubes = {}, const MassOptions& opt = {});

struct MonotonicityViolation {
  int index;  // pair (index, index + 1)
  double r_small, r_large;
  double N_small, N_large;
};

struct MonotonicityReport {
  std::vector<double> radii;
  std::vector<double> N;
  std::vector<MonotonicityViolation> violations;
};

/// Adjacent radii with N(r_i) > N(r_{i+1}) + tol. Requires B(x, 2 max r) ⊂ Ω.
MonotonicityReport check_interior_monotonicity(const Subject& h, const Center& c, const std::vector<double>& radii,
                                               double tol = 1e-6, const MassOptions& opt = {});

struct AlmostMonotonicity {
  double N1 = 0.0, N2 = 0.0;
  double ratio = 0.0;  // N(r1) / (N(r2) + 1)
};

AlmostMonotonicity check_almost_monotonicity(const Subject& h, const Center& c, double r1, double r2,
                                             const MassOptions& opt = {});

/// Several (r1, r2) pairs at one centre; each distinct radius is integrated once.
std::vector<AlmostMonotonicity> check_almost_monotonicity(const Subject& h, const Center& c,
                                                          const std::vector<std::pair<double, double>>& pairs,
                                                          const MassOptions& opt = {});

/// Sampled sup of |h| over B(c, r) ∩ Ω̄ on a lattice of the given spacing.
/// For extended subjects the t-direction is maximized exactly.
double sampled_sup(const Subject& h, const Center& c, double r, double spacing);

struct ThreeBallFit {
  double C = 1.0;
  double delta = 0.5;
};

struct ThreeBallReport {
  double sup_r = 0.0, sup_mid = 0.0, sup_4r = 0.0;
  double rhs = 0.0;        // C · sup_r^{1-δ} · sup_4r^δ
  double C_needed = 0.0;   // smallest C for which the inequality holds at this δ
  bool holds = false;
};

/// sup_{B(3r/2)} |h| ≤ C (sup_{B(r)} |h|)^{1-δ} (sup_{B(4r)} |h|)^δ with sups
/// sampled at spacing r/200.
ThreeBallReport three_ball_check(const Subject& h, const Center& c, double r, const ThreeBallFit& fit);

struct ScanPoint {
  Point y;
  DoublingReport report;
};

struct ScanResult {
  double lambda = 0.0;
  double r = 0.0;
  double max_N = 0.0;
  Point argmax;
  std::vector<ScanPoint> points;
};

/// Max over a boundary net of spacing r/8 of N_h((y,0), r) for the harmonic
/// extension of u. Requires r < r0/16.
ScanResult eigen_doubling_scan(const Field& u, double lambda, const Domain& domain, double r, double r0,
                               const MassOptions& opt = {});

}  // namespace nodalab
