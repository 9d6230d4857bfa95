#pragma once

// Zero sets by marching squares, the main-bound ratio table and the
// good-cube searches near the boundary.

#include <iosfwd>
#include <string>
#include <vector>

#include "nodalab/doubling.hpp"
#include "nodalab/fields.hpp"
#include "nodalab/geometry.hpp"

namespace nodalab {

struct NodalCurveSet {
  std::vector<std::vector<Point>> polylines;
  std::vector<double> segment_lengths;  // polyline order
  double total_length = 0.0;            // sum of segment_lengths in order
  int resolution = 0;
  Box region;
};

/// Marching squares on an m×m cell grid over `region`, clipped to Ω̄.
/// Samples >= 0 count as positive; saddle cells pair by the centre sample.
NodalCurveSet extract_nodal(const ScalarField& f, const Box& region, const Domain& domain, int m);

/// Nodal area of the extension over (region ∩ Ω₀) × [-1, 1]: marching tetrahedra on an m × m × t_cells grid.
double extended_nodal_area(const ExtendedField& h, const Box& region, const Domain& domain, int m, int t_cells = 16);

struct BoundRow {
  std::string name;
  double lambda = 0.0;
  double length = 0.0;
  double ratio = 0.0;  // length / √λ
};

struct BoundTable {
  std::vector<BoundRow> rows;  // ascending λ, λ = 0 omitted
  double max_ratio = 0.0;
  std::string argmax;
};

BoundTable verify_main_bound(const Domain& domain, const std::vector<EigenField>& modes, int resolution);

struct ZeroFreeReport {
  bool zero_free = false;
  int sign = 0;            // common sign when zero_free
  int samples = 0;         // lattice samples inside Ω̄
  double min_abs = 0.0;
  double lipschitz = 0.0;  // max sampled |∇f|
  double margin = 0.0;     // min_abs − lipschitz · grid diagonal
};

/// 33×33 sample of q ∩ Ω̄ with first-order certification.
ZeroFreeReport cube_zero_free(const ScalarField& f, const Cube& q, const Domain& domain, int lattice = 33);

enum class GoodStatus { Halved, ZeroFree, NoneFound };
std::string to_string(GoodStatus s);

struct CubeIndexRow {
  int index = 0;
  Cube q;
  double N_star = 0.0;
};

struct GoodCubeResult {
  GoodStatus status = GoodStatus::NoneFound;
  int index = -1;  // position in the construction's row-major order
  Cube q{{0.0, 0.0}, 1.0};
  ZeroFreeReport zero_free;
  double N_star_Q = 0.0;
  double N_star_star_Q = 0.0;
  double N_star_q = 0.0;
  std::vector<CubeIndexRow> table;  // filled whenever indices were computed
};

struct GoodCubeOptions {
  CubeGrid grid{9, 6};
  MassOptions mass{1e-8, 256};
  bool check_zero_free = true;
};

GoodCubeResult find_good_cube(const Subject& h, const Cube& Q, int k, double N0, const GoodCubeOptions& opt = {});

/// B₊ = {p : |p| < R, p'' ≥ 0} in `frame`; Γ₀ is its flat side.
struct HalfBall {
  Frame frame;
  double radius = 1.0;
};

struct ZeroFreeSpot {
  Point x_star;  // world coordinates, on Γ₀
  double rho = 0.0;
  double c0 = 0.0;           // min |g| / normalization over B(x*, ρ) ∩ B₊
  double value_at_x = 0.0;   // |g(x*)| / normalization
  double normalization = 1.0;  // sampled sup of |g| on (1/4)B₊
};

ZeroFreeSpot zero_free_spot(const ScalarField& g, const HalfBall& B, double floor = 1e-12, int gamma_samples = 257);

void write_svg(std::ostream& os, const NodalCurveSet& curves, const Domain& domain);

}  // namespace nodalab
