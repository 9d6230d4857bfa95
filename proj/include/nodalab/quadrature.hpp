#pragma once

#include <functional>
#include <vector>

#include "nodalab/geometry.hpp"

namespace nodalab {

struct Panel {
  double a, b;
  double value;
  double error;
};

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  std::vector<Panel> panels;  // sorted by a
};

/// Globally adaptive Gauss–Kronrod 7/15 on [a, b]. Stops when the summed
/// error drops below max(abs_tol, rel_tol*|value|) or max_panels is reached.
AdaptiveResult adaptive_gk(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           double rel_tol, int max_panels = 200, int initial_panels = 1);

/// The 15 Kronrod nodes and weights mapped to [a, b].
void gk15_nodes(double a, double b, double* x, double* w);

struct WeightedSample {
  Point p;
  double w;
};

struct ClipQuadrature {
  std::vector<WeightedSample> samples;
  double area = 0.0;
  double error = 0.0;

  double integrate(const std::function<double(const Point&)>& g) const;
};

/// Weighted sample set for integrals over B ∩ Ω, adapted to the area of the
/// region. `budget` caps the number of angular panels.
ClipQuadrature clip_quadrature(const Ball& ball, const Domain& domain, int budget = 256);

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
};

struct ClipOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int budget = 256;
  /// Radial weight multiplying the integrand, as a function of the distance to the centre.
  std::function<double(double)> radial_weight;
  /// True when the radial weight behaves like sqrt(R - d) at the rim.
  bool sqrt_rim = false;
};

/// Adaptive polar integral of g over B ∩ Ω, refined on g itself.
IntegralEstimate integrate_clipped(const std::function<double(const Point&)>& g, const Ball& ball,
                                   const Domain& domain, const ClipOptions& opt = {});

/// Inside intervals [r0, r1] of the ray c + r*dir, 0 <= r <= rmax.
std::vector<std::pair<double, double>> inside_intervals(const Domain& domain, const Point& c, const Vec2& dir,
                                                        double rmax);

}  // namespace nodalab
