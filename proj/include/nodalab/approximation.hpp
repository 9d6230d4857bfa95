#pragma once

// Standard approximant g of a Neumann-harmonic h on S, the barrier checks,
// the w-problem and the propagation-of-smallness fit.

#include <functional>
#include <vector>

#include "nodalab/fields.hpp"
#include "nodalab/geometry.hpp"
#include "nodalab/pde.hpp"

namespace nodalab {

/// Ω = Φ(upper half plane), Φ(w) = w + i a (e^{iωw} − 1), with aω chosen so
/// the trochoid boundary has Lipschitz constant τ. f(0) = 0.
struct Trochoid {
  double tau = 0.0;
  double omega = 3.0;
  double a = 0.0;

  explicit Trochoid(double tau, double omega = 3.0);
  /// Boundary height over the abscissa x.
  double f(double x) const;
  double df(double x) const;
  Domain domain(double half_width = 6.0) const;
  /// Re G(Φ⁻¹(z)), G(w) = w + w²/4: harmonic in Ω with zero Neumann data.
  Field harmonic() const;
};

/// h̃ on Σ: h above the crossing with ∂Ω, h at the crossing below it.
struct SigmaTrace {
  double crossing_left = 0.0;   // local x'' of Σ ∩ ∂Ω on x' = −r
  double crossing_right = 0.0;
  std::function<double(const Point& local)> value;
};

SigmaTrace extend_trace_to_sigma(const Field& h, const Domain& domain, const StandardApproximation& sa);

struct ApproximationResult {
  GridFunction g;
  double tau = 0.0;
  double normalization = 1.0;  // h was divided by this (sampled sup over Ω ∩ B(x₀,3))
  double sup_diff = 0.0;       // sup_{Ω∩S} |g − h|
  double sup_g = 0.0;          // sup_S |g|
  double sup_h = 0.0;          // sup_{Ω∩S} |h|
  double grad_bound = 0.0;     // sampled sup_{Ω∩S} |∇h|
  double second_bound = 0.0;   // sampled sup_{Ω∩S} of second derivatives of h
  double sample_spacing = 0.0;
  bool max_on_faces = false;   // max |g| over Γ₊ ∪ Σ nodes ≥ max over all nodes
};

/// Δ ≤ 1/64. Sups over Ω ∩ S are sampled at spacing Δ/2.
ApproximationResult build_approximant(const Field& h, const Domain& domain, const Point& x0, double tau,
                                      double delta);

/// a·((n−1)|x″ − 2/3|² − |x′|² + 1) for n = 2.
double barrier_phi(const Point& p, int n = 2, double a = 1.0);
constexpr double barrier_phi_laplacian(int n) { return 2.0 * (n - 1) - 2.0 * (n - 1); }
static_assert(barrier_phi_laplacian(2) == 0.0);

/// Neumann data for the w-problem, multiplied by δ: `top` is ∂w/∂e_n on Γ₊,
/// `graph` the outward flux on ∂Ω ∩ S.
struct WProblem {
  std::function<double(const Point&)> top;
  std::function<double(const Point&)> graph;
};

struct UniquenessCheck {
  double delta = 0.0;     // max |data| over Γ₊ ∪ (∂Ω ∩ S)
  double sup_w = 0.0;     // nodal sup over Ω ∩ S
  double ratio = 0.0;     // sup_w / delta, 0 when delta = 0
  double mesh_h = 0.0;
  int nodes = 0;
};

/// Ω = {x″ > f(x′)}, S = {|x′| < 1, 0 < x″ < 1}, w = 0 on Σ ∩ Ω, P1 elements of size Δ.
UniquenessCheck uniqueness_check(const std::function<double(double)>& f, const std::function<double(double)>& df,
                                 const WProblem& data, double delta, double mesh_h);

struct PsiReport {
  double tau = 0.0;
  double delta = 0.0;
  double axis_value = 0.0;       // ψ(0, 1)
  int interior_samples = 0;
  double min_margin_l = 0.0;     // min (ψ − x″/2) over upper-half samples
  int boundary_samples = 0;
  double min_boundary_psi = 0.0;
  double min_margin_boundary = 0.0;  // min ψ − τ/2 over ∂Ω ∩ B₂ samples
  bool holds = false;
};

/// ψ on B(0,2) against l = x″/2, and against τ/2 on the trochoid boundary seen
/// from x₁ = (0, −3τ).
PsiReport psi_barrier_check(double tau, double delta, int interior_samples = 1000, int boundary_samples = 1000);

struct SmallnessFit {
  double gamma = 0.0;
  double C = 0.0;
  double residual = 0.0;  // max |log sup − fit| over the runs
  std::vector<double> eps;
  std::vector<double> sup_third;  // sup over (1/3)B₊ after rescaling
  std::vector<double> scale;      // factor each member was divided by
};

/// B₊ = {|p| < 1, p″ ≥ 0}, Γ its flat side. Members are rescaled down so that
/// |h|, |∇h| ≤ 1 on B₊; log sup_{(1/3)B₊}|h| is fitted linearly in log ε.
SmallnessFit smallness_propagation_fit(const std::function<Field(double eps)>& family, const std::vector<double>& eps,
                                       int rings = 96);

/// e^{κ(y−1)} cos(κx)/κ with κ = ln(1/ε).
Field frequency_family_member(double eps);

}  // namespace nodalab
