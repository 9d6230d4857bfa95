#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nodalab/geometry.hpp"

namespace nodalab {

inline Box unbounded_box() {
  const double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf, -inf, inf};
}

class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double value(const Point& p) const = 0;
  virtual bool has_gradient() const { return false; }
  /// Analytic gradient; only meaningful when has_gradient().
  virtual Vec2 gradient_at(const Point& p) const;
  virtual Box validity() const { return unbounded_box(); }
  virtual std::string name() const { return "field"; }

  double operator()(const Point& p) const { return value(p); }
};

using Field = std::shared_ptr<const ScalarField>;

/// A field known to solve -Δu = λu.
class Eigenfunction : public ScalarField {
 public:
  virtual double eigenvalue() const = 0;
};

using EigenField = std::shared_ptr<const Eigenfunction>;

Field constant_field(double c);
Field make_field(std::function<double(const Point&)> value, std::function<Vec2(const Point&)> grad = {},
                 Box validity = unbounded_box(), std::string name = "field");
Field scaled_field(Field f, double c);

struct HarmonicTerm {
  int k;
  double re;  // coefficient of Re (z - z0)^k
  double im;  // coefficient of Im (z - z0)^k
};

class AnalyticHarmonic : public ScalarField {
 public:
  AnalyticHarmonic(std::vector<HarmonicTerm> terms, Point center = {0.0, 0.0});

  /// Re z^k scaled by c.
  static AnalyticHarmonic re_power(int k, double c = 1.0, Point center = {0.0, 0.0});
  /// Seeded random combination with degrees up to max_degree.
  static AnalyticHarmonic random(std::uint64_t seed, int max_degree = 4);

  double value(const Point& p) const override;
  bool has_gradient() const override { return true; }
  Vec2 gradient_at(const Point& p) const override;
  std::string name() const override;

  const std::vector<HarmonicTerm>& terms() const { return terms_; }
  const Point& center() const { return center_; }

 private:
  std::vector<HarmonicTerm> terms_;
  Point center_;
};

/// cos(mπx')cos(kπx'') on the unit square, λ = π²(m² + k²).
class SquareMode : public Eigenfunction {
 public:
  SquareMode(int m, int k);
  double value(const Point& p) const override;
  bool has_gradient() const override { return true; }
  Vec2 gradient_at(const Point& p) const override;
  double eigenvalue() const override;
  std::string name() const override;
  int m() const { return m_; }
  int k() const { return k_; }

 private:
  int m_, k_;
};

/// J_m(√λ r) cos(mθ) on the disk of radius R, √λ = j'_{m,s}/R.
class DiskMode : public Eigenfunction {
 public:
  DiskMode(int m, int s, double radius = 1.0);
  double value(const Point& p) const override;
  bool has_gradient() const override { return true; }
  Vec2 gradient_at(const Point& p) const override;
  double eigenvalue() const override { return wavenumber_ * wavenumber_; }
  std::string name() const override;
  int m() const { return m_; }
  int s() const { return s_; }
  double radius() const { return radius_; }
  double wavenumber() const { return wavenumber_; }
  /// Radii of the interior nodal circles, j_{m,i}/√λ < R.
  std::vector<double> nodal_radii() const;
  /// Exact nodal length: 2m diameters' worth of rays plus the circles.
  double nodal_length() const;

 private:
  int m_, s_;
  double radius_;
  double wavenumber_;
};

/// h(x, t) = e^{√λ t} u(x) over Ω₀ × ℝ.
class ExtendedField {
 public:
  ExtendedField(Field base, double lambda);
  double value(const Point& x, double t) const;
  double lambda() const { return lambda_; }
  double rate() const { return rate_; }
  const Field& base() const { return base_; }

 private:
  Field base_;
  double lambda_;
  double rate_;
};

ExtendedField harmonic_extension(Field u, double lambda);

/// Analytic gradient if available, else central differences with step eta.
Vec2 gradient(const ScalarField& f, const Point& p, double eta = 1e-5);
/// 5-point Laplacian stencil.
double laplacian_stencil(const ScalarField& f, const Point& p, double eta = 1e-4);
/// 7-point Laplacian of the extended field in (x, t).
double laplacian_stencil(const ExtendedField& h, const Point& x, double t, double eta = 1e-4);

struct FieldSpec {
  Field field;
  std::optional<double> lambda;  // known eigenvalue, if any
  bool extended = false;
  std::string text;
};

/// "square:m,k", "disk:m,s[,R]", "harmpoly:k:re:im,...", "const:c", "extend:<inner>".
FieldSpec parse_field_spec(const std::string& text);

}  // namespace nodalab
