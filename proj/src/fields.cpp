#include "nodalab/fields.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "nodalab/bessel.hpp"
#include "nodalab/errors.hpp"

namespace nodalab {

Vec2 ScalarField::gradient_at(const Point&) const {
  fail(ErrorKind::Input, "field has no analytic gradient");
}

namespace {

class FunctionField : public ScalarField {
 public:
  FunctionField(std::function<double(const Point&)> v, std::function<Vec2(const Point&)> g, Box box,
                std::string name)
      : v_(std::move(v)), g_(std::move(g)), box_(box), name_(std::move(name)) {}
  double value(const Point& p) const override { return v_(p); }
  bool has_gradient() const override { return static_cast<bool>(g_); }
  Vec2 gradient_at(const Point& p) const override {
    if (!g_) return ScalarField::gradient_at(p);
    return g_(p);
  }
  Box validity() const override { return box_; }
  std::string name() const override { return name_; }

 private:
  std::function<double(const Point&)> v_;
  std::function<Vec2(const Point&)> g_;
  Box box_;
  std::string name_;
};

class ScaledField : public ScalarField {
 public:
  ScaledField(Field f, double c) : f_(std::move(f)), c_(c) {}
  double value(const Point& p) const override { return c_ * f_->value(p); }
  bool has_gradient() const override { return f_->has_gradient(); }
  Vec2 gradient_at(const Point& p) const override { return f_->gradient_at(p) * c_; }
  Box validity() const override { return f_->validity(); }
  std::string name() const override { return f_->name(); }

 private:
  Field f_;
  double c_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Field constant_field(double c) {
  return make_field([c](const Point&) { return c; }, [](const Point&) { return Vec2{0.0, 0.0}; },
                    unbounded_box(), "const:" + fmt(c));
}

Field make_field(std::function<double(const Point&)> value, std::function<Vec2(const Point&)> grad, Box validity,
                 std::string name) {
  return std::make_shared<FunctionField>(std::move(value), std::move(grad), validity, std::move(name));
}

Field scaled_field(Field f, double c) { return std::make_shared<ScaledField>(std::move(f), c); }

// ---------------------------------------------------------------------------

AnalyticHarmonic::AnalyticHarmonic(std::vector<HarmonicTerm> terms, Point center)
    : terms_(std::move(terms)), center_(center) {
  for (const auto& t : terms_)
    if (t.k < 0) fail(ErrorKind::Input, "harmonic polynomial degree must be >= 0");
}

AnalyticHarmonic AnalyticHarmonic::re_power(int k, double c, Point center) {
  return AnalyticHarmonic({{k, c, 0.0}}, center);
}

AnalyticHarmonic AnalyticHarmonic::random(std::uint64_t seed, int max_degree) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<HarmonicTerm> terms;
  for (int k = 0; k <= max_degree; ++k) terms.push_back({k, coef(rng), k == 0 ? 0.0 : coef(rng)});
  return AnalyticHarmonic(std::move(terms));
}

double AnalyticHarmonic::value(const Point& p) const {
  const std::complex<double> w(p.x - center_.x, p.y - center_.y);
  double s = 0.0;
  for (const auto& t : terms_) {
    std::complex<double> z = 1.0;
    for (int i = 0; i < t.k; ++i) z *= w;
    s += t.re * z.real() + t.im * z.imag();
  }
  return s;
}

Vec2 AnalyticHarmonic::gradient_at(const Point& p) const {
  // h = Re F with F = sum (re - i im) w^k, grad h = (Re F', -Im F').
  const std::complex<double> w(p.x - center_.x, p.y - center_.y);
  std::complex<double> dF = 0.0;
  for (const auto& t : terms_) {
    if (t.k == 0) continue;
    std::complex<double> z = 1.0;
    for (int i = 0; i < t.k - 1; ++i) z *= w;
    dF += std::complex<double>(t.re, -t.im) * static_cast<double>(t.k) * z;
  }
  return {dF.real(), -dF.imag()};
}

std::string AnalyticHarmonic::name() const {
  std::string s = "harmpoly:";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(terms_[i].k) + ":" + fmt(terms_[i].re) + ":" + fmt(terms_[i].im);
  }
  return s;
}

// ---------------------------------------------------------------------------

SquareMode::SquareMode(int m, int k) : m_(m), k_(k) {
  if (m < 0 || k < 0) fail(ErrorKind::Input, "square mode indices must be >= 0");
}

double SquareMode::value(const Point& p) const { return std::cos(m_ * kPi * p.x) * std::cos(k_ * kPi * p.y); }

Vec2 SquareMode::gradient_at(const Point& p) const {
  const double a = m_ * kPi, b = k_ * kPi;
  return {-a * std::sin(a * p.x) * std::cos(b * p.y), -b * std::cos(a * p.x) * std::sin(b * p.y)};
}

double SquareMode::eigenvalue() const { return kPi * kPi * (m_ * m_ + k_ * k_); }

std::string SquareMode::name() const { return "square:" + std::to_string(m_) + "," + std::to_string(k_); }

// ---------------------------------------------------------------------------

DiskMode::DiskMode(int m, int s, double radius) : m_(m), s_(s), radius_(radius) {
  if (m < 0 || s < 1) fail(ErrorKind::Input, "disk mode needs m >= 0 and s >= 1");
  if (!(radius > 0.0)) fail(ErrorKind::Input, "disk radius must be positive");
  wavenumber_ = bessel_jp_zero(m, s) / radius;
}

double DiskMode::value(const Point& p) const {
  const double r = norm(p);
  const double c = m_ == 0 ? 1.0 : std::cos(m_ * std::atan2(p.y, p.x));
  return bessel_j(m_, wavenumber_ * r) * c;
}

Vec2 DiskMode::gradient_at(const Point& p) const {
  const double r = norm(p), th = std::atan2(p.y, p.x);
  const double k = wavenumber_;
  const std::vector<double> j = bessel_j_sequence(m_ + 1, k * r);
  const double jp = m_ == 0 ? -j[1] : 0.5 * (j[m_ - 1] - j[m_ + 1]);
  const double j_over_x = m_ == 0 ? 0.0 : (j[m_ - 1] + j[m_ + 1]) / (2.0 * m_);
  const double ur = k * jp * std::cos(m_ * th);
  const double ut = -m_ * k * j_over_x * std::sin(m_ * th);
  const Vec2 er{std::cos(th), std::sin(th)}, et{-std::sin(th), std::cos(th)};
  return er * ur + et * ut;
}

std::string DiskMode::name() const {
  std::string s = "disk:" + std::to_string(m_) + "," + std::to_string(s_);
  if (radius_ != 1.0) s += "," + fmt(radius_);
  return s;
}

std::vector<double> DiskMode::nodal_radii() const {
  std::vector<double> out;
  for (int i = 1;; ++i) {
    const double z = bessel_j_zero(m_, i);
    if (z >= wavenumber_ * radius_) break;
    out.push_back(z / wavenumber_);
  }
  return out;
}

double DiskMode::nodal_length() const {
  double len = 2.0 * m_ * radius_;
  for (double r : nodal_radii()) len += 2.0 * kPi * r;
  return len;
}

// ---------------------------------------------------------------------------

ExtendedField::ExtendedField(Field base, double lambda) : base_(std::move(base)), lambda_(lambda) {
  if (!(lambda >= 0.0)) fail(ErrorKind::Precondition, "extension needs lambda >= 0");
  rate_ = std::sqrt(lambda);
}

double ExtendedField::value(const Point& x, double t) const { return std::exp(rate_ * t) * base_->value(x); }

ExtendedField harmonic_extension(Field u, double lambda) { return ExtendedField(std::move(u), lambda); }

Vec2 gradient(const ScalarField& f, const Point& p, double eta) {
  if (f.has_gradient()) return f.gradient_at(p);
  const Box b = f.validity();
  if (p.x - eta < b.xmin || p.x + eta > b.xmax || p.y - eta < b.ymin || p.y + eta > b.ymax)
    fail(ErrorKind::Margin, "gradient stencil leaves the validity region");
  return {(f.value({p.x + eta, p.y}) - f.value({p.x - eta, p.y})) / (2.0 * eta),
          (f.value({p.x, p.y + eta}) - f.value({p.x, p.y - eta})) / (2.0 * eta)};
}

double laplacian_stencil(const ScalarField& f, const Point& p, double eta) {
  return (f.value({p.x + eta, p.y}) + f.value({p.x - eta, p.y}) + f.value({p.x, p.y + eta}) +
          f.value({p.x, p.y - eta}) - 4.0 * f.value(p)) /
         (eta * eta);
}

double laplacian_stencil(const ExtendedField& h, const Point& x, double t, double eta) {
  return (h.value({x.x + eta, x.y}, t) + h.value({x.x - eta, x.y}, t) + h.value({x.x, x.y + eta}, t) +
          h.value({x.x, x.y - eta}, t) + h.value(x, t + eta) + h.value(x, t - eta) - 6.0 * h.value(x, t)) /
         (eta * eta);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& ctx) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::Config, "bad number '" + s + "' in field spec '" + ctx + "'");
  }
}

int to_int(const std::string& s, const std::string& ctx) {
  const double v = to_double(s, ctx);
  if (v != std::floor(v)) fail(ErrorKind::Config, "expected an integer in field spec '" + ctx + "'");
  return static_cast<int>(v);
}

}  // namespace

FieldSpec parse_field_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorKind::Config, "field spec '" + text + "' has no kind prefix");
  const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  FieldSpec spec;
  spec.text = text;
  try {
    if (kind == "square") {
      const auto v = split(rest, ',');
      if (v.size() != 2) fail(ErrorKind::Config, "square spec needs m,k");
      auto f = std::make_shared<SquareMode>(to_int(v[0], text), to_int(v[1], text));
      spec.lambda = f->eigenvalue();
      spec.field = f;
    } else if (kind == "disk") {
      const auto v = split(rest, ',');
      if (v.size() != 2 && v.size() != 3) fail(ErrorKind::Config, "disk spec needs m,s[,R]");
      auto f = std::make_shared<DiskMode>(to_int(v[0], text), to_int(v[1], text),
                                          v.size() == 3 ? to_double(v[2], text) : 1.0);
      spec.lambda = f->eigenvalue();
      spec.field = f;
    } else if (kind == "harmpoly") {
      std::vector<HarmonicTerm> terms;
      for (const auto& item : split(rest, ',')) {
        const auto v = split(item, ':');
        if (v.size() != 3) fail(ErrorKind::Config, "harmpoly terms are k:re:im");
        terms.push_back({to_int(v[0], text), to_double(v[1], text), to_double(v[2], text)});
      }
      if (terms.empty()) fail(ErrorKind::Config, "harmpoly spec is empty");
      spec.field = std::make_shared<AnalyticHarmonic>(std::move(terms));
      spec.lambda = 0.0;
    } else if (kind == "const") {
      spec.field = constant_field(to_double(rest, text));
      spec.lambda = 0.0;
    } else if (kind == "extend") {
      FieldSpec inner = parse_field_spec(rest);
      if (inner.extended) fail(ErrorKind::Config, "nested extend is not supported");
      if (!inner.lambda) fail(ErrorKind::Config, "extend needs an inner field with known eigenvalue");
      inner.extended = true;
      inner.text = text;
      return inner;
    } else {
      fail(ErrorKind::Config, "unknown field kind '" + kind + "'");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    fail(ErrorKind::Config, std::string("invalid field spec '") + text + "': " + e.what());
  }
  return spec;
}

}  // namespace nodalab
