#include "nodalab/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nodalab/errors.hpp"

namespace nodalab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

}  // namespace

double parse_number(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  auto whole = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
      fail(ErrorKind::Config, "bad number '" + text + "' for key '" + key + "'");
    return v;
  };
  if (const auto slash = t.find('/'); slash != std::string::npos) {
    const double d = whole(trim(t.substr(slash + 1)));
    if (d == 0.0) fail(ErrorKind::Config, "zero denominator for key '" + key + "'");
    return whole(trim(t.substr(0, slash))) / d;
  }
  return whole(t);
}

const std::vector<ConfigKey>& Config::keys() {
  static const std::vector<ConfigKey> k = {
      {"seed", "24301", "seed for randomized starts and random trees"},
      {"threads", "1", "worker threads"},
      {"out", "out", "output directory"},
      {"domain.kind", "square", "square | disk | plane | halfplane | trochoid | perturbed"},
      {"domain.radius", "1", "disk radius / perturbed disk base radius"},
      {"domain.tau", "0.02", "trochoid Lipschitz constant"},
      {"domain.cos", "", "perturbed disk cosine coefficients a_1,a_2,..."},
      {"domain.sin", "", "perturbed disk sine coefficients b_1,b_2,..."},
      {"eigen.h", "1/32", "mesh size"},
      {"eigen.count", "10", "number of eigenpairs"},
      {"eigen.functions", "3", "eigenfunctions written to eigenfunctions.csv"},
      {"eigen.tolerance", "1e-8", "eigen solver tolerance"},
      {"nodal.fields", "square:2,3", "field specs separated by ';'"},
      {"nodal.resolution", "256", "marching squares cells per side"},
      {"nodal.svg", "true", "write one SVG per field"},
      {"verify.modes", "auto", "field specs separated by ';', or auto for the family"},
      {"verify.family", "square", "square | disk (used with verify.modes = auto)"},
      {"verify.max_m", "8", "largest angular / x index"},
      {"verify.max_k", "8", "largest y index (square) or radial index s (disk)"},
      {"verify.resolution", "512", "marching squares cells per side"},
      {"verify.svg", "4", "number of SVG plots, lowest eigenvalues first"},
      {"doubling.field", "extend:square:1,0", "field spec"},
      {"doubling.center", "0.5,0", "ball centre x,y"},
      {"doubling.t", "0", "ball centre t for extended fields"},
      {"doubling.radii", "0.05,0.1,0.2", "radii for the point table"},
      {"doubling.rel_tol", "1e-10", "relative tolerance of the masses"},
      {"doubling.scan_max_m", "1", "square modes m,k <= this are scanned; negative skips the scan"},
      {"doubling.r", "0.5", "scan radius"},
      {"doubling.r0", "10", "scan scale r0 (needs r < r0/16)"},
      {"approx.tau", "0.04,0.02,0.01,0.005", "trochoid Lipschitz constants"},
      {"approx.delta", "1/64", "finite-difference grid spacing"},
      {"approx.psi_delta", "1/64", "grid spacing of the disk barrier"},
      {"uniqueness.delta", "1e-2,1e-3,1e-4", "Neumann data bounds"},
      {"uniqueness.f", "1/6", "constant graph height, in (0, 1/3)"},
      {"uniqueness.h", "1/32", "mesh size"},
      {"induction.rule", "worst_case", "worst_case | random | from_field"},
      {"induction.k", "3", "subdivision exponent"},
      {"induction.depth", "2", "tree depth"},
      {"induction.C0", "auto", "ledger constant, auto = smallest integer passing the budget"},
      {"induction.C1", "1", "inner-cube constant of the budget"},
      {"induction.C_int", "1", "inner-cube constant charged in the ledger"},
      {"induction.N0", "1", "index floor N0"},
      {"induction.field", "harmpoly:3:1:0", "field spec for from_field (half plane unless domain.kind is set)"},
      {"induction.cube", "0,0,1", "from_field root cube: centre x, y and side"},
      {"propagation.family", "frequency", "frequency | linear"},
      {"propagation.eps", "1e-2,1e-3,1e-4,1e-5,1e-6", "Cauchy data sizes"},
      {"propagation.rings", "96", "polar sample rings"},
  };
  return k;
}

Config::Config() {
  for (const auto& k : keys()) values_[k.name] = k.default_value;
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  load_text(ss.str(), path);
}

void Config::load_text(const std::string& text, const std::string& origin) {
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::Config, origin + ":" + std::to_string(number) + ": expected key = value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void Config::set(const std::string& key, const std::string& value) {
  if (!values_.count(key)) fail(ErrorKind::Config, "unknown config key '" + key + "'");
  values_[key] = value;
  explicit_.insert(key);
}

const std::string& Config::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorKind::Config, "unknown config key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const { return parse_number(str(key), key); }

double Config::positive(const std::string& key) const {
  const double v = number(key);
  if (!(v > 0.0)) fail(ErrorKind::Config, "key '" + key + "' must be positive");
  return v;
}

int Config::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(ErrorKind::Config, "key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

bool Config::flag(const std::string& key) const {
  const std::string& v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(ErrorKind::Config, "key '" + key + "' must be true or false");
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  if (trim(str(key)).empty()) return out;
  for (const auto& item : split(str(key), ',')) out.push_back(parse_number(item, key));
  return out;
}

std::vector<std::string> Config::items(const std::string& key) const {
  std::vector<std::string> out;
  for (auto& item : split(str(key), ';'))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace nodalab
