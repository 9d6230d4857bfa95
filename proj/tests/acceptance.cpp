#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "fixtures.hpp"
#include "nodalab/approximation.hpp"
#include "nodalab/bessel.hpp"
#include "nodalab/doubling.hpp"
#include "nodalab/errors.hpp"
#include "nodalab/induction.hpp"
#include "nodalab/nodal.hpp"
#include "nodalab/parallel.hpp"
#include "nodalab/pde.hpp"

using namespace nodalab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome square_modes() {
  std::vector<EigenField> modes;
  std::map<std::string, double> exact;
  for (int m = 0; m <= 8; ++m)
    for (int k = 0; k <= 8; ++k) {
      auto u = std::make_shared<SquareMode>(m, k);
      exact[u->name()] = m + k;
      modes.push_back(u);
    }
  const BoundTable t = verify_main_bound(Domain::unit_square(), modes, 1024);
  double worst = 0.0;
  for (const auto& r : t.rows) worst = std::max(worst, std::abs(r.length - exact[r.name]) / exact[r.name]);
  const double target = std::sqrt(2.0) / kPi;
  const double off = std::abs(t.max_ratio - target) / target;
  return {t.rows.size() == 80 && worst <= 0.01 && off <= 0.01,
          fmt("80 modes, worst rel length error %.2e, max ratio %.6f (sqrt2/pi %.6f)", worst, t.max_ratio, target)};
}

Outcome disk_modes() {
  std::vector<EigenField> modes;
  std::map<std::string, double> exact;
  for (int m = 0; m <= 4; ++m)
    for (int s = 1; s <= 3; ++s) {
      auto u = std::make_shared<DiskMode>(m, s);
      const double kp = bessel_jp_zero(m, s);
      double len = 2.0 * m;
      for (int i = 1;; ++i) {
        const double z = bessel_j_zero(m, i);
        if (z >= kp) break;
        len += 2.0 * kPi * z / kp;
      }
      exact[u->name()] = len;
      modes.push_back(u);
    }
  const BoundTable t = verify_main_bound(Domain::disk(1.0), modes, 1024);
  double worst = 0.0;
  for (const auto& r : t.rows) worst = std::max(worst, std::abs(r.length - exact[r.name]) / exact[r.name]);
  return {t.rows.size() == modes.size() && worst <= 0.02 && t.max_ratio <= fixtures::kDiskRatioMax,
          fmt("%.0f modes, worst rel length error %.2e, max ratio %.6f <= %.6f", static_cast<double>(t.rows.size()),
              worst, t.max_ratio, fixtures::kDiskRatioMax)};
}

Outcome fem_spectrum() {
  const TriMesh mesh = mesh_domain(Domain::unit_square(), 1.0 / 128);
  const auto pairs = neumann_eigenpairs(mesh, 11);
  const double exact[] = {1, 1, 2, 4, 4, 5, 5, 8, 9, 9};
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double e = kPi * kPi * exact[i];
    worst = std::max(worst, std::abs(pairs[i + 1].lambda - e) / e);
  }
  const double l0 = std::abs(pairs[0].lambda) / pairs[1].lambda;
  return {pairs.size() == 11 && worst <= 0.02 && l0 <= 1e-8,
          fmt("worst rel eigenvalue error %.2e, |lambda0|/lambda1 %.1e", worst, l0)};
}

Outcome doubling_exactness() {
  double worst = 0.0, scale = 0.0;
  const Center c({0.3, -0.2});
  for (int k = 0; k <= 6; ++k) {
    const Subject h(std::make_shared<AnalyticHarmonic>(AnalyticHarmonic::re_power(k, 1.0, {0.3, -0.2})),
                    Domain::plane());
    for (double r : {0.05, 0.2, 0.6}) {
      const double N = doubling_index(h, c, r).N;
      worst = std::max(worst, std::abs(N - (2 * k + 2) * std::log(2.0)));
      for (double s : {-3.0, 1e-3, 250.0}) scale = std::max(scale, std::abs(doubling_index(h.scaled(s), c, r).N - N));
    }
  }
  return {worst <= 1e-3 && scale <= 1e-12, fmt("max |N - (2k+2)ln2| %.2e, max scaling drift %.1e", worst, scale)};
}

Outcome interior_monotonicity() {
  std::vector<double> radii;
  for (int i = 0; i <= 12; ++i) radii.push_back(0.05 * std::pow(8.0, i / 12.0));
  int violations = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Subject h(std::make_shared<AnalyticHarmonic>(AnalyticHarmonic::random(seed)), Domain::plane());
    violations += static_cast<int>(check_interior_monotonicity(h, Center({0.0, 0.0}), radii, 1e-6).violations.size());
  }
  return {violations == 0, fmt("100 seeded fields x 13 radii in [0.05,0.4], %.0f violations above 1e-6",
                               static_cast<double>(violations))};
}

Outcome almost_monotonicity() {
  const std::vector<std::pair<double, double>> pairs = {{0.025, 0.05}, {0.05, 0.1}, {0.05, 0.2}, {0.1, 0.2}};
  std::vector<std::pair<int, int>> modes;
  for (int m = 0; m <= 5; ++m)
    for (int s = 1; s <= 5; ++s) modes.emplace_back(m, s);
  std::vector<double> worst(modes.size(), 0.0);
  parallel_for(static_cast<int>(modes.size()), [&](int i) {
    const auto u = std::make_shared<DiskMode>(modes[i].first, modes[i].second);
    const Subject h(harmonic_extension(u, u->eigenvalue()), Domain::disk(1.0));
    for (int j = 0; j < 16; ++j) {
      const double th = 2.0 * kPi * j / 16;
      for (const auto& a : check_almost_monotonicity(h, Center({std::cos(th), std::sin(th)}), pairs))
        worst[i] = std::max(worst[i], a.ratio);
    }
  });
  const double w = *std::max_element(worst.begin(), worst.end());
  return {w <= fixtures::kAlmostMonotonicityC,
          fmt("25 modes x 16 boundary centres x 4 radius pairs, max ratio %.6f <= %.6f", w,
              fixtures::kAlmostMonotonicityC)};
}

Outcome approximation_scaling() {
  const double delta = 1.0 / 128;
  std::vector<double> lt, ld;
  bool faces = true;
  double worst_eq = 0.0;
  for (double tau : {0.04, 0.02, 0.01, 0.005}) {
    const Trochoid tr(tau);
    const auto a = build_approximant(tr.harmonic(), tr.domain(), {0.0, 0.0}, tau, delta);
    lt.push_back(std::log(tau));
    ld.push_back(std::log(a.sup_diff));
    faces = faces && a.max_on_faces;
    worst_eq = std::max(worst_eq, std::abs(a.sup_g - a.sup_h) / (2.0 * delta * a.grad_bound));
  }
  GraphSpec g;
  g.f = [](double) { return 0.0; };
  g.df = [](double) { return 0.0; };
  g.box = {-6.0, 6.0, -1.0, 6.0};
  const auto h = make_field([](const Point& p) { return std::cos(kPi * p.x) * std::cosh(kPi * p.y); });
  const auto flat = build_approximant(h, Domain::graph(g), {0.0, 0.0}, 0.0, delta);
  const double control = flat.sup_diff / (5.0 * delta * delta * flat.second_bound);
  const double s = slope(lt, ld);
  return {s >= 0.8 && faces && worst_eq <= 1.0 && control <= 1.0,
          fmt("slope %.4f, max-equality gap / (2 Delta grad) %.2e, tau=0 control / (5 Delta^2 D2) %.2e", s, worst_eq,
              control)};
}

Outcome quantitative_uniqueness() {
  auto f = [](double) { return 1.0 / 6.0; };
  auto df = [](double) { return 0.0; };
  const WProblem unit{[](const Point&) { return 1.0; }, {}};
  std::vector<double> ld, lw;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const auto u = uniqueness_check(f, df, unit, d, 1.0 / 32);
    ld.push_back(std::log(d));
    lw.push_back(std::log(u.sup_w));
  }
  const double zero = uniqueness_check(f, df, unit, 0.0, 1.0 / 32).sup_w;
  const double s = slope(ld, lw);
  return {std::abs(s - 1.0) <= 0.05 && zero == 0.0, fmt("slope %.6f, sup|w| at delta=0 is %.1e", s, zero)};
}

Outcome barriers() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0), v(0.0, 1.0);
  const auto phi = make_field([](const Point& p) { return barrier_phi(p); });
  double residual = 0.0, lowest = 1e300;
  for (int i = 0; i < 1000; ++i) {
    residual = std::max(residual, std::abs(laplacian_stencil(*phi, {u(rng), v(rng)}, 0.125)));
    lowest = std::min(lowest, barrier_phi({u(rng), v(rng)}));
  }
  for (int j = 0; j <= 100; ++j)
    for (int i = 0; i <= 100; ++i) lowest = std::min(lowest, barrier_phi({-1.0 + i / 50.0, j / 100.0}));
  const PsiReport p = psi_barrier_check(0.02, 1.0 / 64);
  return {residual <= 1e-10 && lowest >= 0.0 && p.holds && p.interior_samples == 1000,
          fmt("phi stencil residual %.1e, min phi %.2e; psi margins: interior %.3e, boundary %.3e", residual, lowest,
              p.min_margin_l, p.min_margin_boundary)};
}

Outcome propagation() {
  const auto fit = smallness_propagation_fit(frequency_family_member, {1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
  bool mono = true;
  for (std::size_t i = 0; i + 1 < fit.sup_third.size(); ++i) mono = mono && fit.sup_third[i + 1] <= fit.sup_third[i];
  return {fit.gamma > 0.0 && fit.gamma < 1.0 && fit.residual <= 0.1 && mono,
          fmt("gamma %.4f, C %.4f, log residual %.4f", fit.gamma, fit.C, fit.residual) +
              (mono ? ", sups monotone" : ", sups NOT monotone")};
}

Outcome extension() {
  double worst_area = 0.0;
  for (auto [m, k] : std::vector<std::pair<int, int>>{{1, 0}, {2, 1}, {2, 3}, {5, 4}, {6, 6}}) {
    const auto u = std::make_shared<SquareMode>(m, k);
    const double area =
        extended_nodal_area(harmonic_extension(u, u->eigenvalue()), {0.0, 1.0, 0.0, 1.0}, Domain::unit_square(), 512);
    const double len = extract_nodal(*u, {0.0, 1.0, 0.0, 1.0}, Domain::unit_square(), 512).total_length;
    worst_area = std::max(worst_area, std::abs(area - 2.0 * len) / (2.0 * len));
  }
  std::vector<double> xs, ys;
  for (int m = 0; m <= 6; ++m)
    for (int k = 0; k <= 6; ++k) {
      if (m == 0 && k == 0) continue;
      const auto u = std::make_shared<SquareMode>(m, k);
      const ScanResult s = eigen_doubling_scan(u, u->eigenvalue(), Domain::unit_square(), 0.5, 10.0);
      xs.push_back(std::sqrt(s.lambda));
      ys.push_back(s.max_N);
    }
  const double b = slope(xs, ys);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / xs.size();
    my += ys[i] / ys.size();
  }
  const double intercept = my - b * mx;
  const double top = *std::max_element(ys.begin(), ys.end());
  return {worst_area <= 0.01 && intercept <= 0.1 * top && b > 0.0,
          fmt("area vs 2 x length worst %.2e; scan slope %.4f, intercept %.4f, max scan %.4f", worst_area, b, intercept,
              top)};
}

Outcome induction_ledger() {
  auto ok = [](int k, int C0) {
    BudgetParams p;
    p.k = k;
    p.C0 = C0;
    return budget_ok(p);
  };
  const bool k3 = !ok(3, 16) && ok(3, 17) && minimal_C0(2, 3, 1) == 17;
  const bool k5 = !ok(5, 64) && ok(5, 65) && minimal_C0(2, 5, 1) == 65;
  BudgetParams p;
  p.k = 3;
  p.C0 = 17;
  int sound = 0, reported = 0;
  const Rational N = 5;
  for (int code = 0; code < 6561; ++code) {
    CubeTree t;
    t.n = 2;
    t.k = 3;
    t.min_side = Rational(1, 8);
    TreeNode root;
    root.side = 1;
    root.N_ss = N;
    t.nodes.push_back(root);
    int c = code;
    for (int i = 0; i < 8; ++i, c /= 3) {
      const auto st = static_cast<NodeStatus>(c % 3);
      t.add_child(0, st, st == NodeStatus::Halved ? N / 2 : N);
    }
    const Ledger L = run_induction(t, p, 1);
    const bool claim = L.rows[0].children_sum + L.rows[0].inner <= p.C0 * N;
    if (L.valid && claim) ++sound;
    if (!L.valid) ++reported;
  }
  // the only rejected assignment is eight subdividing children
  const bool exhaustive = sound == 6560 && reported == 1;
  GraphSpec g;
  g.f = [](double) { return 0.0; };
  g.df = [](double) { return 0.0; };
  g.box = {-4.0, 4.0, -4.0, 4.0};
  const Subject z3(std::make_shared<AnalyticHarmonic>(AnalyticHarmonic::re_power(3)), Domain::graph(g));
  const CubeTree tree = tree_from_field(z3, Cube({0.0, 0.0}, 1.0), 3, 1.0);
  BudgetParams q;
  q.k = 3;
  q.C0 = minimal_C0(2, 3, 1);
  const Ledger L = run_induction(tree, q, 1);
  return {k3 && k5 && exhaustive && L.valid,
          std::string("budget k=3 ") + (k3 ? "ok" : "WRONG") + ", k=5 " + (k5 ? "ok" : "WRONG") + "; 3^8 cases: " +
              std::to_string(sound) + " sound, " + std::to_string(reported) + " reported; Re z^3 replay " +
              (L.valid ? "valid" : "INVALID") + " (" + std::to_string(tree.nodes.size()) + " nodes)"};
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> commands = {
      {"eigen", "--set", "eigen.h=1/16", "--set", "eigen.count=6"},
      {"nodal", "--set", "nodal.fields=square:2,3;disk:2,1;extend:square:1,1"},
      {"verify-bound", "--set", "verify.max_m=3", "--set", "verify.max_k=3", "--set", "verify.resolution=256"},
      {"doubling", "--set", "doubling.scan_max_m=1"},
      {"approx", "--set", "approx.tau=0.02,0.01"},
      {"uniqueness"},
      {"induction", "--set", "induction.rule=random", "--set", "induction.depth=4"},
      {"propagation"},
  };
  const fs::path root = fs::temp_directory_path() / "nodalab_acceptance";
  fs::remove_all(root);
  int same = 0, files = 0;
  std::string bad;
  for (const auto& cmd : commands) {
    std::vector<std::map<std::string, std::string>> runs;
    for (const char* threads : {"1", "1", "3"}) {
      const fs::path out = root / (cmd[0] + "_" + std::to_string(runs.size()));
      std::vector<std::string> args = cmd;
      for (const char* a : {"--out", out.c_str(), "--threads", threads, "--seed", "99"}) args.emplace_back(a);
      std::ostringstream o, e;
      if (app::run(args, o, e) != 0) {
        bad += " " + cmd[0] + "(exit)";
        break;
      }
      runs.push_back(read_dir(out));
    }
    if (runs.size() != 3) continue;
    for (const auto& [name, bytes] : runs[0]) {
      if (name.size() < 4 || name.substr(name.size() - 4) != ".csv") continue;
      ++files;
      if (runs[1].count(name) && runs[2].count(name) && runs[1].at(name) == bytes && runs[2].at(name) == bytes)
        ++same;
      else
        bad += " " + cmd[0] + "/" + name;
    }
  }
  fs::remove_all(root);
  return {bad.empty() && files > 0 && same == files,
          std::to_string(commands.size()) + " commands, " + std::to_string(same) + "/" + std::to_string(files) +
              " CSV files identical across 1,1,3 threads" + (bad.empty() ? "" : "; differs:" + bad)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"square-mode nodal bound", square_modes},
      {"disk-mode nodal bound", disk_modes},
      {"FEM spectral accuracy", fem_spectrum},
      {"doubling exactness", doubling_exactness},
      {"interior monotonicity", interior_monotonicity},
      {"boundary almost monotonicity", almost_monotonicity},
      {"approximation scaling", approximation_scaling},
      {"quantitative uniqueness", quantitative_uniqueness},
      {"barriers", barriers},
      {"propagation of smallness", propagation},
      {"extension machinery", extension},
      {"induction ledger", induction_ledger},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
