#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "nodalab/approximation.hpp"
#include "nodalab/config.hpp"
#include "nodalab/doubling.hpp"
#include "nodalab/errors.hpp"
#include "nodalab/induction.hpp"
#include "nodalab/nodal.hpp"
#include "nodalab/parallel.hpp"
#include "nodalab/pde.hpp"

namespace nodalab::app {

namespace fs = std::filesystem;

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : os_(path) {
    if (!os_) fail(ErrorKind::Config, "cannot write '" + path.string() + "'");
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      if (cells[i].find_first_of(",\"") == std::string::npos) {
        os_ << cells[i];
        continue;
      }
      os_ << '"';
      for (char ch : cells[i]) os_ << (ch == '"' ? "\"\"" : std::string(1, ch));
      os_ << '"';
    }
    os_ << '\n';
  }

 private:
  std::ofstream os_;
};

struct Context {
  Config cfg;
  fs::path out;
  std::uint64_t seed = 24301;
  std::ostream* log = nullptr;
};

Domain make_domain(const Config& c) {
  const std::string& kind = c.str("domain.kind");
  if (kind == "square") return Domain::unit_square();
  if (kind == "disk") return Domain::disk(c.positive("domain.radius"));
  if (kind == "plane") return Domain::plane();
  if (kind == "halfplane") {
    GraphSpec g;
    g.f = [](double) { return 0.0; };
    g.df = [](double) { return 0.0; };
    g.box = {-4.0, 4.0, -4.0, 4.0};
    return Domain::graph(g);
  }
  if (kind == "trochoid") return Trochoid(c.number("domain.tau")).domain();
  if (kind == "perturbed") {
    RadialProfile p;
    p.base = c.positive("domain.radius");
    p.cos_coeffs = c.numbers("domain.cos");
    p.sin_coeffs = c.numbers("domain.sin");
    return Domain::perturbed_disk(p);
  }
  fail(ErrorKind::Config, "unknown domain.kind '" + kind + "'");
}

Box plot_region(const Domain& d) {
  switch (d.kind()) {
    case Domain::Kind::Square:
    case Domain::Kind::Disk:
    case Domain::Kind::PerturbedDisk: return d.bounding_box();
    default: return {-1.0, 1.0, -1.0, 1.0};
  }
}

Subject make_subject(const FieldSpec& spec, const Domain& d) {
  if (spec.extended) return Subject(harmonic_extension(spec.field, *spec.lambda), d);
  return Subject(spec.field, d);
}

int cmd_eigen(Context& ctx) {
  const Domain d = make_domain(ctx.cfg);
  const double h = ctx.cfg.positive("eigen.h");
  const int count = ctx.cfg.integer("eigen.count");
  const int nf = ctx.cfg.integer("eigen.functions");
  if (count < 1) fail(ErrorKind::Config, "key 'eigen.count' must be at least 1");
  if (nf < 0) fail(ErrorKind::Config, "key 'eigen.functions' must be nonnegative");
  auto mesh = std::make_shared<TriMesh>(mesh_domain(d, h));
  EigenOptions opt;
  opt.seed = ctx.seed;
  opt.tolerance = ctx.cfg.positive("eigen.tolerance");
  const auto pairs = neumann_eigenpairs(*mesh, count, opt);
  {
    Csv csv(ctx.out / "eigenvalues.csv", {"index", "lambda", "residual", "sup_norm"});
    for (std::size_t i = 0; i < pairs.size(); ++i)
      csv.row({std::to_string(i), num(pairs[i].lambda), num(pairs[i].residual), num(pairs[i].sup_norm)});
  }
  {
    const int used = std::min<int>(nf, static_cast<int>(pairs.size()));
    std::vector<std::string> head{"vertex", "x", "y"};
    for (int j = 0; j < used; ++j) head.push_back("u" + std::to_string(j));
    Csv csv(ctx.out / "eigenfunctions.csv", head);
    for (std::size_t v = 0; v < mesh->vertices.size(); ++v) {
      std::vector<std::string> cells{std::to_string(v), num(mesh->vertices[v].x), num(mesh->vertices[v].y)};
      for (int j = 0; j < used; ++j) cells.push_back(num(pairs[j].coeffs[static_cast<Eigen::Index>(v)]));
      csv.row(cells);
    }
  }
  std::ofstream mf(ctx.out / "mesh.txt");
  mesh->write(mf);
  *ctx.log << "eigen: " << pairs.size() << " pairs on " << mesh->vertices.size() << " vertices\n";
  return 0;
}

int cmd_nodal(Context& ctx) {
  const Domain d = make_domain(ctx.cfg);
  const int m = ctx.cfg.integer("nodal.resolution");
  const auto specs = ctx.cfg.items("nodal.fields");
  if (specs.empty()) fail(ErrorKind::Config, "key 'nodal.fields' is empty");
  const Box region = plot_region(d);
  Csv summary(ctx.out / "nodal_summary.csv", {"index", "field", "extended", "resolution", "polylines", "length"});
  Csv curves(ctx.out / "nodal_curves.csv", {"index", "polyline", "x", "y"});
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const FieldSpec spec = parse_field_spec(specs[i]);
    if (spec.extended) {
      const double area = extended_nodal_area(harmonic_extension(spec.field, *spec.lambda), region, d, m);
      summary.row({std::to_string(i), spec.text, "1", std::to_string(m), "0", num(area)});
      continue;
    }
    const NodalCurveSet z = extract_nodal(*spec.field, region, d, m);
    summary.row({std::to_string(i), spec.text, "0", std::to_string(m), std::to_string(z.polylines.size()),
                 num(z.total_length)});
    for (std::size_t p = 0; p < z.polylines.size(); ++p)
      for (const Point& q : z.polylines[p]) curves.row({std::to_string(i), std::to_string(p), num(q.x), num(q.y)});
    if (ctx.cfg.flag("nodal.svg")) {
      std::ofstream svg(ctx.out / ("nodal_" + std::to_string(i) + ".svg"));
      write_svg(svg, z, d);
    }
  }
  return 0;
}

int cmd_verify_bound(Context& ctx) {
  std::vector<EigenField> modes;
  Domain d = Domain::unit_square();
  if (ctx.cfg.str("verify.modes") == "auto") {
    const int M = ctx.cfg.integer("verify.max_m"), K = ctx.cfg.integer("verify.max_k");
    const std::string& fam = ctx.cfg.str("verify.family");
    if (fam == "square") {
      for (int a = 0; a <= M; ++a)
        for (int b = 0; b <= K; ++b) modes.push_back(std::make_shared<SquareMode>(a, b));
    } else if (fam == "disk") {
      const double R = ctx.cfg.positive("domain.radius");
      d = Domain::disk(R);
      for (int a = 0; a <= M; ++a)
        for (int s = 1; s <= K; ++s) modes.push_back(std::make_shared<DiskMode>(a, s, R));
    } else {
      fail(ErrorKind::Config, "unknown verify.family '" + fam + "'");
    }
  } else {
    d = make_domain(ctx.cfg);
    for (const auto& text : ctx.cfg.items("verify.modes")) {
      const FieldSpec spec = parse_field_spec(text);
      auto e = std::dynamic_pointer_cast<const Eigenfunction>(spec.field);
      if (!e || spec.extended) fail(ErrorKind::Config, "verify.modes entry '" + text + "' is not an eigenfunction");
      modes.push_back(e);
    }
  }
  if (modes.empty()) fail(ErrorKind::Config, "key 'verify.modes' gives an empty mode list");
  const int m = ctx.cfg.integer("verify.resolution");
  const BoundTable t = verify_main_bound(d, modes, m);
  {
    Csv csv(ctx.out / "bound_table.csv", {"mode", "lambda", "length", "ratio"});
    for (const auto& r : t.rows) csv.row({r.name, num(r.lambda), num(r.length), num(r.ratio)});
  }
  {
    Csv csv(ctx.out / "bound_summary.csv", {"count", "max_ratio", "argmax"});
    csv.row({std::to_string(t.rows.size()), num(t.max_ratio), t.argmax});
  }
  // plots for the lowest modes, in table order
  std::vector<EigenField> sorted;
  for (const auto& u : modes)
    if (u->eigenvalue() > 1e-12) sorted.push_back(u);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const EigenField& a, const EigenField& b) { return a->eigenvalue() < b->eigenvalue(); });
  const int plots = std::min<int>(ctx.cfg.integer("verify.svg"), static_cast<int>(sorted.size()));
  for (int i = 0; i < plots; ++i) {
    std::ofstream svg(ctx.out / ("bound_" + std::to_string(i) + ".svg"));
    write_svg(svg, extract_nodal(*sorted[i], d.bounding_box(), d, m), d);
  }
  *ctx.log << "verify-bound: max ratio " << num(t.max_ratio) << " at " << t.argmax << "\n";
  return 0;
}

int cmd_doubling(Context& ctx) {
  const Domain d = make_domain(ctx.cfg);
  const FieldSpec spec = parse_field_spec(ctx.cfg.str("doubling.field"));
  const Subject h = make_subject(spec, d);
  const auto c = ctx.cfg.numbers("doubling.center");
  if (c.size() != 2) fail(ErrorKind::Config, "key 'doubling.center' needs x,y");
  const Center ctr({c[0], c[1]}, ctx.cfg.number("doubling.t"));
  MassOptions mo;
  mo.rel_tol = ctx.cfg.positive("doubling.rel_tol");
  {
    Csv csv(ctx.out / "doubling_points.csv", {"x", "y", "t", "r", "H_r", "H_2r", "N", "error"});
    for (double r : ctx.cfg.numbers("doubling.radii")) {
      if (!(r > 0.0)) fail(ErrorKind::Config, "key 'doubling.radii' must hold positive radii");
      const DoublingReport rep = doubling_index(h, ctr, r, mo);
      csv.row({num(ctr.x.x), num(ctr.x.y), num(ctr.t), num(r), num(rep.H_r), num(rep.H_2r), num(rep.N),
               num(rep.error)});
    }
  }
  const int M = ctx.cfg.integer("doubling.scan_max_m");
  if (M < 0) return 0;
  const double r = ctx.cfg.positive("doubling.r"), r0 = ctx.cfg.positive("doubling.r0");
  Csv csv(ctx.out / "doubling_scan.csv", {"m", "k", "lambda", "sqrt_lambda", "max_N", "argmax_x", "argmax_y"});
  std::vector<double> xs, ys;
  for (int a = 0; a <= M; ++a)
    for (int b = 0; b <= M; ++b) {
      if (a == 0 && b == 0) continue;
      const auto u = std::make_shared<SquareMode>(a, b);
      const ScanResult s = eigen_doubling_scan(u, u->eigenvalue(), Domain::unit_square(), r, r0, mo);
      csv.row({std::to_string(a), std::to_string(b), num(s.lambda), num(std::sqrt(s.lambda)), num(s.max_N),
               num(s.argmax.x), num(s.argmax.y)});
      xs.push_back(std::sqrt(s.lambda));
      ys.push_back(s.max_N);
    }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Csv fit(ctx.out / "doubling_fit.csv", {"slope", "intercept", "max_scan"});
    fit.row({num(slope), num((sy - slope * sx) / n), num(*std::max_element(ys.begin(), ys.end()))});
  }
  return 0;
}

int cmd_approx(Context& ctx) {
  const double delta = ctx.cfg.positive("approx.delta");
  const double pd = ctx.cfg.positive("approx.psi_delta");
  const auto taus = ctx.cfg.numbers("approx.tau");
  if (taus.empty()) fail(ErrorKind::Config, "key 'approx.tau' is empty");
  Csv runs(ctx.out / "approx_runs.csv", {"tau", "delta_grid", "sup_diff", "sup_g", "sup_h"});
  Csv bar(ctx.out / "approx_barriers.csv",
          {"tau", "delta_grid", "axis_value", "min_margin_l", "min_boundary_psi", "min_margin_boundary", "holds"});
  for (double tau : taus) {
    const Trochoid tr(tau);
    const auto a = build_approximant(tr.harmonic(), tr.domain(), {0.0, 0.0}, tau, delta);
    runs.row({num(tau), num(delta), num(a.sup_diff), num(a.sup_g), num(a.sup_h)});
    if (tau > 0.0) {
      const PsiReport p = psi_barrier_check(tau, pd);
      bar.row({num(tau), num(pd), num(p.axis_value), num(p.min_margin_l), num(p.min_boundary_psi),
               num(p.min_margin_boundary), p.holds ? "1" : "0"});
    }
  }
  return 0;
}

int cmd_uniqueness(Context& ctx) {
  const double f0 = ctx.cfg.number("uniqueness.f");
  const double h = ctx.cfg.positive("uniqueness.h");
  const auto deltas = ctx.cfg.numbers("uniqueness.delta");
  if (deltas.empty()) fail(ErrorKind::Config, "key 'uniqueness.delta' is empty");
  const WProblem unit{[](const Point&) { return 1.0; }, {}};
  Csv csv(ctx.out / "uniqueness.csv", {"delta", "sup_w", "ratio", "mesh_h", "nodes"});
  for (double dl : deltas) {
    const auto u = uniqueness_check([f0](double) { return f0; }, [](double) { return 0.0; }, unit, dl, h);
    csv.row({num(u.delta), num(u.sup_w), num(u.ratio), num(u.mesh_h), std::to_string(u.nodes)});
  }
  return 0;
}

int cmd_induction(Context& ctx) {
  const int k = ctx.cfg.integer("induction.k"), depth = ctx.cfg.integer("induction.depth");
  BudgetParams p;
  p.n = 2;
  p.k = k;
  p.C1 = parse_rational(ctx.cfg.str("induction.C1"));
  p.N0 = parse_rational(ctx.cfg.str("induction.N0"));
  p.C0 = ctx.cfg.str("induction.C0") == "auto" ? minimal_C0(2, k, p.C1) : parse_rational(ctx.cfg.str("induction.C0"));
  const Rational C_int = parse_rational(ctx.cfg.str("induction.C_int"));
  const std::string& rule = ctx.cfg.str("induction.rule");
  CubeTree tree;
  if (rule == "worst_case") {
    tree = worst_case_tree(2, k, depth);
  } else if (rule == "random") {
    tree = random_tree(ctx.seed, 2, k, depth);
  } else if (rule == "from_field") {
    const FieldSpec spec = parse_field_spec(ctx.cfg.str("induction.field"));
    const auto q = ctx.cfg.numbers("induction.cube");
    if (q.size() != 3 || !(q[2] > 0.0)) fail(ErrorKind::Config, "key 'induction.cube' needs x,y,side");
    FromFieldOptions fo;
    fo.depth = depth;
    Config dc = ctx.cfg;
    if (!dc.is_set("domain.kind")) dc.set("domain.kind", "halfplane");
    tree = tree_from_field(make_subject(spec, make_domain(dc)), Cube({q[0], q[1]}, q[2]), k,
                           p.N0.convert_to<double>(), fo);
  } else {
    fail(ErrorKind::Config, "unknown induction.rule '" + rule + "'");
  }
  const bool ok = budget_ok(p);
  Csv summary(ctx.out / "induction_summary.csv",
              {"rule", "k", "depth", "C0", "C1", "C_int", "budget_ok", "nodes", "valid", "binding", "failures"});
  if (!ok) {
    summary.row({rule, std::to_string(k), std::to_string(depth), to_string(p.C0), to_string(p.C1), to_string(C_int),
                 "0", std::to_string(tree.nodes.size()), "0", "-1", "0"});
    fail(ErrorKind::Precondition, "budget inequality fails for C0 = " + to_string(p.C0));
  }
  const Ledger L = run_induction(tree, p, C_int);
  {
    std::ofstream tf(ctx.out / "tree.txt");
    write_tree(tf, tree);
    std::ofstream lf(ctx.out / "ledger.csv");
    write_ledger_csv(lf, L);
  }
  summary.row({rule, std::to_string(k), std::to_string(depth), to_string(p.C0), to_string(p.C1), to_string(C_int), "1",
               std::to_string(tree.nodes.size()), L.valid ? "1" : "0", std::to_string(L.binding),
               std::to_string(L.failures.size())});
  for (const auto& f : L.failures) *ctx.log << "induction: " << f << "\n";
  return 0;
}

int cmd_propagation(Context& ctx) {
  const auto eps = ctx.cfg.numbers("propagation.eps");
  const std::string& fam = ctx.cfg.str("propagation.family");
  std::function<Field(double)> family;
  if (fam == "frequency") {
    family = frequency_family_member;
  } else if (fam == "linear") {
    const Field h1 =
        make_field([](const Point& p) { return 0.5 * std::exp(p.y - 1.0) * std::cos(p.x); }, {}, unbounded_box(),
                   "linear");
    family = [h1](double e) { return scaled_field(h1, e); };
  } else {
    fail(ErrorKind::Config, "unknown propagation.family '" + fam + "'");
  }
  const SmallnessFit fit = smallness_propagation_fit(family, eps, ctx.cfg.integer("propagation.rings"));
  {
    Csv csv(ctx.out / "propagation.csv", {"epsilon", "sup_third_ball"});
    for (std::size_t i = 0; i < fit.eps.size(); ++i) csv.row({num(fit.eps[i]), num(fit.sup_third[i])});
  }
  Csv csv(ctx.out / "propagation_fit.csv", {"gamma", "C", "residual"});
  csv.row({num(fit.gamma), num(fit.C), num(fit.residual)});
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App cli{"nodalab: numerical experiments on Neumann nodal sets"};
  cli.require_subcommand(1);
  std::string config_path, out_dir;
  int threads = 0;
  long long seed = -1;
  std::vector<std::string> sets;
  cli.add_option("--config", config_path, "key = value config file");
  cli.add_option("--out", out_dir, "output directory");
  cli.add_option("--threads", threads, "worker threads");
  cli.add_option("--seed", seed, "seed");
  cli.add_option("--set", sets, "override a config key, key=value");
  const std::vector<std::pair<std::string, int (*)(Context&)>> commands = {
      {"eigen", cmd_eigen},           {"nodal", cmd_nodal},           {"doubling", cmd_doubling},
      {"verify-bound", cmd_verify_bound}, {"approx", cmd_approx},     {"uniqueness", cmd_uniqueness},
      {"induction", cmd_induction},   {"propagation", cmd_propagation},
  };
  for (const auto& [name, fn] : commands) cli.add_subcommand(name)->fallthrough();
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    cli.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << cli.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  const int previous = thread_count();
  try {
    Context ctx;
    ctx.log = &out;
    if (!config_path.empty()) ctx.cfg.load_file(config_path);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(ErrorKind::Config, "--set expects key=value, got '" + s + "'");
      ctx.cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!out_dir.empty()) ctx.cfg.set("out", out_dir);
    if (threads > 0) ctx.cfg.set("threads", std::to_string(threads));
    if (seed >= 0) ctx.cfg.set("seed", std::to_string(seed));
    const int nt = ctx.cfg.integer("threads");
    if (nt < 1) fail(ErrorKind::Config, "key 'threads' must be at least 1");
    const double sd = ctx.cfg.number("seed");
    if (sd < 0 || sd != std::floor(sd)) fail(ErrorKind::Config, "key 'seed' must be a nonnegative integer");
    ctx.seed = static_cast<std::uint64_t>(sd);
    ctx.out = ctx.cfg.str("out");
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) fail(ErrorKind::Config, "cannot create output directory '" + ctx.out.string() + "'");
    set_thread_count(nt);
    int code = 0;
    for (const auto& [name, fn] : commands)
      if (cli.got_subcommand(name)) code = fn(ctx);
    set_thread_count(previous);
    return code;
  } catch (const Error& e) {
    set_thread_count(previous);
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Input ? 3 : 2;
  } catch (const std::exception& e) {
    set_thread_count(previous);
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace nodalab::app
