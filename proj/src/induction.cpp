#include "nodalab/induction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "nodalab/errors.hpp"
#include "nodalab/nodal.hpp"
#include "nodalab/parallel.hpp"

namespace nodalab {

using boost::multiprecision::cpp_int;

Rational to_rational(double x) {
  if (!std::isfinite(x)) fail(ErrorKind::Input, "cannot convert a non-finite value to a rational");
  return Rational(x);
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const cpp_int p(text.substr(0, slash)), q(text.substr(slash + 1));
      if (q == 0) fail(ErrorKind::Input, "zero denominator in '" + text + "'");
      return Rational(p, q);
    }
    std::string s = text;
    long exp10 = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
      exp10 = std::stol(s.substr(e + 1));
      s = s.substr(0, e);
    }
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
      neg = s[0] == '-';
      s = s.substr(1);
    }
    std::string digits;
    for (char c : s) {
      if (c == '.') continue;
      if (c < '0' || c > '9') fail(ErrorKind::Input, "not a rational number: '" + text + "'");
      digits += c;
    }
    if (digits.empty() || std::count(s.begin(), s.end(), '.') > 1) fail(ErrorKind::Input, "not a rational number: '" + text + "'");
    if (const auto dot = s.find('.'); dot != std::string::npos) exp10 -= static_cast<long>(s.size() - dot - 1);
    Rational r{cpp_int(digits)};
    const cpp_int ten = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(std::labs(exp10)));
    if (exp10 >= 0) r *= ten;
    else r /= ten;
    return neg ? Rational(-r) : r;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorKind::Input, "not a rational number: '" + text + "'");
  }
}

std::string to_string(const Rational& q) {
  const cpp_int p = boost::multiprecision::numerator(q), d = boost::multiprecision::denominator(q);
  return d == 1 ? p.str() : p.str() + "/" + d.str();
}

namespace {

cpp_int children_count(int n, int k) { return cpp_int(1) << (k * (n - 1)); }

void check_params(const BudgetParams& p) {
  if (p.n < 2 || p.k < 3 || p.C0 <= 0 || p.C1 <= 0 || p.N0 <= 0)
    fail(ErrorKind::Input, "budget parameters need n >= 2, k >= 3 and positive C0, C1, N0");
}

Rational power(const Rational& x, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

double as_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace

bool budget_ok(const BudgetParams& p) {
  check_params(p);
  const Rational M{children_count(p.n, p.k)};
  return p.C1 + ((M - 1) / M + Rational(1) / (2 * M)) * p.C0 < p.C0;
}

Rational minimal_C0(int n, int k, const Rational& C1) {
  if (n < 2 || k < 3 || C1 <= 0) fail(ErrorKind::Input, "minimal_C0 needs n >= 2, k >= 3 and C1 > 0");
  const Rational t = 2 * Rational(children_count(n, k)) * C1;
  const cpp_int fl = boost::multiprecision::numerator(t) / boost::multiprecision::denominator(t);
  return Rational(fl + 1);
}

std::string to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::ZeroFree: return "zero_free";
    case NodeStatus::Halved: return "halved";
    case NodeStatus::Subdivide: return "subdivide";
  }
  return "subdivide";
}

NodeStatus parse_node_status(const std::string& s) {
  if (s == "zero_free") return NodeStatus::ZeroFree;
  if (s == "halved") return NodeStatus::Halved;
  if (s == "subdivide") return NodeStatus::Subdivide;
  fail(ErrorKind::Input, "unknown node status '" + s + "'");
}

int CubeTree::add_child(int parent, NodeStatus status, const Rational& N_ss) {
  if (parent < 0 || parent >= static_cast<int>(nodes.size())) fail(ErrorKind::Input, "no such parent node");
  TreeNode c;
  c.depth = nodes[parent].depth + 1;
  c.status = status;
  c.side = nodes[parent].side / Rational(cpp_int(1) << k);
  c.N_ss = N_ss;
  c.parent = parent;
  nodes.push_back(std::move(c));
  const int id = static_cast<int>(nodes.size()) - 1;
  nodes[parent].children.push_back(id);
  return id;
}

void CubeTree::validate() const {
  if (nodes.empty()) fail(ErrorKind::Input, "empty cube tree");
  if (nodes[0].parent != -1 || nodes[0].depth != 0) fail(ErrorKind::Input, "node 0 must be the root");
  const cpp_int M = children_count(n, k);
  const Rational shrink{cpp_int(1) << k};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& t = nodes[i];
    if (t.side <= 0) fail(ErrorKind::Input, "node " + std::to_string(i) + " has nonpositive side");
    if (t.children.empty()) continue;
    if (cpp_int(t.children.size()) != M)
      fail(ErrorKind::Input, "node " + std::to_string(i) + " must have 2^(k(n-1)) children");
    for (int c : t.children) {
      const TreeNode& ch = nodes[c];
      if (ch.parent != static_cast<int>(i) || ch.depth != t.depth + 1 || ch.side * shrink != t.side)
        fail(ErrorKind::Input, "child " + std::to_string(c) + " is inconsistent with its parent");
    }
  }
}

Ledger run_induction(const CubeTree& tree, const BudgetParams& p, const Rational& C_int) {
  if (!budget_ok(p)) fail(ErrorKind::Precondition, "budget inequality fails for these parameters");
  if (!(C_int > 0) || C_int > p.C1) fail(ErrorKind::Precondition, "interior constant must lie in (0, C1]");
  if (tree.n != p.n || tree.k != p.k) fail(ErrorKind::Input, "tree and budget disagree on n or k");
  tree.validate();
  const int count = static_cast<int>(tree.nodes.size());
  Ledger L;
  L.rows.resize(count);
  std::vector<std::vector<std::string>> notes(count);
  parallel_for(count, [&](int i) {
    const TreeNode& t = tree.nodes[i];
    LedgerRow& r = L.rows[i];
    auto note = [&](const std::string& s) {
      notes[i].push_back("node " + std::to_string(i) + ": " + s);
      r.ok = false;
    };
    r.node = i;
    r.depth = t.depth;
    r.status = t.status;
    r.side = t.side;
    r.N_ss = t.N_ss;
    r.length = t.length;
    const Rational sp = power(t.side, p.n - 1);
    r.bound = p.C0 * t.N_ss * sp;
    if (t.length) {
      const Rational allowed = t.status == NodeStatus::ZeroFree && t.children.empty() ? Rational(0) : r.bound;
      r.length_ok = to_rational(*t.length) <= allowed;
      if (!r.length_ok) note("measured length exceeds the ledger bound");
    }
    const bool cut = t.side <= tree.min_side;
    if (t.children.empty()) {
      if (t.status == NodeStatus::Subdivide && !cut) note("subdivide leaf above the cutoff");
      return;
    }
    r.internal = true;
    bool good = false;
    for (int c : t.children) {
      const TreeNode& q = tree.nodes[c];
      if (q.N_ss > t.N_ss) note("child " + std::to_string(c) + " breaks N** nestedness");
      const Rational sq = power(q.side, p.n - 1);
      switch (q.status) {
        case NodeStatus::ZeroFree: good = true; break;
        case NodeStatus::Halved:
          good = true;
          if (2 * q.N_ss > t.N_ss) note("halved child " + std::to_string(c) + " has N** above half");
          r.children_sum += p.C0 * q.N_ss * sq;
          break;
        case NodeStatus::Subdivide: r.children_sum += p.C0 * t.N_ss * sq; break;
      }
    }
    r.inner = C_int * t.N_ss * sp;
    if (!good && !cut) note("no good child above the cutoff");
    if (r.children_sum + r.inner > r.bound) note("children and inner term exceed the bound");
    r.slack = r.bound > 0 ? (r.bound - r.children_sum - r.inner) / r.bound : Rational(0);
  });
  for (int i = 0; i < count; ++i) {
    for (auto& s : notes[i]) L.failures.push_back(std::move(s));
    const LedgerRow& r = L.rows[i];
    if (!r.internal) continue;
    if (L.binding < 0) {
      L.binding = i;
      continue;
    }
    const LedgerRow& b = L.rows[L.binding];
    if (r.slack < b.slack || (r.slack == b.slack && r.depth < b.depth)) L.binding = i;
  }
  L.valid = L.failures.empty();
  return L;
}

void write_ledger_csv(std::ostream& os, const Ledger& ledger) {
  os << "node,depth,status,side,N_ss,children_sum,inner,bound,slack,internal,ok,length,length_ok\n";
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  for (const auto& r : ledger.rows) {
    os << r.node << ',' << r.depth << ',' << to_string(r.status) << ',' << num(as_double(r.side)) << ','
       << num(as_double(r.N_ss)) << ',' << num(as_double(r.children_sum)) << ',' << num(as_double(r.inner)) << ','
       << num(as_double(r.bound)) << ',' << num(as_double(r.slack)) << ',' << r.internal << ',' << r.ok << ','
       << (r.length ? num(*r.length) : std::string("nan")) << ',' << r.length_ok << '\n';
  }
}

namespace {

CubeTree make_root(int n, int k, int depth, const Rational& N_ss, const Rational& side) {
  if (n < 2 || k < 3 || depth < 0) fail(ErrorKind::Input, "trees need n >= 2, k >= 3, depth >= 0");
  if (side <= 0 || N_ss <= 0) fail(ErrorKind::Input, "root side and N** must be positive");
  CubeTree t;
  t.n = n;
  t.k = k;
  t.min_side = side / Rational(cpp_int(1) << (k * depth));
  TreeNode root;
  root.side = side;
  root.N_ss = N_ss;
  t.nodes.push_back(std::move(root));
  return t;
}

}  // namespace

CubeTree worst_case_tree(int n, int k, int depth, const Rational& N_ss, const Rational& side) {
  CubeTree t = make_root(n, k, depth, N_ss, side);
  const cpp_int M = children_count(n, k);
  auto grow = [&](auto&& self, int node, int d) -> void {
    if (d == depth) return;
    for (cpp_int c = 0; c < M; ++c) {
      const Rational N = t.nodes[node].N_ss;
      if (c == 0) {
        t.add_child(node, NodeStatus::Halved, N / 2);
      } else {
        const int id = t.add_child(node, NodeStatus::Subdivide, N);
        self(self, id, d + 1);
      }
    }
  };
  grow(grow, 0, 0);
  return t;
}

CubeTree random_tree(std::uint64_t seed, int n, int k, int depth, const Rational& N_ss, const Rational& side) {
  CubeTree t = make_root(n, k, depth, N_ss, side);
  std::mt19937_64 rng(seed);
  const cpp_int M = children_count(n, k);
  auto grow = [&](auto&& self, int node, int d) -> void {
    if (d == depth) return;
    for (cpp_int c = 0; c < M; ++c) {
      const auto s = static_cast<NodeStatus>(rng() % 3);
      Rational N = t.nodes[node].N_ss * Rational(static_cast<long>(1 + rng() % 8), 8);
      if (s == NodeStatus::Halved) N /= 2;
      const int id = t.add_child(node, s, N);
      if (s == NodeStatus::Subdivide) self(self, id, d + 1);
    }
  };
  grow(grow, 0, 0);
  return t;
}

CubeTree tree_from_field(const Subject& h, const Cube& Q, int k, double N0, const FromFieldOptions& opt) {
  if (opt.depth < 1) fail(ErrorKind::Input, "from_field trees need depth >= 1");
  const Domain& domain = h.domain();
  auto measure = [&](const Cube& q) -> std::optional<double> {
    if (h.extended() || std::abs(q.normal_axis.x * q.normal_axis.y) > 1e-15) return std::nullopt;
    const Box b{q.center.x - 0.5 * q.side, q.center.x + 0.5 * q.side, q.center.y - 0.5 * q.side,
                q.center.y + 0.5 * q.side};
    try {
      return extract_nodal(*h.base(), b, domain, opt.resolution).total_length;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DegenerateField) return std::nullopt;
      throw;
    }
  };
  GoodCubeOptions go;
  go.grid = opt.grid;
  go.mass = opt.mass;
  go.check_zero_free = false;

  CubeTree t = make_root(2, k, opt.depth, 1, to_rational(Q.side));
  t.nodes[0].cube = Q;
  t.nodes[0].length = measure(Q);
  auto grow = [&](auto&& self, int node, const Cube& cube, int d) -> void {
    const GoodCubeResult res = find_good_cube(h, cube, k, N0, go);
    if (node == 0) t.nodes[0].N_ss = to_rational(res.N_star_star_Q);
    std::vector<char> free(res.table.size(), 0);
    for (std::size_t i = 0; i < res.table.size(); ++i)
      free[i] = cube_zero_free(*h.base(), res.table[i].q, domain).zero_free;
    for (std::size_t i = 0; i < res.table.size(); ++i) {
      const auto& row = res.table[i];
      NodeStatus s = NodeStatus::Subdivide;
      if (free[i]) s = NodeStatus::ZeroFree;
      else if (res.status == GoodStatus::Halved && static_cast<int>(i) == res.index)
        s = NodeStatus::Halved;
      const int id = t.add_child(node, s, to_rational(std::max(row.N_star, 0.5 * N0)));
      t.nodes[id].cube = row.q;
      t.nodes[id].length = measure(row.q);
      if (s == NodeStatus::Subdivide && d + 1 < opt.depth) self(self, id, row.q, d + 1);
    }
  };
  grow(grow, 0, Q, 0);
  return t;
}

void write_tree(std::ostream& os, const CubeTree& tree) {
  os << "tree " << tree.n << ' ' << tree.k << ' ' << to_string(tree.min_side) << '\n';
  char buf[64];
  for (const auto& t : tree.nodes) {
    os << t.depth << ' ' << to_string(t.status) << ' ' << to_string(t.side) << ' ' << to_string(t.N_ss) << ' ';
    if (t.length) {
      std::snprintf(buf, sizeof buf, "%.17g", *t.length);
      os << buf;
    } else {
      os << "nan";
    }
    os << '\n';
  }
}

CubeTree read_tree(std::istream& is) {
  CubeTree t;
  std::string line, word, min_side;
  if (!std::getline(is, line)) fail(ErrorKind::Input, "empty tree stream");
  {
    std::istringstream hs(line);
    if (!(hs >> word >> t.n >> t.k >> min_side) || word != "tree") fail(ErrorKind::Input, "bad tree header");
    t.min_side = parse_rational(min_side);
  }
  std::vector<int> stack;  // last node seen at each depth
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    TreeNode n;
    std::string status, side, nss, len;
    if (!(ls >> n.depth >> status >> side >> nss >> len)) fail(ErrorKind::Input, "bad tree record: " + line);
    n.status = parse_node_status(status);
    n.side = parse_rational(side);
    n.N_ss = parse_rational(nss);
    if (len != "nan") n.length = std::stod(len);
    if (n.depth < 0 || n.depth > static_cast<int>(stack.size()) || (n.depth == 0) != t.nodes.empty())
      fail(ErrorKind::Input, "tree records are not in pre-order");
    const int id = static_cast<int>(t.nodes.size());
    stack.resize(n.depth);
    if (n.depth > 0) {
      n.parent = stack[n.depth - 1];
      t.nodes[n.parent].children.push_back(id);
    }
    stack.push_back(id);
    t.nodes.push_back(std::move(n));
  }
  t.validate();
  return t;
}

}  // namespace nodalab
