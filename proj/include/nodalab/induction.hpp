#pragma once

// Budget inequality and the measure ledger over trees of boundary cubes, in
// exact rational arithmetic.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nodalab/doubling.hpp"
#include "nodalab/geometry.hpp"

namespace nodalab {

using Rational = boost::multiprecision::cpp_rational;

/// Exact decimal or p/q parsing; doubles convert exactly.
Rational to_rational(double x);
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

struct BudgetParams {
  int n = 2;
  int k = 3;
  Rational C0 = 17;
  Rational C1 = 1;
  Rational N0 = 1;
};

/// C₁ + ((M−1)/M + 1/(2M))·C₀ < C₀ with M = 2^{k(n−1)}.
bool budget_ok(const BudgetParams& p);
/// Smallest integer C₀ passing budget_ok for the given n, k, C₁.
Rational minimal_C0(int n, int k, const Rational& C1);

enum class NodeStatus { ZeroFree, Halved, Subdivide };
std::string to_string(NodeStatus s);
NodeStatus parse_node_status(const std::string& s);

struct TreeNode {
  int depth = 0;
  NodeStatus status = NodeStatus::Subdivide;
  Rational side;
  Rational N_ss;                  // N** annotation
  std::optional<double> length;   // measured nodal length inside the cube
  int parent = -1;
  std::vector<int> children;
  std::optional<Cube> cube;
};

/// Nodes in depth-first pre-order, node 0 the root. Leaves with side ≤
/// min_side are below the compact-set cutoff.
struct CubeTree {
  int n = 2;
  int k = 3;
  Rational min_side = 0;
  std::vector<TreeNode> nodes;

  int add_child(int parent, NodeStatus status, const Rational& N_ss);
  /// Child count 2^{k(n−1)}, child sides 2^{-k}·parent side; throws Input.
  void validate() const;
};

struct LedgerRow {
  int node = 0;
  int depth = 0;
  NodeStatus status = NodeStatus::Subdivide;
  Rational side;
  Rational N_ss;
  Rational children_sum;  // Σ leaf bounds of the children
  Rational inner;         // C_int·N**·s^{n−1}
  Rational bound;         // C₀·N**·s^{n−1}
  Rational slack;         // (bound − children_sum − inner) / bound, internal nodes
  bool internal = false;
  bool ok = true;
  std::optional<double> length;
  bool length_ok = true;
};

struct Ledger {
  std::vector<LedgerRow> rows;  // node order
  bool valid = true;
  std::vector<std::string> failures;
  int binding = -1;  // internal node with the smallest relative slack, shallowest on ties
};

/// Checks every internal node of the tree against the budget. Throws
/// Precondition unless budget_ok(p) and C_int ≤ C₁.
Ledger run_induction(const CubeTree& tree, const BudgetParams& p, const Rational& C_int);

void write_ledger_csv(std::ostream& os, const Ledger& ledger);

/// One halved child per internal node, every other child subdivides down to depth.
CubeTree worst_case_tree(int n, int k, int depth, const Rational& N_ss = 1, const Rational& side = 1);
/// Seeded statuses and annotations; subdivide children recurse down to depth.
CubeTree random_tree(std::uint64_t seed, int n, int k, int depth, const Rational& N_ss = 1,
                     const Rational& side = 1);

struct FromFieldOptions {
  int depth = 1;
  int resolution = 256;  // nodal extraction per cube
  CubeGrid grid{9, 6};
  MassOptions mass{1e-8, 256};
};

/// Statuses from the good-cube searches, N** from max_doubling_index and
/// lengths from extract_nodal (axis-aligned cubes of planar subjects).
CubeTree tree_from_field(const Subject& h, const Cube& Q, int k, double N0, const FromFieldOptions& opt = {});

/// Line records "depth status side N** length", pre-order.
void write_tree(std::ostream& os, const CubeTree& tree);
CubeTree read_tree(std::istream& is);

}  // namespace nodalab
