#ifndef CWSAT_KEXPR_HPP
#define CWSAT_KEXPR_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cwsat/af.hpp"

namespace cwsat {

enum class KKind { Initial, Union, Relabel, EdgeIntro };

// One operation of a k-expression parse tree. Node ids follow the
// level-order numbering of the tree (root = 0), so a node's id is always
// smaller than the ids of its descendants.
struct KNode {
    KKind kind = KKind::Initial;
    int color = 0;   // Initial: vertex color; Relabel: from; EdgeIntro: source
    int color2 = 0;  // Relabel: to; EdgeIntro: target
    std::string vertex; // Initial only
    std::vector<int> children; // node ids
};

struct KExpr {
    std::vector<KNode> nodes; // indexed by id, root at 0
    int width = 0;            // number of colors, i.e. max color mentioned
    int arity = 2;            // max union fan-out (>= 2 when any union exists)

    const KNode& node(int id) const { return nodes[id]; }
    int size() const { return static_cast<int>(nodes.size()); }
    // Parent id per node, -1 for the root.
    std::vector<int> parents() const;
};

// Directed graph with named, colored vertices; the result of evaluating
// a k-expression bottom-up.
struct ColoredDigraph {
    std::vector<std::string> names;
    std::map<std::string, int> index;
    std::vector<int> color;
    std::set<std::pair<int, int>> edges;

    int add_vertex(const std::string& name, int col);
    int vertex(const std::string& name) const; // -1 if unknown
};

struct ColorState {
    // cols[b]: live colors at node b, ascending.
    std::vector<std::vector<int>> cols;
    // col[b]: vertex name -> color of that vertex in the subgraph at b.
    std::vector<std::map<std::string, int>> col;

    bool live(int node, int c) const;
};

// Assembles expression trees bottom-up; finish() renumbers into the
// level-order layout KExpr requires.
class KExprBuilder {
public:
    KExprBuilder();
    int leaf(int color, const std::string& vertex);
    int unite(std::vector<int> children);
    int relabel(int from, int to, int child);
    int edge(int src, int tgt, int child);
    KExpr finish(int root) const;

private:
    std::vector<KNode> pool_;
};

KExpr parse_kexpr(std::string_view text);
std::string serialize_kexpr(const KExpr& x);

ColoredDigraph evaluate(const KExpr& x);
ColorState annotate(const KExpr& x);

struct ValidationReport {
    std::vector<std::string> missing_args, extra_args;
    std::vector<std::pair<std::string, std::string>> missing_edges, extra_edges;
    bool ok() const {
        return missing_args.empty() && extra_args.empty() && missing_edges.empty() && extra_edges.empty();
    }
    std::string to_string() const;
};

ValidationReport validate(const KExpr& x, const Af& af);

// Width-|A| fallback: one leaf per argument, a single n-ary union, one
// edge-introduce per attack. Rejects self-attacking AFs.
KExpr trivial_expression(const Af& af);

enum class SearchStatus { Found, NoneWithinK, BudgetExhausted };
struct SearchResult {
    SearchStatus status;
    std::optional<KExpr> expr;
};

// Exhaustive canonical-state search up to 10 arguments; greedy twin-merge
// construction above that (which cannot certify nonexistence).
SearchResult search_expression(const Af& af, int k_max, long budget = 200000);

} // namespace cwsat

#endif
