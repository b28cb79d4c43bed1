#ifndef CWSAT_WITNESS_HPP
#define CWSAT_WITNESS_HPP

#include <string>
#include <vector>

#include "cwsat/encoder.hpp"
#include "cwsat/formula.hpp"
#include "cwsat/kexpr.hpp"

namespace cwsat {

struct Witness {
    KExpr expression; // over the formula's directed incidence graph
    int colors_used = 0;
    int budget = 0;
};

struct WitnessReport {
    std::vector<std::string> missing_vertices, extra_vertices;
    std::vector<std::pair<std::string, std::string>> missing_edges, extra_edges, flipped_edges;
    int colors_used = 0, budget = 0;

    bool vertices_ok() const { return missing_vertices.empty() && extra_vertices.empty(); }
    bool edges_ok() const { return missing_edges.empty() && extra_edges.empty(); }
    bool orientation_ok() const { return flipped_edges.empty(); }
    bool bound_ok() const { return colors_used <= budget; }
    bool ok() const { return vertices_ok() && edges_ok() && orientation_ok() && bound_ok(); }
    std::string to_string() const;
};

// Per-semantics color budget for a width-k input expression.
int witness_budget(Semantics sem, int k);

// Incidence digraph of the whole emitted formula: CNF clauses as c<j>,
// DNF cubes as t<j>, variables as x<i>.
Digraph matrix_incidence(const Encoding& enc);

// Constructs a k'-expression of matrix_incidence(enc) by walking the AF
// expression the encoding followed, spending at most the per-semantics
// color budget.
Witness build_witness(const Encoding& enc, const KExpr& x);

WitnessReport verify_witness(const Witness& w, const Encoding& enc);

// Witness for a converted DNF matrix; stays within 6*k_in + 4 colors and
// requires every union of x_cnf to have color-disjoint children (the
// trivial incidence expression qualifies). `vars` is the table the
// conversion extended.
Witness build_dnf_witness(const DnfConversion& conv, const KExpr& x_cnf, const VarTable& vars);
WitnessReport verify_dnf_witness(const Witness& w, const DnfConversion& conv);

// serialized witness: "# k'=<colors> budget=<budget>" header + expression
std::string write_witness(const Witness& w);

// Pure-DNF matrix assembly for second-level encodings: the CNF part is
// converted along its own witness expression and folded into the cubes.
struct DnfMatrixResult {
    Qbf2 qbf;
    VarTable vars;      // encoding table extended with sat/t/f variables
    KExpr cnf_expression;
    DnfConversion conv;
};

DnfMatrixResult convert_matrix(const Encoding& enc, const KExpr& x);

} // namespace cwsat

#endif
