#ifndef CWSAT_ENCODER_HPP
#define CWSAT_ENCODER_HPP

#include <optional>
#include <string>
#include <vector>

#include "cwsat/af.hpp"
#include "cwsat/formula.hpp"
#include "cwsat/kexpr.hpp"

namespace cwsat {

// Clause origin: expression node, guided-equation tag, color, and whether
// the clause belongs to a starred (inner copy) layer.
struct Prov {
    int node = 0;
    int eq = 0;
    int color = 0;
    bool star = false;
};

struct Encoding {
    Semantics sem = Semantics::ConflictFree;
    bool second_level = false;
    VarTable vars;
    int num_vars = 0;

    // First level: the whole formula. Second level: the CNF part, over
    // free variables only.
    Cnf cnf;
    std::vector<Prov> cnf_prov;

    // Second level only: the universal part as a DNF (negated inner CNF).
    Dnf dnf;
    std::vector<Prov> dnf_prov;
    std::vector<int> inner_vars;

    std::vector<int> ext_vars;          // argument index -> id of e_a
    std::vector<std::string> arg_names; // argument index -> name
    int width = 0;                      // width of the expression the encoding followed
    bool answer_flip = false;

    Qbf2 to_qbf2() const;
};

Encoding encode(const Af& af, const KExpr& x, Semantics sem);

Encoding assert_acceptance(Encoding enc, int arg, AcceptMode mode);

// Sidecar map, one line per clause: "<index> <node> eq<tag>[*]"; cube lines
// are prefixed with 't'.
std::string provenance_text(const Encoding& enc);

// CNF-to-DNF conversion guided by a k-expression of the CNF's directed
// incidence graph. The result is the negation of a definitional clause set
// over sat/t/f variables; under universal quantification of those
// variables it agrees with the input CNF on every assignment.
struct DnfConversion {
    Dnf dnf;                 // all def clauses negated; last cube asserts the root colors
    std::vector<Prov> prov;
    Cnf defs_cnf;            // the un-negated clause set (defs plus the root clause)
    std::vector<int> aux_vars;
    std::vector<int> root_sat_vars;
    int num_vars = 0;
};

// `vars` must already hold ids 1..cnf.num_vars for the original variables.
DnfConversion dnf_convert(const Cnf& cnf, const KExpr& x_cnf, VarTable& vars);

// Table with n plain variables, for running dnf_convert on a bare CNF.
VarTable plain_table(int n);

// Equation tags used in provenance records.
namespace eq {
inline constexpr int assert_unit = 0;
inline constexpr int cf_leaf = 1, cf_union = 2, cf_relabel = 3, cf_edge = 4;
inline constexpr int d_leaf = 5, d_union = 6, d_relabel = 7, d_edge = 8, d_root = 9;
inline constexpr int a_leaf = 10, a_union = 11, a_relabel = 12, a_edge_src = 13, a_edge_tgt = 14,
                     a_root = 15;
inline constexpr int o_leaf = 16, o_union = 17, o_relabel = 18, o_edge_src = 19, o_edge_tgt = 20;
inline constexpr int dge_root = 21, dge_down = 22, dge_relabel = 23;
inline constexpr int com_root = 24;
inline constexpr int s_leaf = 26, s_union = 27, s_relabel = 28, s_edge = 29, subset_leaf = 30,
                     pref_root = 31;
inline constexpr int r_leaf = 33, r_union = 34, r_relabel = 35, r_edge = 36, range_root = 37;
inline constexpr int conv_var_leaf = 41, conv_clause_leaf = 42, conv_union = 43, conv_relabel = 44,
                     conv_edge = 45, conv_root = 46;
} // namespace eq

} // namespace cwsat

#endif
