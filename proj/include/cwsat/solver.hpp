#ifndef CWSAT_SOLVER_HPP
#define CWSAT_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "cwsat/encoder.hpp"
#include "cwsat/formula.hpp"

namespace cwsat {

// Total assignment over a CNF's variable table, indexed by variable id.
struct Model {
    std::vector<bool> value; // size num_vars + 1, index 0 unused
    bool lit_true(Lit l) const { return l > 0 ? value[l] : !value[-l]; }
};

struct SolveStats {
    long decisions = 0;
    long propagations = 0;
    long conflicts = 0;
};

struct SolveResult {
    bool sat = false;
    std::optional<Model> model;
    SolveStats stats;
};

struct SolverLimits {
    long max_conflicts = 50'000'000;
};

// DPLL with two watched literals; branching picks the lowest unassigned
// variable and tries true first, so models and stats are reproducible.
SolveResult sat(const Cnf& cnf, const SolverLimits& limits = {});

// All distinct assignments to `project` extendable to models, found via
// blocking clauses over the projection set; deterministic order.
std::vector<std::vector<Lit>> enumerate_models(const Cnf& cnf, const std::vector<int>& project,
                                               const SolverLimits& limits = {});

// True iff the universal block holds for the candidate: one sat() call on
// the complement of the instantiated DNF part.
bool check_2qbf(const Dnf& dnf, const std::vector<int>& inner_vars, const Model& candidate,
                const SolverLimits& limits = {});

// Extension sets of the encoding, as bitmask extensions over the AF's
// argument order (projection to the e_a family; second level filtered by
// check_2qbf). Counting and deciding both ride on this.
std::vector<Extension> solve_extensions(const Encoding& enc, const SolverLimits& limits = {});

long count_extensions(const Encoding& enc, const SolverLimits& limits = {});

// End-to-end pipeline: encode, assert, solve or filter, flip for
// skeptical. Credulous-preferred delegates to the admissible encoding.
bool decide(const Af& af, const KExpr& x, Semantics sem, int arg, AcceptMode mode,
            const SolverLimits& limits = {});
long count(const Af& af, const KExpr& x, Semantics sem, const SolverLimits& limits = {});

// Runs `solver_command <cnf_path>`; expects DIMACS conventions: exit code
// 10/20 and "v" model lines.
SolveResult external_solve(const std::string& cnf_path, const std::string& solver_command);

} // namespace cwsat

#endif
