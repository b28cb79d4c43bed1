#ifndef CWSAT_HARDNESS_HPP
#define CWSAT_HARDNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cwsat/af.hpp"
#include "cwsat/formula.hpp"

namespace cwsat {

struct ThreeCnf {
    int num_vars = 0;
    std::vector<std::vector<Lit>> clauses; // up to 3 literals each
};

ThreeCnf threecnf_from_dimacs(std::string_view text);
// Reproducible instance; duplicate literals within a clause collapse.
ThreeCnf random_threecnf(int vars, int clauses, std::uint64_t seed);

bool truth_table_sat(const ThreeCnf& phi);

// Arguments x<i>/nx<i> with mutual attacks, one argument per clause
// attacking `sat`, and literal-to-clause attacks; phi is satisfiable iff
// `sat` is credulously accepted under admissible semantics.
struct HardnessInstance {
    Af af;
    int sat_arg = -1;
};

HardnessInstance threesat_to_af(const ThreeCnf& phi);

} // namespace cwsat

#endif
