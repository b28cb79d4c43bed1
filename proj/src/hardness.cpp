#include "cwsat/hardness.hpp"

#include <algorithm>
#include <random>

namespace cwsat {

ThreeCnf threecnf_from_dimacs(std::string_view text) {
    Cnf cnf = parse_dimacs(text);
    ThreeCnf phi;
    phi.num_vars = cnf.num_vars;
    for (auto& cl : cnf.clauses) {
        if (cl.lits.empty()) throw input_error("3cnf: empty clause");
        if (cl.lits.size() > 3) throw input_error("3cnf: clause with more than three literals");
        phi.clauses.push_back(cl.lits);
    }
    return phi;
}

ThreeCnf random_threecnf(int vars, int clauses, std::uint64_t seed) {
    if (vars < 1) throw input_error("3cnf: need at least one variable");
    std::mt19937_64 rng(seed);
    ThreeCnf phi;
    phi.num_vars = vars;
    for (int i = 0; i < clauses; i++) {
        std::vector<Lit> cl;
        int len = 1 + static_cast<int>(rng() % 3);
        for (int j = 0; j < len; j++) {
            int v = 1 + static_cast<int>(rng() % vars);
            Lit l = (rng() & 1) ? v : -v;
            if (std::find(cl.begin(), cl.end(), l) == cl.end() &&
                std::find(cl.begin(), cl.end(), -l) == cl.end())
                cl.push_back(l);
        }
        if (cl.empty()) cl.push_back(1);
        phi.clauses.push_back(std::move(cl));
    }
    return phi;
}

bool truth_table_sat(const ThreeCnf& phi) {
    if (phi.num_vars > 24) throw resource_error("truth table too large");
    for (std::uint32_t m = 0; m < (1u << phi.num_vars); m++) {
        bool ok = true;
        for (auto& cl : phi.clauses) {
            bool cs = false;
            for (Lit l : cl) {
                bool val = (m >> (lit_var(l) - 1)) & 1;
                if ((l > 0) == val) { cs = true; break; }
            }
            if (!cs) { ok = false; break; }
        }
        if (ok) return true;
    }
    return false;
}

HardnessInstance threesat_to_af(const ThreeCnf& phi) {
    HardnessInstance inst;
    Af& af = inst.af;
    for (int v = 1; v <= phi.num_vars; v++) {
        af.add_arg("x" + std::to_string(v));
        af.add_arg("nx" + std::to_string(v));
    }
    inst.sat_arg = af.add_arg("sat");
    for (int v = 1; v <= phi.num_vars; v++) {
        int p = af.arg_index("x" + std::to_string(v));
        int n = af.arg_index("nx" + std::to_string(v));
        af.add_attack(p, n);
        af.add_attack(n, p);
    }
    for (size_t i = 0; i < phi.clauses.size(); i++) {
        int c = af.add_arg("c" + std::to_string(i + 1));
        af.add_attack(c, inst.sat_arg);
        for (Lit l : phi.clauses[i]) {
            int a = l > 0 ? af.arg_index("x" + std::to_string(l))
                          : af.arg_index("nx" + std::to_string(-l));
            af.add_attack(a, c);
        }
    }
    return inst;
}

} // namespace cwsat
