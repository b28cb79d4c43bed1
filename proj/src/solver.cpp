#include "cwsat/solver.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace cwsat {

namespace {

constexpr int kUndef = 0, kTrue = 1, kFalse = -1;

class Dpll {
public:
    Dpll(const Cnf& cnf, const SolverLimits& limits) : limits_(limits), nvars_(cnf.num_vars) {
        assign_.assign(nvars_ + 1, kUndef);
        level_of_.assign(nvars_ + 1, 0);
        watches_.assign(2 * nvars_ + 2, {});
        for (auto& cl : cnf.clauses) add_clause(cl.lits);
    }

    // watch slots: literal l -> index 2*v + (l<0)
    static size_t wslot(Lit l) { return 2 * static_cast<size_t>(lit_var(l)) + (l < 0 ? 1 : 0); }

    void add_clause(const std::vector<Lit>& lits) {
        if (lits.empty()) { empty_clause_ = true; return; }
        if (lits.size() == 1) { initial_units_.push_back(lits[0]); return; }
        clauses_.push_back(lits);
        int ci = static_cast<int>(clauses_.size()) - 1;
        watches_[wslot(lits[0])].push_back(ci);
        watches_[wslot(lits[1])].push_back(ci);
    }

    SolveResult solve() {
        SolveResult res;
        if (empty_clause_) { res.stats = stats_; return res; }
        for (Lit u : initial_units_)
            if (!enqueue(u)) { res.stats = stats_; return res; }
        if (!propagate()) { res.stats = stats_; return res; }

        // decision stack holds the variable decided at each level and
        // whether the second phase was already tried
        struct Dec { int var; bool flipped; };
        std::vector<Dec> decs;
        while (true) {
            int v = pick_branch();
            if (v == 0) {
                res.sat = true;
                Model m;
                m.value.assign(nvars_ + 1, false);
                for (int i = 1; i <= nvars_; i++) m.value[i] = assign_[i] == kTrue;
                res.model = std::move(m);
                res.stats = stats_;
                return res;
            }
            stats_.decisions++;
            decs.push_back({v, false});
            level_ = static_cast<int>(decs.size());
            enqueue(v); // true first
            while (!propagate()) {
                stats_.conflicts++;
                if (stats_.conflicts > limits_.max_conflicts)
                    throw resource_error("conflict budget exceeded");
                while (!decs.empty() && decs.back().flipped) {
                    undo_level();
                    decs.pop_back();
                }
                if (decs.empty()) { res.stats = stats_; return res; }
                int fv = decs.back().var;
                undo_level();
                decs.back().flipped = true;
                level_ = static_cast<int>(decs.size());
                enqueue(-fv);
            }
        }
    }

private:
    bool enqueue(Lit l) {
        int v = lit_var(l), want = l > 0 ? kTrue : kFalse;
        if (assign_[v] != kUndef) return assign_[v] == want;
        assign_[v] = want;
        level_of_[v] = level_;
        trail_.push_back(l);
        queue_.push_back(l);
        return true;
    }

    void undo_level() {
        while (!trail_.empty() && level_of_[lit_var(trail_.back())] == level_) {
            assign_[lit_var(trail_.back())] = kUndef;
            trail_.pop_back();
        }
        level_--;
        queue_.clear();
    }

    int value(Lit l) const {
        int a = assign_[lit_var(l)];
        if (a == kUndef) return kUndef;
        return (l > 0) == (a == kTrue) ? kTrue : kFalse;
    }

    bool propagate() {
        while (!queue_.empty()) {
            Lit l = queue_.back();
            queue_.pop_back();
            stats_.propagations++;
            Lit falsified = -l;
            auto& ws = watches_[wslot(falsified)];
            size_t keep = 0;
            for (size_t i = 0; i < ws.size(); i++) {
                int ci = ws[i];
                auto& cl = clauses_[ci];
                if (cl[0] == falsified) std::swap(cl[0], cl[1]);
                // cl[1] is the falsified watch now
                if (value(cl[0]) == kTrue) { ws[keep++] = ci; continue; }
                bool moved = false;
                for (size_t j = 2; j < cl.size(); j++) {
                    if (value(cl[j]) != kFalse) {
                        std::swap(cl[1], cl[j]);
                        watches_[wslot(cl[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[keep++] = ci;
                if (value(cl[0]) == kFalse) {
                    for (size_t j = i + 1; j < ws.size(); j++) ws[keep++] = ws[j];
                    ws.resize(keep);
                    queue_.clear();
                    return false;
                }
                enqueue(cl[0]);
            }
            ws.resize(keep);
        }
        return true;
    }

    int pick_branch() const {
        for (int v = 1; v <= nvars_; v++)
            if (assign_[v] == kUndef) return v;
        return 0;
    }

    SolverLimits limits_;
    int nvars_;
    bool empty_clause_ = false;
    int level_ = 0;
    std::vector<std::vector<Lit>> clauses_;
    std::vector<Lit> initial_units_;
    std::vector<std::vector<int>> watches_;
    std::vector<int> assign_;
    std::vector<int> level_of_;
    std::vector<Lit> trail_, queue_;
    SolveStats stats_;
};

} // namespace

SolveResult sat(const Cnf& cnf, const SolverLimits& limits) {
    Dpll solver(cnf, limits);
    return solver.solve();
}

std::vector<std::vector<Lit>> enumerate_models(const Cnf& cnf, const std::vector<int>& project,
                                               const SolverLimits& limits) {
    if (project.size() > 30) throw resource_error("projection set too large");
    std::vector<std::vector<Lit>> out;
    Cnf work = cnf;
    while (true) {
        SolveResult r = sat(work, limits);
        if (!r.sat) return out;
        std::vector<Lit> assignment, blocking;
        for (int v : project) {
            Lit l = r.model->value[v] ? v : -v;
            assignment.push_back(l);
            blocking.push_back(-l);
        }
        out.push_back(std::move(assignment));
        if (blocking.empty()) return out; // single projected class
        Clause cl{std::move(blocking)};
        cl.normalize();
        work.clauses.push_back(std::move(cl));
    }
}

bool check_2qbf(const Dnf& dnf, const std::vector<int>& inner_vars, const Model& candidate,
                const SolverLimits& limits) {
    // forall Y. DNF  <=>  not exists Y. not DNF; the negated DNF under the
    // candidate is a CNF over the inner variables.
    std::vector<int> remap(dnf.num_vars + 1, 0);
    int m = 0;
    for (int v : inner_vars) remap[v] = ++m;
    Cnf comp;
    comp.num_vars = m;
    for (auto& cb : dnf.cubes) {
        Clause cl;
        bool satisfied = false;
        for (Lit l : cb.lits) {
            int v = lit_var(l);
            if (remap[v]) {
                cl.lits.push_back(l > 0 ? -remap[v] : remap[v]);
            } else {
                // free variable: the cube literal is fixed by the candidate
                if (!candidate.lit_true(l)) { satisfied = true; break; } // cube dead, clause true
            }
        }
        if (satisfied) continue;
        cl.normalize();
        comp.clauses.push_back(std::move(cl));
    }
    return !sat(comp, limits).sat;
}

namespace {

Extension projection_to_extension(const std::vector<Lit>& assignment, const std::vector<int>& ext_vars) {
    Extension e = 0;
    for (size_t a = 0; a < ext_vars.size(); a++)
        for (Lit l : assignment)
            if (l == ext_vars[a]) e |= Extension(1) << a;
    return e;
}

} // namespace

std::vector<Extension> solve_extensions(const Encoding& enc, const SolverLimits& limits) {
    auto assignments = enumerate_models(enc.cnf, enc.ext_vars, limits);
    std::vector<Extension> out;
    for (auto& asg : assignments) {
        Extension e = projection_to_extension(asg, enc.ext_vars);
        if (enc.second_level) {
            // extend the projection to the full (unique) model of the CNF
            // part, then ask the universal part
            Cnf fixed = enc.cnf;
            for (Lit l : asg) {
                Clause cl{{l}};
                fixed.clauses.push_back(cl);
            }
            SolveResult r = sat(fixed, limits);
            if (!r.sat) throw internal_error("projected candidate lost its model");
            if (!check_2qbf(enc.dnf, enc.inner_vars, *r.model, limits)) continue;
        }
        out.push_back(e);
    }
    std::sort(out.begin(), out.end());
    return out;
}

long count_extensions(const Encoding& enc, const SolverLimits& limits) {
    return static_cast<long>(solve_extensions(enc, limits).size());
}

bool decide(const Af& af, const KExpr& x, Semantics sem, int arg, AcceptMode mode,
            const SolverLimits& limits) {
    if (sem == Semantics::Preferred && mode == AcceptMode::Credulous)
        return decide(af, x, Semantics::Admissible, arg, AcceptMode::Credulous, limits);
    Encoding enc = assert_acceptance(encode(af, x, sem), arg, mode);
    if (!enc.second_level) {
        bool is_sat = sat(enc.cnf, limits).sat;
        return enc.answer_flip ? !is_sat : is_sat;
    }
    bool any = !solve_extensions(enc, limits).empty();
    return enc.answer_flip ? !any : any;
}

long count(const Af& af, const KExpr& x, Semantics sem, const SolverLimits& limits) {
    return count_extensions(encode(af, x, sem), limits);
}

SolveResult external_solve(const std::string& cnf_path, const std::string& solver_command) {
    std::string cmd = solver_command + " '" + cnf_path + "' 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw Error(ErrorKind::Resource, "failed to spawn external solver");
    std::string output;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
    int rc = pclose(pipe);
    int code = -1;
    if (rc >= 0 && WIFEXITED(rc)) code = WEXITSTATUS(rc);
    if (code != 10 && code != 20)
        throw Error(ErrorKind::Resource,
                    "external solver returned nonstandard exit code " + std::to_string(code));

    SolveResult res;
    res.sat = code == 10;
    if (res.sat) {
        Model m;
        std::istringstream in(output);
        std::string line;
        std::vector<Lit> lits;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] != 'v') continue;
            std::istringstream ls(line.substr(1));
            long v;
            while (ls >> v)
                if (v != 0) lits.push_back(static_cast<Lit>(v));
        }
        if (lits.empty()) throw Error(ErrorKind::Resource, "external solver printed no v lines");
        int maxv = 0;
        for (Lit l : lits) maxv = std::max(maxv, lit_var(l));
        m.value.assign(maxv + 1, false);
        for (Lit l : lits) m.value[lit_var(l)] = l > 0;
        res.model = std::move(m);
    }
    return res;
}

} // namespace cwsat
