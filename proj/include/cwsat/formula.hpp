#ifndef CWSAT_FORMULA_HPP
#define CWSAT_FORMULA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cwsat/af.hpp"

namespace cwsat {

// Encoding variable families. Ext/Defeat/Attack/Out/DefeatGe/Subset and
// the sat/t/f conversion helpers are keyed by (color, expression node);
// ExtArg is keyed by argument index alone.
enum class VarKind : std::uint8_t {
    ExtArg, Ext, Defeat, Attack, Out, DefeatGe, Subset, SatAux, TrueAux, FalseAux, Plain
};

struct VarKey {
    VarKind kind = VarKind::Plain;
    bool starred = false;
    int color = 0;
    int node = 0; // ExtArg: argument index; Plain: external id

    auto operator<=>(const VarKey&) const = default;
};

class VarTable {
public:
    // Returns the 1-based id, assigning a fresh one on first use.
    int ensure(const VarKey& k);
    int lookup(const VarKey& k) const; // 0 if absent
    int count() const { return static_cast<int>(keys_.size()); }
    const VarKey& key(int id) const { return keys_[id - 1]; }
    std::string name(int id) const;
    std::string name(int id, const Af& af) const; // ExtArg rendered with argument names

private:
    std::vector<VarKey> keys_;
    std::map<VarKey, int> ids_;
};

// Literals are signed 1-based variable ids, DIMACS style.
using Lit = int;
inline int lit_var(Lit l) { return l < 0 ? -l : l; }
inline bool lit_sign(Lit l) { return l > 0; }

// Clause and cube share the representation: a sorted list of literals with
// no duplicate and no complementary pair.
struct Clause {
    std::vector<Lit> lits;
    void normalize();
    bool operator==(const Clause&) const = default;
};
using Cube = Clause;

struct Cnf {
    int num_vars = 0;
    std::vector<Clause> clauses;
};

struct Dnf {
    int num_vars = 0;
    std::vector<Cube> cubes;
};

// One definitional equivalence. In the default shape the body is an AND
// of parts, each part a literal or one disjunction of literals; with
// or_of set the body is an OR of parts, each a literal or one conjunction
// of literals. These are the shapes of every guided equation;
// clausification introduces no new variables.
struct Conjunct {
    bool is_group = false;
    Lit lit = 0;
    std::vector<Lit> group;

    static Conjunct of(Lit l) { return {false, l, {}}; }
    static Conjunct any_of(std::vector<Lit> ls) { return {true, 0, std::move(ls)}; }
};

struct Definition {
    Lit head = 0;
    bool or_of = false;
    std::vector<Conjunct> body; // empty = top (and-shape) or bottom (or-shape)

    static Definition iff_or(Lit head, std::vector<Lit> disjuncts) {
        return {head, false, {Conjunct::any_of(std::move(disjuncts))}};
    }
    static Definition iff_and(Lit head, std::vector<Lit> conjuncts) {
        Definition d{head, false, {}};
        for (Lit l : conjuncts) d.body.push_back(Conjunct::of(l));
        return d;
    }
    // head <-> l1 or ... or lk or (g1 and ... and gm)
    static Definition iff_or_with_group(Lit head, std::vector<Lit> disjuncts,
                                        std::vector<Lit> group) {
        Definition d{head, true, {}};
        for (Lit l : disjuncts) d.body.push_back(Conjunct::of(l));
        d.body.push_back(Conjunct::any_of(std::move(group)));
        return d;
    }
};

// Appends the clauses for one definition, returning how many were added.
int clausify_def(const Definition& def, std::vector<Clause>& out);
Cnf clausify(const std::vector<Definition>& defs);

std::string write_dimacs(const Cnf& cnf, const VarTable* names = nullptr, const Af* af = nullptr);
Cnf parse_dimacs(std::string_view text);

// Two-block prenex QBF with a CNF-and-DNF matrix; absent parts are top.
struct Qbf2 {
    std::vector<int> free_vars;
    std::vector<int> inner_vars;
    bool inner_forall = true;
    std::optional<Cnf> cnf_part;
    std::optional<Dnf> dnf_part;
    int num_vars = 0;
};

std::string write_qbf(const Qbf2& q, const VarTable* names = nullptr, const Af* af = nullptr);
// For an inner-forall, pure-DNF matrix: the complementary existential
// QDIMACS instance (negating a DNF yields a CNF).
std::optional<std::string> write_qdimacs_complement(const Qbf2& q);

// Directed bipartite incidence graph; vertex names "x<i>" for variables
// and "c<j>" / "t<j>" for clauses and terms.
struct Digraph {
    std::vector<std::string> names;
    std::map<std::string, int> index;
    std::set<std::pair<int, int>> edges;

    int ensure_vertex(const std::string& name);
    bool has_edge(const std::string& u, const std::string& v) const;
};

Digraph incidence_digraph(const Cnf& cnf);
Digraph incidence_digraph(const Dnf& dnf);

} // namespace cwsat

#endif
