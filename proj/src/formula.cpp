#include "cwsat/formula.hpp"

#include <algorithm>
#include <sstream>

namespace cwsat {

int VarTable::ensure(const VarKey& k) {
    auto it = ids_.find(k);
    if (it != ids_.end()) return it->second;
    keys_.push_back(k);
    int id = static_cast<int>(keys_.size());
    ids_[k] = id;
    return id;
}

int VarTable::lookup(const VarKey& k) const {
    auto it = ids_.find(k);
    return it == ids_.end() ? 0 : it->second;
}

namespace {

const char* kind_tag(VarKind k) {
    switch (k) {
        case VarKind::ExtArg: return "e";
        case VarKind::Ext: return "e";
        case VarKind::Defeat: return "d";
        case VarKind::Attack: return "a";
        case VarKind::Out: return "o";
        case VarKind::DefeatGe: return "dge";
        case VarKind::Subset: return "s";
        case VarKind::SatAux: return "sat";
        case VarKind::TrueAux: return "t";
        case VarKind::FalseAux: return "f";
        case VarKind::Plain: return "x";
    }
    return "?";
}

} // namespace

std::string VarTable::name(int id) const {
    const VarKey& k = key(id);
    std::string star = k.starred ? "*" : "";
    if (k.kind == VarKind::Plain) return "x" + std::to_string(k.node);
    if (k.kind == VarKind::ExtArg) return std::string("e") + star + "(#" + std::to_string(k.node) + ")";
    return std::string(kind_tag(k.kind)) + star + "[" + std::to_string(k.color) + "@" +
           std::to_string(k.node) + "]";
}

std::string VarTable::name(int id, const Af& af) const {
    const VarKey& k = key(id);
    if (k.kind == VarKind::ExtArg && k.node >= 0 && k.node < af.arg_count())
        return std::string("e") + (k.starred ? "*" : "") + "(" + af.args[k.node] + ")";
    return name(id);
}

void Clause::normalize() {
    std::sort(lits.begin(), lits.end(), [](Lit a, Lit b) {
        if (lit_var(a) != lit_var(b)) return lit_var(a) < lit_var(b);
        return a > b;
    });
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (size_t i = 1; i < lits.size(); i++)
        if (lits[i] == -lits[i - 1])
            throw internal_error("complementary literals in one clause");
}

int clausify_def(const Definition& def, std::vector<Clause>& out) {
    int groups = 0;
    for (auto& c : def.body)
        if (c.is_group) groups++;
    if (groups > 1) throw internal_error("clausify: nested mixed bodies");

    int added = 0;
    auto emit = [&](std::vector<Lit> lits) {
        Clause cl{std::move(lits)};
        cl.normalize();
        out.push_back(std::move(cl));
        added++;
    };

    if (def.or_of) {
        // head <-> OR of (literals, at most one AND-group)
        std::vector<Lit> plain;
        const Conjunct* group = nullptr;
        for (auto& c : def.body) {
            if (c.is_group) group = &c;
            else plain.push_back(c.lit);
        }
        if (def.body.empty() || (group && group->group.empty() && plain.empty())) {
            // head <-> bottom; an empty AND-group is top, handled below
        }
        // forward: not head or body; distribute over the AND-group
        if (group && !group->group.empty()) {
            for (Lit g : group->group) {
                std::vector<Lit> lits{-def.head};
                lits.insert(lits.end(), plain.begin(), plain.end());
                lits.push_back(g);
                emit(std::move(lits));
            }
        } else if (group && group->group.empty()) {
            // an or-disjunct that is an empty conjunction is top: head <-> top
            emit({def.head});
            return added;
        } else {
            std::vector<Lit> lits{-def.head};
            lits.insert(lits.end(), plain.begin(), plain.end());
            emit(std::move(lits));
        }
        // backward: each disjunct implies head
        for (Lit l : plain) emit({-l, def.head});
        if (group && !group->group.empty()) {
            std::vector<Lit> lits;
            for (Lit g : group->group) lits.push_back(-g);
            lits.push_back(def.head);
            emit(std::move(lits));
        }
        return added;
    }

    if (def.body.empty()) { // head <-> top
        emit({def.head});
        return added;
    }

    // forward: head -> each conjunct
    for (auto& c : def.body) {
        if (c.is_group) {
            std::vector<Lit> lits{-def.head};
            lits.insert(lits.end(), c.group.begin(), c.group.end());
            emit(std::move(lits));
        } else {
            emit({-def.head, c.lit});
        }
    }
    // backward: conjuncts -> head; one clause per literal of the group
    std::vector<Lit> base;
    const Conjunct* group = nullptr;
    for (auto& c : def.body) {
        if (c.is_group) group = &c;
        else base.push_back(-c.lit);
    }
    if (!group) {
        base.push_back(def.head);
        emit(std::move(base));
    } else {
        for (Lit m : group->group) {
            std::vector<Lit> lits{-m};
            lits.insert(lits.end(), base.begin(), base.end());
            lits.push_back(def.head);
            emit(std::move(lits));
        }
        // empty disjunction is bottom: backward direction is vacuous
    }
    return added;
}

Cnf clausify(const std::vector<Definition>& defs) {
    Cnf cnf;
    int maxv = 0;
    for (auto& d : defs) {
        clausify_def(d, cnf.clauses);
        maxv = std::max(maxv, lit_var(d.head));
        for (auto& c : d.body) {
            if (c.is_group)
                for (Lit l : c.group) maxv = std::max(maxv, lit_var(l));
            else maxv = std::max(maxv, lit_var(c.lit));
        }
    }
    cnf.num_vars = maxv;
    return cnf;
}

std::string write_dimacs(const Cnf& cnf, const VarTable* names, const Af* af) {
    std::ostringstream os;
    if (names)
        for (int v = 1; v <= cnf.num_vars && v <= names->count(); v++)
            os << "c v " << v << " " << (af ? names->name(v, *af) : names->name(v)) << "\n";
    os << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
    for (auto& cl : cnf.clauses) {
        for (Lit l : cl.lits) os << l << " ";
        os << "0\n";
    }
    return os.str();
}

Cnf parse_dimacs(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string tok;
    Cnf cnf;
    bool header = false;
    long expected = -1;
    Clause cur;
    while (in >> tok) {
        if (tok == "c") {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (tok == "p") {
            std::string fmt;
            long nv, nc;
            if (!(in >> fmt >> nv >> nc) || fmt != "cnf") throw input_error("dimacs: bad header");
            cnf.num_vars = static_cast<int>(nv);
            expected = nc;
            header = true;
            continue;
        }
        if (!header) throw input_error("dimacs: literal before header");
        long v;
        try {
            v = std::stol(tok);
        } catch (...) {
            throw input_error("dimacs: bad token '" + tok + "'");
        }
        if (v == 0) {
            cur.normalize();
            cnf.clauses.push_back(cur);
            cur.lits.clear();
        } else {
            if (std::abs(v) > cnf.num_vars) throw input_error("dimacs: literal out of range");
            cur.lits.push_back(static_cast<Lit>(v));
        }
    }
    if (!cur.lits.empty()) throw input_error("dimacs: unterminated clause");
    if (!header) throw input_error("dimacs: missing header");
    if (expected >= 0 && expected != static_cast<long>(cnf.clauses.size()))
        throw input_error("dimacs: clause count mismatch");
    return cnf;
}

std::string write_qbf(const Qbf2& q, const VarTable* names, const Af* af) {
    std::ostringstream os;
    os << "c cwsat-qbf 1\n";
    if (names)
        for (int v = 1; v <= q.num_vars && v <= names->count(); v++)
            os << "c v " << v << " " << (af ? names->name(v, *af) : names->name(v)) << "\n";
    os << "free";
    for (int v : q.free_vars) os << " " << v;
    os << "\n" << (q.inner_forall ? "forall" : "exists");
    for (int v : q.inner_vars) os << " " << v;
    os << "\n";
    if (q.cnf_part) {
        os << "cnf " << q.cnf_part->clauses.size() << "\n";
        for (auto& cl : q.cnf_part->clauses) {
            for (Lit l : cl.lits) os << l << " ";
            os << "0\n";
        }
    } else {
        os << "cnf top\n";
    }
    if (q.dnf_part) {
        os << "dnf " << q.dnf_part->cubes.size() << "\n";
        for (auto& cb : q.dnf_part->cubes) {
            for (Lit l : cb.lits) os << l << " ";
            os << "0\n";
        }
    } else {
        os << "dnf top\n";
    }
    return os.str();
}

std::optional<std::string> write_qdimacs_complement(const Qbf2& q) {
    if (!q.inner_forall || q.cnf_part || !q.dnf_part) return std::nullopt;
    // not(forall Y. DNF) == exists Y. CNF of negated cubes; we emit the
    // complement, so a QDIMACS answer of UNSAT certifies the original.
    std::ostringstream os;
    os << "c complement of a forall-DNF instance; UNSAT means the original holds\n";
    os << "p cnf " << q.num_vars << " " << q.dnf_part->cubes.size() << "\n";
    if (!q.free_vars.empty()) {
        // free variables stay outermost existential in the complement
        os << "e";
        for (int v : q.free_vars) os << " " << v;
        os << " 0\n";
    }
    if (!q.inner_vars.empty()) {
        os << "e";
        for (int v : q.inner_vars) os << " " << v;
        os << " 0\n";
    }
    for (auto& cb : q.dnf_part->cubes) {
        for (Lit l : cb.lits) os << -l << " ";
        os << "0\n";
    }
    return os.str();
}

int Digraph::ensure_vertex(const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(names.size());
    names.push_back(name);
    index[name] = id;
    return id;
}

bool Digraph::has_edge(const std::string& u, const std::string& v) const {
    auto a = index.find(u), b = index.find(v);
    if (a == index.end() || b == index.end()) return false;
    return edges.count({a->second, b->second}) != 0;
}

namespace {

Digraph incidence_impl(int num_vars, const std::vector<Clause>& cls, const char* cname) {
    Digraph g;
    for (int v = 1; v <= num_vars; v++) g.ensure_vertex("x" + std::to_string(v));
    for (size_t i = 0; i < cls.size(); i++) {
        int cv = g.ensure_vertex(cname + std::to_string(i + 1));
        for (Lit l : cls[i].lits) {
            int xv = g.index.at("x" + std::to_string(lit_var(l)));
            if (l > 0) g.edges.insert({cv, xv});
            else g.edges.insert({xv, cv});
        }
    }
    return g;
}

} // namespace

Digraph incidence_digraph(const Cnf& cnf) { return incidence_impl(cnf.num_vars, cnf.clauses, "c"); }
Digraph incidence_digraph(const Dnf& dnf) { return incidence_impl(dnf.num_vars, dnf.cubes, "t"); }

} // namespace cwsat
