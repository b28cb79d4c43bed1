#include "cwsat/witness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cwsat {

int witness_budget(Semantics sem, int k) {
    switch (sem) {
        case Semantics::ConflictFree:
        case Semantics::Stable:
        case Semantics::Admissible: return 11 * k + 2;
        case Semantics::Complete: return 2 * (11 * k + 2);
        case Semantics::Preferred: return 27 * k + 4;
        case Semantics::SemiStable:
        case Semantics::Stage: return 32 * k + 4;
    }
    return 0;
}

Digraph matrix_incidence(const Encoding& enc) {
    Digraph g;
    for (int v = 1; v <= enc.num_vars; v++) g.ensure_vertex("x" + std::to_string(v));
    for (size_t i = 0; i < enc.cnf.clauses.size(); i++) {
        int cv = g.ensure_vertex("c" + std::to_string(i + 1));
        for (Lit l : enc.cnf.clauses[i].lits) {
            int xv = g.index.at("x" + std::to_string(lit_var(l)));
            if (l > 0) g.edges.insert({cv, xv});
            else g.edges.insert({xv, cv});
        }
    }
    for (size_t i = 0; i < enc.dnf.cubes.size(); i++) {
        int tv = g.ensure_vertex("t" + std::to_string(i + 1));
        for (Lit l : enc.dnf.cubes[i].lits) {
            int xv = g.index.at("x" + std::to_string(lit_var(l)));
            if (l > 0) g.edges.insert({tv, xv});
            else g.edges.insert({xv, tv});
        }
    }
    return g;
}

namespace {

// Witness color roles. Cur holds the single level-b variable of a family
// and color, Child the completed children's, the parks hold clause
// vertices waiting for their edge towards the Cur variable.
enum Role { RCur = 0, RChild = 1, RParkIn = 2, RParkOut = 3 };

struct ClauseRef {
    std::string vertex;
    const std::vector<Lit>* lits;
    Prov prov;
};

struct Sub {
    int h = -1;
    std::map<int, std::vector<std::string>> cls;
};

class WitnessBuilder {
public:
    WitnessBuilder(const Encoding& enc, const KExpr& x, bool include_dnf)
        : enc_(enc), x_(x), st_(annotate(x)), parent_(x.parents()) {
        // family slots in a fixed order: (kind, star)
        auto fam = [&](VarKind k, bool s) { fams_.push_back({k, s}); };
        fam(VarKind::Ext, false);
        fam(VarKind::Defeat, false);
        fam(VarKind::Attack, false);
        fam(VarKind::Out, false);
        fam(VarKind::DefeatGe, false);
        fam(VarKind::Ext, true);
        fam(VarKind::Defeat, true);
        fam(VarKind::Attack, true);
        fam(VarKind::Subset, false);

        at_node_.resize(x.size());
        for (size_t i = 0; i < enc.cnf.clauses.size(); i++)
            place(ClauseRef{"c" + std::to_string(i + 1), &enc.cnf.clauses[i].lits, enc.cnf_prov[i]});
        if (include_dnf)
            for (size_t i = 0; i < enc.dnf.cubes.size(); i++)
                place(ClauseRef{"t" + std::to_string(i + 1), &enc.dnf.cubes[i].lits, enc.dnf_prov[i]});
    }

    Witness run(Semantics sem, int k) {
        Sub t = process(0);
        Witness w;
        w.expression = kb_.finish(t.h);
        w.colors_used = next_color_ - 1;
        w.budget = witness_budget(sem, k);
        if (w.colors_used > w.budget)
            throw internal_error("witness color budget exceeded: " + std::to_string(w.colors_used) +
                                 " > " + std::to_string(w.budget));
        return w;
    }

private:
    void place(ClauseRef ref) {
        if (ref.prov.node < 0 || ref.prov.node >= x_.size())
            throw input_error("provenance gap: clause without a valid expression node");
        int node = ref.prov.node;
        // root-down definitions are drawn while processing the parent
        if ((ref.prov.eq == eq::dge_down || ref.prov.eq == eq::dge_relabel) && node != 0)
            node = parent_[node];
        at_node_[node].push_back(std::move(ref));
    }

    int famidx(const VarKey& k) const {
        for (size_t i = 0; i < fams_.size(); i++)
            if (fams_[i].first == k.kind && fams_[i].second == k.starred) return static_cast<int>(i);
        throw internal_error("witness: variable family not mapped");
    }

    // symbolic -> dense color
    int color(Role r, int fam, int c) {
        long key = ((static_cast<long>(r) * 16 + fam) * 4096) + c;
        auto it = cmap_.find(key);
        if (it != cmap_.end()) return it->second;
        cmap_[key] = next_color_;
        if (r == RChild) child_dense_.insert(next_color_);
        return next_color_++;
    }
    int global_color(int which) { // 0 arg, 1 exp, 2 cm, 3 cr
        long key = -1 - which;
        auto it = cmap_.find(key);
        if (it != cmap_.end()) return it->second;
        cmap_[key] = next_color_;
        return next_color_++;
    }
    int carg() { return global_color(0); }
    int cexp() { return global_color(1); }
    int ccm() { return global_color(2); }
    int ccr() { return global_color(3); }

    Sub mkleaf(int col, const std::string& name) {
        Sub s;
        s.h = kb_.leaf(col, name);
        s.cls[col].push_back(name);
        return s;
    }
    Sub unite(Sub a, Sub b) {
        if (a.h < 0) return b;
        if (b.h < 0) return a;
        Sub s;
        s.h = kb_.unite({a.h, b.h});
        s.cls = std::move(a.cls);
        for (auto& [c, vs] : b.cls) {
            auto& d = s.cls[c];
            d.insert(d.end(), vs.begin(), vs.end());
        }
        return s;
    }
    void relab(Sub& s, int from, int to) {
        auto it = s.cls.find(from);
        if (it == s.cls.end() || it->second.empty()) return;
        s.h = kb_.relabel(from, to, s.h);
        auto vs = std::move(it->second);
        s.cls.erase(it);
        auto& d = s.cls[to];
        d.insert(d.end(), vs.begin(), vs.end());
    }
    void edge(Sub& s, int c1, int c2) { s.h = kb_.edge(c1, c2, s.h); }

    std::string varname(int id) const { return "x" + std::to_string(id); }

    // Locates the class a literal's variable currently lives in while
    // drawing a clause of node b.
    int locate(const VarKey& k, int b) {
        if (k.kind == VarKind::ExtArg) return carg();
        int f = famidx(k);
        if (k.node == b) return color(RCur, f, k.color);
        return color(RChild, f, k.color);
    }

    struct Pending {
        int park = 0;
        bool to_cur = false; // direction of the deferred edge
        int curfam = 0, curcolor = 0;
    };

    // Wires one clause vertex. If `defer_cur` is set, edges to level-b
    // variables are postponed and the clause parks; otherwise everything
    // is drawn and the clause retires to cr.
    void wire(Sub& s, const ClauseRef& ref, int b, bool defer_cur) {
        s = unite(s, mkleaf(ccm(), ref.vertex));
        // group literals by target class
        std::map<int, std::pair<bool, std::vector<std::string>>> groups; // class -> (sign, names)
        const VarKey* deferred = nullptr;
        bool deferred_sign = false;
        for (Lit l : *ref.lits) {
            const VarKey& k = enc_.vars.key(lit_var(l));
            bool positive = l > 0;
            if (defer_cur && k.kind != VarKind::ExtArg && k.node == b) {
                if (deferred) throw internal_error("witness: two level variables in a parked clause");
                deferred = &k;
                deferred_sign = positive;
                continue;
            }
            int cls = locate(k, b);
            auto& g = groups[cls];
            if (!g.second.empty() && g.first != positive)
                throw internal_error("witness: mixed signs towards one class");
            g.first = positive;
            g.second.push_back(varname(lit_var(l)));
        }
        for (auto& [cls, g] : groups) {
            auto it = s.cls.find(cls);
            if (it == s.cls.end())
                throw internal_error("witness: literal class is empty for clause " + ref.vertex);
            std::vector<std::string> have = it->second, want = g.second;
            std::sort(have.begin(), have.end());
            std::sort(want.begin(), want.end());
            if (have != want)
                throw internal_error("witness: class contents do not match clause " + ref.vertex);
            if (g.first) edge(s, ccm(), cls); // positive: clause -> variable
            else edge(s, cls, ccm());
        }
        if (deferred) {
            int f = famidx(*deferred);
            int park = color(deferred_sign ? RParkOut : RParkIn, f, deferred->color);
            parked_[park] = {deferred_sign, f, deferred->color};
            relab(s, ccm(), park);
        } else {
            relab(s, ccm(), ccr());
        }
    }

    void flush_parks(Sub& s) {
        for (auto& [park, info] : parked_) {
            auto it = s.cls.find(park);
            if (it == s.cls.end() || it->second.empty()) continue;
            int cur = color(RCur, info.fam, info.color);
            if (info.to_cur) edge(s, park, cur); // clause -> variable
            else edge(s, cur, park);
            relab(s, park, ccr());
        }
        parked_.clear();
    }

    Sub process(int b) {
        const KNode& n = x_.node(b);
        Sub t;
        // level-b variables, one singleton class per family and color
        for (size_t f = 0; f < fams_.size(); f++)
            for (int c : st_.cols[b]) {
                int id = enc_.vars.lookup({fams_[f].first, fams_[f].second, c, b});
                if (id) t = unite(t, mkleaf(color(RCur, static_cast<int>(f), c), varname(id)));
            }

        if (n.kind == KKind::Initial) {
            wire_leaf(t, b);
        } else {
            bool multi = n.children.size() > 1;
            if (!multi) {
                Sub w = process(n.children[0]);
                t = unite(t, std::move(w));
                for (auto& ref : at_node_[b]) wire(t, ref, b, false);
            } else {
                // A clause is drawable after the merge iff each of its
                // child-level groups covers the whole merged class; anything
                // narrower must be wired against one child in isolation and
                // parked until its level variable exists.
                std::map<int, std::vector<const ClauseRef*>> per_child;
                std::vector<const ClauseRef*> big;
                std::set<int> childset(n.children.begin(), n.children.end());
                auto full_class = [&](const VarKey& k) {
                    std::set<int> owners;
                    for (int ch : n.children)
                        if (enc_.vars.lookup({k.kind, k.starred, k.color, ch})) owners.insert(ch);
                    return owners;
                };
                for (auto& ref : at_node_[b]) {
                    std::set<int> owners;
                    std::map<std::pair<int, int>, std::set<int>> groups; // (fam,color) -> nodes
                    for (Lit l : *ref.lits) {
                        const VarKey& k = enc_.vars.key(lit_var(l));
                        if (k.kind != VarKind::ExtArg && childset.count(k.node)) {
                            owners.insert(k.node);
                            groups[{famidx(k), k.color}].insert(k.node);
                        }
                    }
                    bool exact = true;
                    for (auto& [fc, nodes] : groups) {
                        VarKey probe{fams_[fc.first].first, fams_[fc.first].second, fc.second, 0};
                        if (nodes != full_class(probe)) exact = false;
                    }
                    if (exact) big.push_back(&ref);
                    else if (owners.size() == 1) per_child[*owners.begin()].push_back(&ref);
                    else throw internal_error("witness: clause spans children without covering them");
                }
                for (int ch : n.children) {
                    Sub w = process(ch);
                    for (auto* ref : per_child[ch]) wire(w, *ref, b, true);
                    t = unite(t, std::move(w));
                }
                for (auto* ref : big) wire(t, *ref, b, false);
                flush_parks(t);
            }
        }

        // retire the children's level and step this level down
        std::vector<int> childclasses;
        for (auto& [c, vs] : t.cls)
            if (child_dense_.count(c)) childclasses.push_back(c);
        for (int c : childclasses) relab(t, c, cexp());
        for (size_t f = 0; f < fams_.size(); f++)
            for (int c : st_.cols[b]) {
                int id = enc_.vars.lookup({fams_[f].first, fams_[f].second, c, b});
                if (id)
                    relab(t, color(RCur, static_cast<int>(f), c),
                          color(RChild, static_cast<int>(f), c));
            }
        return t;
    }

    void wire_leaf(Sub& t, int b) {
        // clauses touching the plain argument variable first, then the
        // starred ones, then the rest; the argument color is recycled
        auto touches_arg = [&](const ClauseRef& ref, bool star) {
            for (Lit l : *ref.lits) {
                const VarKey& k = enc_.vars.key(lit_var(l));
                if (k.kind == VarKind::ExtArg && k.starred == star) return true;
            }
            return false;
        };
        int argix = -1;
        for (size_t a = 0; a < enc_.arg_names.size(); a++)
            if (enc_.arg_names[a] == x_.node(b).vertex) argix = static_cast<int>(a);
        if (argix < 0) throw internal_error("witness: leaf argument not found");
        for (int pass = 0; pass < 3; pass++) {
            bool star = pass == 1;
            bool plain_or_star = pass < 2;
            if (plain_or_star) {
                int argvar = enc_.vars.lookup({VarKind::ExtArg, star, 0, argix});
                if (!argvar) continue;
                t = unite(t, mkleaf(carg(), varname(argvar)));
                for (auto& ref : at_node_[b])
                    if (touches_arg(ref, star)) wire(t, ref, b, false);
                relab(t, carg(), cexp());
            } else {
                for (auto& ref : at_node_[b])
                    if (!touches_arg(ref, false) && !touches_arg(ref, true)) wire(t, ref, b, false);
            }
        }
    }

    struct ParkInfo {
        bool to_cur;
        int fam, color;
    };

    const Encoding& enc_;
    const KExpr& x_;
    ColorState st_;
    std::vector<int> parent_;
    std::vector<std::pair<VarKind, bool>> fams_;
    std::vector<std::vector<ClauseRef>> at_node_;
    KExprBuilder kb_;
    std::map<long, int> cmap_;
    std::set<int> child_dense_;
    int next_color_ = 1;
    std::map<int, ParkInfo> parked_;
};

} // namespace

Witness build_witness(const Encoding& enc, const KExpr& x) {
    WitnessBuilder b(enc, x, enc.second_level);
    return b.run(enc.sem, enc.width);
}

namespace {

WitnessReport compare_graphs(const Witness& w, const Digraph& want) {
    WitnessReport rep;
    rep.colors_used = w.colors_used;
    rep.budget = w.budget;
    ColoredDigraph got = evaluate(w.expression);
    std::set<std::string> gotV(got.names.begin(), got.names.end());
    std::set<std::string> wantV(want.names.begin(), want.names.end());
    for (auto& v : wantV)
        if (!gotV.count(v)) rep.missing_vertices.push_back(v);
    for (auto& v : gotV)
        if (!wantV.count(v)) rep.extra_vertices.push_back(v);
    std::set<std::pair<std::string, std::string>> gotE, wantE;
    for (auto& [u, v] : got.edges) gotE.insert({got.names[u], got.names[v]});
    for (auto& [u, v] : want.edges) wantE.insert({want.names[u], want.names[v]});
    for (auto& e : wantE)
        if (!gotE.count(e)) {
            if (gotE.count({e.second, e.first}) && !wantE.count({e.second, e.first}))
                rep.flipped_edges.push_back(e);
            else rep.missing_edges.push_back(e);
        }
    for (auto& e : gotE)
        if (!wantE.count(e) && !(wantE.count({e.second, e.first}) && !gotE.count({e.second, e.first})))
            rep.extra_edges.push_back(e);
    return rep;
}

} // namespace

WitnessReport verify_witness(const Witness& w, const Encoding& enc) {
    return compare_graphs(w, matrix_incidence(enc));
}

std::string WitnessReport::to_string() const {
    std::ostringstream os;
    os << "colors_used=" << colors_used << " budget=" << budget << (bound_ok() ? " ok" : " OVER");
    os << " vertices=" << (vertices_ok() ? "ok" : "BAD") << " edges=" << (edges_ok() ? "ok" : "BAD")
       << " orientation=" << (orientation_ok() ? "ok" : "BAD") << "\n";
    for (auto& v : missing_vertices) os << "missing vertex " << v << "\n";
    for (auto& v : extra_vertices) os << "extra vertex " << v << "\n";
    for (auto& [u, v] : missing_edges) os << "missing edge " << u << " -> " << v << "\n";
    for (auto& [u, v] : extra_edges) os << "extra edge " << u << " -> " << v << "\n";
    for (auto& [u, v] : flipped_edges) os << "flipped edge " << u << " -> " << v << "\n";
    return os.str();
}

std::string write_witness(const Witness& w) {
    return "# k'=" + std::to_string(w.colors_used) + " budget=" + std::to_string(w.budget) + "\n" +
           serialize_kexpr(w.expression) + "\n";
}

// ------------------------------------------------------------ dnf witness

namespace {

class DnfWitnessBuilder {
public:
    DnfWitnessBuilder(const DnfConversion& conv, const KExpr& x, const VarTable& vars)
        : conv_(conv), x_(x), vars_(vars), st_(annotate(x)) {
        at_node_.resize(x.size());
        for (size_t i = 0; i < conv.dnf.cubes.size(); i++) {
            const Prov& p = conv.prov[i];
            if (p.node < 0 || p.node >= x.size()) throw input_error("provenance gap in conversion");
            at_node_[p.node].push_back(static_cast<int>(i));
        }
    }

    Witness run(int k_in) {
        Sub t = process(0);
        Witness w;
        w.expression = kb_.finish(t.h);
        w.colors_used = next_color_ - 1;
        w.budget = 6 * k_in + 4;
        if (w.colors_used > w.budget)
            throw internal_error("dnf witness color budget exceeded");
        return w;
    }

private:
    int fam_of(VarKind k) const {
        if (k == VarKind::SatAux) return 0;
        if (k == VarKind::TrueAux) return 1;
        if (k == VarKind::FalseAux) return 2;
        throw internal_error("dnf witness: unexpected variable family");
    }
    int color(int role, int fam, int c) { // role 0 = level, 1 = child bank
        long key = ((static_cast<long>(role) * 4 + fam) * 4096) + c;
        auto it = cmap_.find(key);
        if (it != cmap_.end()) return it->second;
        cmap_[key] = next_color_;
        return next_color_++;
    }
    int global_color(int which) { // 0 orig, 1 exp, 2 cm, 3 cr
        long key = -1 - which;
        auto it = cmap_.find(key);
        if (it != cmap_.end()) return it->second;
        cmap_[key] = next_color_;
        return next_color_++;
    }

    Sub mkleaf(int col, const std::string& name) {
        Sub s;
        s.h = kb_.leaf(col, name);
        s.cls[col].push_back(name);
        return s;
    }
    Sub unite(Sub a, Sub b) {
        if (a.h < 0) return b;
        if (b.h < 0) return a;
        Sub s;
        s.h = kb_.unite({a.h, b.h});
        s.cls = std::move(a.cls);
        for (auto& [c, vs] : b.cls) {
            auto& d = s.cls[c];
            d.insert(d.end(), vs.begin(), vs.end());
        }
        return s;
    }
    void relab(Sub& s, int from, int to) {
        auto it = s.cls.find(from);
        if (it == s.cls.end() || it->second.empty()) return;
        s.h = kb_.relabel(from, to, s.h);
        auto vs = std::move(it->second);
        s.cls.erase(it);
        auto& d = s.cls[to];
        d.insert(d.end(), vs.begin(), vs.end());
    }

    void wire(Sub& s, int cube_index, int b) {
        const Cube& cb = conv_.dnf.cubes[cube_index];
        s = unite(s, mkleaf(global_color(2), "t" + std::to_string(cube_index + 1)));
        for (Lit l : cb.lits) {
            const VarKey& k = vars_.key(lit_var(l));
            int cls;
            if (k.kind == VarKind::Plain) cls = global_color(0);
            else if (k.node == b) cls = color(0, fam_of(k.kind), k.color);
            else cls = color(1, fam_of(k.kind), k.color);
            auto it = s.cls.find(cls);
            if (it == s.cls.end() || it->second.size() != 1 ||
                it->second[0] != "x" + std::to_string(lit_var(l)))
                throw internal_error("dnf witness: class mismatch");
            if (l > 0) s.h = kb_.edge(global_color(2), cls, s.h); // term -> variable
            else s.h = kb_.edge(cls, global_color(2), s.h);
        }
        relab(s, global_color(2), global_color(3));
    }

    Sub process(int b) {
        const KNode& n = x_.node(b);
        Sub t;
        if (n.kind == KKind::Initial) {
            if (n.vertex[0] == 'x') t = unite(t, mkleaf(global_color(0), n.vertex));
            intro_heads(t, b);
            for (int ci : at_node_[b]) wire(t, ci, b);
            relab(t, global_color(0), global_color(1));
        } else {
            // children must be color-disjoint at unions so that the child
            // banks stay singletons
            if (n.kind == KKind::Union) {
                std::set<int> seen;
                for (int ch : n.children)
                    for (int c : st_.cols[ch])
                        if (!seen.insert(c).second)
                            throw input_error("dnf witness requires color-disjoint unions");
            }
            std::set<int> childcols;
            for (int ch : n.children) {
                Sub w = process(ch);
                t = unite(t, std::move(w));
                for (int c : st_.cols[ch]) childcols.insert(c);
            }
            for (int c : childcols)
                for (int f = 0; f < 3; f++) relab(t, color(0, f, c), color(1, f, c));
            intro_heads(t, b);
            for (int ci : at_node_[b]) wire(t, ci, b);
            for (int c : childcols)
                for (int f = 0; f < 3; f++) relab(t, color(1, f, c), global_color(1));
        }
        return t;
    }

    void intro_heads(Sub& t, int b) {
        const VarKind kinds[3] = {VarKind::SatAux, VarKind::TrueAux, VarKind::FalseAux};
        for (int c : st_.cols[b])
            for (int f = 0; f < 3; f++) {
                int id = vars_.lookup({kinds[f], false, c, b});
                if (id) t = unite(t, mkleaf(color(0, f, c), "x" + std::to_string(id)));
            }
    }

    const DnfConversion& conv_;
    const KExpr& x_;
    const VarTable& vars_;
    ColorState st_;
    std::vector<std::vector<int>> at_node_;
    KExprBuilder kb_;
    std::map<long, int> cmap_;
    int next_color_ = 1;
};

} // namespace

Witness build_dnf_witness(const DnfConversion& conv, const KExpr& x_cnf, const VarTable& vars) {
    DnfWitnessBuilder b(conv, x_cnf, vars);
    return b.run(x_cnf.width);
}

WitnessReport verify_dnf_witness(const Witness& w, const DnfConversion& conv) {
    return compare_graphs(w, incidence_digraph(conv.dnf));
}

DnfMatrixResult convert_matrix(const Encoding& enc, const KExpr& x) {
    if (!enc.second_level) throw input_error("matrix conversion applies to second-level encodings");
    // outer part only: the conversion consumes an expression of the CNF
    // part's incidence graph
    WitnessBuilder wb(enc, x, false);
    Witness cnf_witness = wb.run(enc.sem, enc.width);

    DnfMatrixResult res;
    res.vars = enc.vars;
    res.cnf_expression = cnf_witness.expression;
    res.conv = dnf_convert(enc.cnf, res.cnf_expression, res.vars);

    Qbf2 q;
    q.num_vars = res.vars.count();
    q.inner_forall = true;
    q.inner_vars = enc.inner_vars;
    for (int v : res.conv.aux_vars) q.inner_vars.push_back(v);
    std::vector<bool> inner(q.num_vars + 1, false);
    for (int v : q.inner_vars) inner[v] = true;
    for (int v = 1; v <= q.num_vars; v++)
        if (!inner[v]) q.free_vars.push_back(v);
    q.cnf_part = std::nullopt;
    Dnf dnf;
    dnf.num_vars = q.num_vars;
    // definitional cubes, except the root cube, which is folded into every
    // original cube: a cube fires only when the conversion certifies the
    // CNF part
    for (size_t i = 0; i + 1 < res.conv.dnf.cubes.size(); i++) dnf.cubes.push_back(res.conv.dnf.cubes[i]);
    for (auto& cb : enc.dnf.cubes) {
        Cube c2 = cb;
        for (int v : res.conv.root_sat_vars) c2.lits.push_back(v);
        c2.normalize();
        dnf.cubes.push_back(std::move(c2));
    }
    q.dnf_part = std::move(dnf);
    res.qbf = std::move(q);
    return res;
}

} // namespace cwsat
