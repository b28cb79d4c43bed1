#include "cwsat/encoder.hpp"

#include <algorithm>
#include <sstream>

namespace cwsat {

namespace {

struct Sink {
    std::vector<Clause> clauses;
    std::vector<Prov> prov;
    std::vector<long> seq; // tiebreaker: emission order

    void sort_canonical() {
        std::vector<size_t> idx(clauses.size());
        for (size_t i = 0; i < idx.size(); i++) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            const Prov &pa = prov[a], &pb = prov[b];
            if (pa.node != pb.node) return pa.node < pb.node;
            if (pa.eq != pb.eq) return pa.eq < pb.eq;
            if (pa.star != pb.star) return pa.star < pb.star;
            if (pa.color != pb.color) return pa.color < pb.color;
            return seq[a] < seq[b];
        });
        std::vector<Clause> c2;
        std::vector<Prov> p2;
        for (size_t i : idx) {
            c2.push_back(std::move(clauses[i]));
            p2.push_back(prov[i]);
        }
        clauses = std::move(c2);
        prov = std::move(p2);
    }
};

struct Ctx {
    const Af& af;
    const KExpr& x;
    const ColorState& st;
    std::vector<int> parent;
    VarTable& vars;
    Sink* sink = nullptr;
    long counter = 0;

    int var(VarKind kind, bool star, int color, int node) {
        int id = vars.lookup({kind, star, color, node});
        if (id == 0) throw internal_error("encoder referenced unregistered variable");
        return id;
    }
    int arg_var(bool star, int arg) { return var(VarKind::ExtArg, star, 0, arg); }

    void def(int node, int eqtag, int color, bool star, const Definition& d) {
        int before = static_cast<int>(sink->clauses.size());
        clausify_def(d, sink->clauses);
        for (int i = before; i < static_cast<int>(sink->clauses.size()); i++) {
            sink->prov.push_back({node, eqtag, color, star});
            sink->seq.push_back(counter++);
        }
    }
    void clause(int node, int eqtag, int color, bool star, std::vector<Lit> lits) {
        Clause cl{std::move(lits)};
        cl.normalize();
        sink->clauses.push_back(std::move(cl));
        sink->prov.push_back({node, eqtag, color, star});
        sink->seq.push_back(counter++);
    }
};

std::vector<Lit> dedup(std::vector<Lit> v) {
    std::vector<Lit> out;
    for (Lit l : v)
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    return out;
}

// Equations (1)-(4): extension-color propagation and conflict clauses.
void emit_cf_layer(Ctx& cx, bool star) {
    const KExpr& x = cx.x;
    for (int b = 0; b < x.size(); b++) {
        const KNode& n = x.node(b);
        switch (n.kind) {
            case KKind::Initial: {
                int arg = cx.af.arg_index(n.vertex);
                cx.def(b, eq::cf_leaf, n.color, star,
                       Definition::iff_and(cx.var(VarKind::Ext, star, n.color, b),
                                           {cx.arg_var(star, arg)}));
                break;
            }
            case KKind::Union:
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    for (int ch : n.children)
                        if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Ext, star, c, ch));
                    cx.def(b, eq::cf_union, c, star,
                           Definition::iff_or(cx.var(VarKind::Ext, star, c, b), body));
                }
                break;
            case KKind::Relabel: {
                int ch = n.children[0];
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    if (c == n.color2 && cx.st.live(ch, n.color))
                        body.push_back(cx.var(VarKind::Ext, star, n.color, ch));
                    if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Ext, star, c, ch));
                    cx.def(b, eq::cf_relabel, c, star,
                           Definition::iff_or(cx.var(VarKind::Ext, star, c, b), dedup(body)));
                }
                break;
            }
            case KKind::EdgeIntro: {
                int ch = n.children[0];
                // the conflict clause for the introduced pair
                cx.clause(b, eq::cf_edge, 0, star,
                          {-cx.var(VarKind::Ext, star, n.color, b),
                           -cx.var(VarKind::Ext, star, n.color2, b)});
                for (int c : cx.st.cols[b])
                    cx.def(b, eq::cf_edge, c, star,
                           Definition::iff_or(cx.var(VarKind::Ext, star, c, b),
                                              {cx.var(VarKind::Ext, star, c, ch)}));
                break;
            }
        }
    }
}

// Equations (5)-(8) and optionally the root units (9).
void emit_defeat_layer(Ctx& cx, bool star, bool root_units) {
    const KExpr& x = cx.x;
    for (int b = 0; b < x.size(); b++) {
        const KNode& n = x.node(b);
        switch (n.kind) {
            case KKind::Initial:
                for (int c : cx.st.cols[b])
                    cx.def(b, eq::d_leaf, c, star,
                           Definition::iff_and(cx.var(VarKind::Defeat, star, c, b),
                                               {cx.var(VarKind::Ext, star, c, b)}));
                break;
            case KKind::Union:
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    for (int ch : n.children)
                        if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Defeat, star, c, ch));
                    cx.def(b, eq::d_union, c, star,
                           Definition::iff_and(cx.var(VarKind::Defeat, star, c, b), body));
                }
                break;
            case KKind::Relabel: {
                int ch = n.children[0];
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    if (c == n.color2 && cx.st.live(ch, n.color))
                        body.push_back(cx.var(VarKind::Defeat, star, n.color, ch));
                    if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Defeat, star, c, ch));
                    cx.def(b, eq::d_relabel, c, star,
                           Definition::iff_and(cx.var(VarKind::Defeat, star, c, b), dedup(body)));
                }
                break;
            }
            case KKind::EdgeIntro: {
                int ch = n.children[0];
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body{cx.var(VarKind::Defeat, star, c, ch)};
                    if (c == n.color2) body.push_back(cx.var(VarKind::Ext, star, n.color, b));
                    cx.def(b, eq::d_edge, c, star,
                           Definition::iff_or(cx.var(VarKind::Defeat, star, c, b), body));
                }
                break;
            }
        }
    }
    if (root_units)
        for (int c : cx.st.cols[0])
            cx.clause(0, eq::d_root, c, star, {cx.var(VarKind::Defeat, star, c, 0)});
}

// Equations (10)-(14) and optionally the root units (15).
void emit_attack_layer(Ctx& cx, bool star, bool root_units) {
    const KExpr& x = cx.x;
    for (int b = 0; b < x.size(); b++) {
        const KNode& n = x.node(b);
        switch (n.kind) {
            case KKind::Initial:
                for (int c : cx.st.cols[b])
                    cx.clause(b, eq::a_leaf, c, star, {-cx.var(VarKind::Attack, star, c, b)});
                break;
            case KKind::Union:
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    for (int ch : n.children)
                        if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Attack, star, c, ch));
                    cx.def(b, eq::a_union, c, star,
                           Definition::iff_or(cx.var(VarKind::Attack, star, c, b), body));
                }
                break;
            case KKind::Relabel: {
                int ch = n.children[0];
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    if (c == n.color2 && cx.st.live(ch, n.color))
                        body.push_back(cx.var(VarKind::Attack, star, n.color, ch));
                    if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Attack, star, c, ch));
                    cx.def(b, eq::a_relabel, c, star,
                           Definition::iff_or(cx.var(VarKind::Attack, star, c, b), dedup(body)));
                }
                break;
            }
            case KKind::EdgeIntro: {
                int ch = n.children[0];
                for (int c : cx.st.cols[b]) {
                    if (c == n.color2) {
                        // color under attack from c1: cleared when the extension
                        // holds a c1 member that now attacks all of c
                        cx.def(b, eq::a_edge_tgt, c, star,
                               Definition::iff_and(cx.var(VarKind::Attack, star, c, b),
                                                   {cx.var(VarKind::Attack, star, c, ch),
                                                    -cx.var(VarKind::Ext, star, n.color, b)}));
                    } else if (c == n.color) {
                        // a fresh attack on the extension registers only while
                        // the attacking color is not already defeated; without
                        // the guard the flag depends on the order in which the
                        // attack and its counter-attack are introduced
                        cx.def(b, eq::a_edge_src, c, star,
                               Definition::iff_or_with_group(
                                   cx.var(VarKind::Attack, star, c, b),
                                   {cx.var(VarKind::Attack, star, c, ch)},
                                   {cx.var(VarKind::Ext, star, n.color2, b),
                                    -cx.var(VarKind::Defeat, star, c, b)}));
                    } else {
                        cx.def(b, eq::a_edge_src, c, star,
                               Definition::iff_or(cx.var(VarKind::Attack, star, c, b),
                                                  {cx.var(VarKind::Attack, star, c, ch)}));
                    }
                }
                break;
            }
        }
    }
    if (root_units)
        for (int c : cx.st.cols[0])
            cx.clause(0, eq::a_root, c, star, {-cx.var(VarKind::Attack, star, c, 0)});
}

// Equations (16)-(20) plus the root-down defeat information (21)-(23) and
// the complete-semantics root units (24). Plain layer only.
void emit_out_layers(Ctx& cx) {
    const KExpr& x = cx.x;
    const bool star = false;
    for (int b = 0; b < x.size(); b++) {
        const KNode& n = x.node(b);
        switch (n.kind) {
            case KKind::Initial:
                for (int c : cx.st.cols[b])
                    cx.def(b, eq::o_leaf, c, star,
                           Definition::iff_and(cx.var(VarKind::Out, star, c, b),
                                               {-cx.var(VarKind::Ext, star, c, b)}));
                break;
            case KKind::Union:
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    for (int ch : n.children)
                        if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Out, star, c, ch));
                    cx.def(b, eq::o_union, c, star,
                           Definition::iff_or(cx.var(VarKind::Out, star, c, b), body));
                }
                break;
            case KKind::Relabel: {
                int ch = n.children[0];
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    if (c == n.color2 && cx.st.live(ch, n.color))
                        body.push_back(cx.var(VarKind::Out, star, n.color, ch));
                    if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Out, star, c, ch));
                    cx.def(b, eq::o_relabel, c, star,
                           Definition::iff_or(cx.var(VarKind::Out, star, c, b), dedup(body)));
                }
                break;
            }
            case KKind::EdgeIntro: {
                int ch = n.children[0];
                for (int c : cx.st.cols[b]) {
                    if (c == n.color2) {
                        // left out correctly only if the attacking color gets
                        // defeated at this operation or above; the (c != c')
                        // guard holds by construction and is not materialized
                        cx.def(b, eq::o_edge_tgt, c, star,
                               Definition::iff_and(cx.var(VarKind::Out, star, c, b),
                                                   {cx.var(VarKind::Out, star, c, ch),
                                                    cx.var(VarKind::DefeatGe, star, n.color, b)}));
                    } else {
                        Definition d;
                        d.head = cx.var(VarKind::Out, star, c, b);
                        d.body.push_back(Conjunct::of(cx.var(VarKind::Out, star, c, ch)));
                        if (c == n.color)
                            d.body.push_back(Conjunct::of(-cx.var(VarKind::Ext, star, n.color2, b)));
                        cx.def(b, eq::o_edge_src, c, star, d);
                    }
                }
                break;
            }
        }
    }
    // d>= is seeded at the root and flows towards the leaves; level-order
    // node ids make the ascending scan a valid root-down order.
    for (int b = 0; b < x.size(); b++) {
        const KNode& n = x.node(b);
        for (int c : cx.st.cols[b]) {
            std::vector<Lit> body;
            int tag;
            if (b == 0) {
                tag = eq::dge_root;
            } else {
                int p = cx.parent[b];
                const KNode& pn = x.node(p);
                if (pn.kind == KKind::Relabel) {
                    tag = eq::dge_relabel;
                    if (c == pn.color && cx.st.live(p, pn.color2))
                        body.push_back(cx.var(VarKind::DefeatGe, star, pn.color2, p));
                    if (cx.st.live(p, c)) body.push_back(cx.var(VarKind::DefeatGe, star, c, p));
                } else {
                    tag = eq::dge_down;
                    body.push_back(cx.var(VarKind::DefeatGe, star, c, p));
                }
            }
            if (n.kind == KKind::EdgeIntro && c == n.color2)
                body.push_back(cx.var(VarKind::Ext, star, n.color, b));
            cx.def(b, tag, c, star,
                   Definition::iff_or(cx.var(VarKind::DefeatGe, star, c, b), dedup(body)));
        }
    }
    for (int c : cx.st.cols[0]) {
        cx.clause(0, eq::com_root, c, star, {-cx.var(VarKind::Attack, star, c, 0)});
        cx.clause(0, eq::com_root, c, star, {-cx.var(VarKind::Out, star, c, 0)});
    }
}

// Subset layer for preferred (26)-(31): s tracks extension growth.
void emit_subset_pref(Ctx& cx) {
    const KExpr& x = cx.x;
    for (int b = 0; b < x.size(); b++) {
        const KNode& n = x.node(b);
        switch (n.kind) {
            case KKind::Initial: {
                int c = n.color;
                cx.def(b, eq::s_leaf, c, false,
                       Definition::iff_and(cx.var(VarKind::Subset, false, c, b),
                                           {cx.var(VarKind::Ext, true, c, b),
                                            -cx.var(VarKind::Ext, false, c, b)}));
                cx.clause(b, eq::subset_leaf, c, false,
                          {-cx.var(VarKind::Ext, false, c, b), cx.var(VarKind::Ext, true, c, b)});
                break;
            }
            case KKind::Union:
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    for (int ch : n.children)
                        if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Subset, false, c, ch));
                    cx.def(b, eq::s_union, c, false,
                           Definition::iff_or(cx.var(VarKind::Subset, false, c, b), body));
                }
                break;
            case KKind::Relabel: {
                int ch = n.children[0];
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    if (c == n.color2 && cx.st.live(ch, n.color))
                        body.push_back(cx.var(VarKind::Subset, false, n.color, ch));
                    if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Subset, false, c, ch));
                    cx.def(b, eq::s_relabel, c, false,
                           Definition::iff_or(cx.var(VarKind::Subset, false, c, b), dedup(body)));
                }
                break;
            }
            case KKind::EdgeIntro: {
                int ch = n.children[0];
                for (int c : cx.st.cols[b])
                    cx.def(b, eq::s_edge, c, false,
                           Definition::iff_or(cx.var(VarKind::Subset, false, c, b),
                                              {cx.var(VarKind::Subset, false, c, ch)}));
                break;
            }
        }
    }
    std::vector<Lit> root;
    for (int c : cx.st.cols[0]) root.push_back(cx.var(VarKind::Subset, false, c, 0));
    cx.clause(0, eq::pref_root, 0, false, std::move(root));
}

// Subset layer for semi-stable and stage (33)-(37): s tracks range growth
// through the defeat layers on both sides.
void emit_subset_range(Ctx& cx) {
    const KExpr& x = cx.x;
    for (int b = 0; b < x.size(); b++) {
        const KNode& n = x.node(b);
        switch (n.kind) {
            case KKind::Initial:
                for (int c : cx.st.cols[b])
                    cx.def(b, eq::r_leaf, c, false,
                           Definition::iff_and(cx.var(VarKind::Subset, false, c, b),
                                               {cx.var(VarKind::Defeat, true, c, b),
                                                -cx.var(VarKind::Defeat, false, c, b)}));
                break;
            case KKind::Union:
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    for (int ch : n.children)
                        if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Subset, false, c, ch));
                    cx.def(b, eq::r_union, c, false,
                           Definition::iff_or(cx.var(VarKind::Subset, false, c, b), body));
                }
                break;
            case KKind::Relabel: {
                int ch = n.children[0];
                for (int c : cx.st.cols[b]) {
                    std::vector<Lit> body;
                    if (c == n.color2 && cx.st.live(ch, n.color))
                        body.push_back(cx.var(VarKind::Subset, false, n.color, ch));
                    if (cx.st.live(ch, c)) body.push_back(cx.var(VarKind::Subset, false, c, ch));
                    cx.def(b, eq::r_relabel, c, false,
                           Definition::iff_or(cx.var(VarKind::Subset, false, c, b), dedup(body)));
                }
                break;
            }
            case KKind::EdgeIntro: {
                int ch = n.children[0];
                for (int c : cx.st.cols[b]) {
                    Definition d;
                    d.head = cx.var(VarKind::Subset, false, c, b);
                    d.body.push_back(Conjunct::any_of({cx.var(VarKind::Subset, false, c, ch),
                                                       cx.var(VarKind::Defeat, true, c, b)}));
                    d.body.push_back(Conjunct::of(-cx.var(VarKind::Defeat, false, c, b)));
                    cx.def(b, eq::r_edge, c, false, d);
                }
                break;
            }
        }
    }
    for (int c : cx.st.cols[0])
        cx.clause(0, eq::range_root, c, false,
                  {-cx.var(VarKind::Defeat, false, c, 0), cx.var(VarKind::Defeat, true, c, 0)});
    std::vector<Lit> root;
    for (int c : cx.st.cols[0]) root.push_back(cx.var(VarKind::Subset, false, c, 0));
    cx.clause(0, eq::range_root, 0, false, std::move(root));
}

struct SemanticsPlan {
    bool ext_plain = true, ext_star = false;
    bool defeat_plain = false, defeat_star = false;
    bool attack_plain = false, attack_star = false;
    bool out_plain = false;
    bool subset = false;
};

SemanticsPlan plan_for(Semantics sem) {
    SemanticsPlan p;
    switch (sem) {
        case Semantics::ConflictFree: break;
        case Semantics::Stable: p.defeat_plain = true; break;
        case Semantics::Admissible: p.attack_plain = true; break;
        case Semantics::Complete: p.attack_plain = p.out_plain = true; break;
        case Semantics::Preferred:
            p.attack_plain = true;
            p.ext_star = p.attack_star = p.subset = true;
            break;
        case Semantics::SemiStable:
            p.attack_plain = p.defeat_plain = true;
            p.ext_star = p.attack_star = p.defeat_star = p.subset = true;
            break;
        case Semantics::Stage:
            p.defeat_plain = true;
            p.ext_star = p.defeat_star = p.subset = true;
            break;
    }
    // the attack layer's registration guard reads the defeat layer
    if (p.attack_plain) p.defeat_plain = true;
    if (p.attack_star) p.defeat_star = true;
    return p;
}

void register_vars(VarTable& vars, const Af& af, const KExpr& x, const ColorState& st,
                   const SemanticsPlan& p) {
    for (int a = 0; a < af.arg_count(); a++) vars.ensure({VarKind::ExtArg, false, 0, a});
    if (p.ext_star)
        for (int a = 0; a < af.arg_count(); a++) vars.ensure({VarKind::ExtArg, true, 0, a});
    for (int b = 0; b < x.size(); b++)
        for (int c : st.cols[b]) {
            vars.ensure({VarKind::Ext, false, c, b});
            if (p.ext_star) vars.ensure({VarKind::Ext, true, c, b});
            if (p.defeat_plain) vars.ensure({VarKind::Defeat, false, c, b});
            if (p.defeat_star) vars.ensure({VarKind::Defeat, true, c, b});
            if (p.attack_plain) vars.ensure({VarKind::Attack, false, c, b});
            if (p.attack_star) vars.ensure({VarKind::Attack, true, c, b});
            if (p.out_plain) {
                vars.ensure({VarKind::Out, false, c, b});
                vars.ensure({VarKind::DefeatGe, false, c, b});
            }
            if (p.subset) vars.ensure({VarKind::Subset, false, c, b});
        }
}

} // namespace

Encoding encode(const Af& af, const KExpr& x, Semantics sem) {
    if (af.has_self_attack())
        throw input_error("self-attacking framework cannot be encoded (edge introduction needs "
                          "distinct colors)");
    ValidationReport rep = validate(x, af);
    if (!rep.ok()) throw input_error("expression does not define the framework:\n" + rep.to_string());

    ColorState st = annotate(x);
    Encoding enc;
    enc.sem = sem;
    enc.second_level = semantics_second_level(sem);
    enc.width = x.width;

    SemanticsPlan p = plan_for(sem);
    register_vars(enc.vars, af, x, st, p);

    Ctx cx{af, x, st, x.parents(), enc.vars};

    Sink outer;
    cx.sink = &outer;
    emit_cf_layer(cx, false);
    if (p.defeat_plain) emit_defeat_layer(cx, false, sem == Semantics::Stable);
    if (p.attack_plain)
        emit_attack_layer(cx, false,
                          sem == Semantics::Admissible || sem == Semantics::Preferred ||
                              sem == Semantics::SemiStable);
    if (sem == Semantics::Complete) emit_out_layers(cx);
    outer.sort_canonical();
    enc.cnf.clauses = std::move(outer.clauses);
    enc.cnf_prov = std::move(outer.prov);

    if (enc.second_level) {
        Sink inner;
        cx.sink = &inner;
        cx.counter = 0;
        emit_cf_layer(cx, true);
        if (p.defeat_star) emit_defeat_layer(cx, true, false);
        if (p.attack_star) emit_attack_layer(cx, true, true);
        if (sem == Semantics::Preferred) emit_subset_pref(cx);
        else emit_subset_range(cx);
        inner.sort_canonical();
        for (auto& cl : inner.clauses) {
            Cube cb;
            for (Lit l : cl.lits) cb.lits.push_back(-l);
            cb.normalize();
            enc.dnf.cubes.push_back(std::move(cb));
        }
        enc.dnf_prov = std::move(inner.prov);
        for (int v = 1; v <= enc.vars.count(); v++) {
            const VarKey& k = enc.vars.key(v);
            if (k.starred || k.kind == VarKind::Subset) enc.inner_vars.push_back(v);
        }
    }

    enc.num_vars = enc.vars.count();
    enc.cnf.num_vars = enc.num_vars;
    enc.dnf.num_vars = enc.second_level ? enc.num_vars : 0;
    for (int a = 0; a < af.arg_count(); a++)
        enc.ext_vars.push_back(enc.vars.lookup({VarKind::ExtArg, false, 0, a}));
    enc.arg_names = af.args;
    return enc;
}

Qbf2 Encoding::to_qbf2() const {
    Qbf2 q;
    q.num_vars = num_vars;
    q.inner_forall = true;
    q.inner_vars = inner_vars;
    std::vector<bool> inner(num_vars + 1, false);
    for (int v : inner_vars) inner[v] = true;
    for (int v = 1; v <= num_vars; v++)
        if (!inner[v]) q.free_vars.push_back(v);
    q.cnf_part = cnf;
    if (second_level) q.dnf_part = dnf;
    return q;
}

Encoding assert_acceptance(Encoding enc, int arg, AcceptMode mode) {
    if (arg < 0 || arg >= static_cast<int>(enc.ext_vars.size()))
        throw input_error("unknown argument");
    int v = enc.ext_vars[arg];
    Clause cl{{mode == AcceptMode::Credulous ? v : -v}};
    enc.cnf.clauses.push_back(cl);
    enc.cnf_prov.push_back({-1, eq::assert_unit, 0, false});
    enc.answer_flip = mode == AcceptMode::Skeptical;
    return enc;
}

std::string provenance_text(const Encoding& enc) {
    std::ostringstream os;
    for (size_t i = 0; i < enc.cnf.clauses.size(); i++) {
        const Prov& p = enc.cnf_prov[i];
        os << i + 1 << " " << p.node << " eq" << p.eq << (p.star ? "*" : "") << "\n";
    }
    for (size_t i = 0; i < enc.dnf.cubes.size(); i++) {
        const Prov& p = enc.dnf_prov[i];
        os << "t" << i + 1 << " " << p.node << " eq" << p.eq << (p.star ? "*" : "") << "\n";
    }
    return os.str();
}

VarTable plain_table(int n) {
    VarTable t;
    for (int v = 1; v <= n; v++) t.ensure({VarKind::Plain, false, 0, v});
    return t;
}

DnfConversion dnf_convert(const Cnf& cnf, const KExpr& x_cnf, VarTable& vars) {
    // The leaves of x_cnf must name the incidence vertices: x<i> for
    // variables, c<j> for clauses.
    Digraph want = incidence_digraph(cnf);
    ColoredDigraph got = evaluate(x_cnf);
    if (got.names.size() != want.names.size())
        throw input_error("dnf_convert: expression does not match the incidence graph (vertex count)");
    for (auto& nm : got.names)
        if (!want.index.count(nm))
            throw input_error("dnf_convert: unknown incidence vertex " + nm);
    std::set<std::pair<std::string, std::string>> gotE, wantE;
    for (auto& [u, v] : got.edges) gotE.insert({got.names[u], got.names[v]});
    for (auto& [u, v] : want.edges) wantE.insert({want.names[u], want.names[v]});
    if (gotE != wantE)
        throw input_error("dnf_convert: expression does not match the incidence graph (edges)");

    ColorState st = annotate(x_cnf);
    // per node, per color: does the class hold clause vertices, variable
    // vertices, or both
    auto side_of = [&](int node, int c) {
        bool has_var = false, has_clause = false;
        for (auto& [name, col] : st.col[node])
            if (col == c) {
                if (name[0] == 'x') has_var = true;
                else has_clause = true;
            }
        return std::pair{has_var, has_clause};
    };

    DnfConversion conv;
    std::vector<Definition> defs;
    std::vector<Prov> defprov;
    auto sat = [&](int c, int b) { return vars.ensure({VarKind::SatAux, false, c, b}); };
    auto tv = [&](int c, int b) { return vars.ensure({VarKind::TrueAux, false, c, b}); };
    auto fv = [&](int c, int b) { return vars.ensure({VarKind::FalseAux, false, c, b}); };
    auto add = [&](int node, int eqtag, int color, Definition d) {
        defs.push_back(std::move(d));
        defprov.push_back({node, eqtag, color, false});
    };

    for (int b = 0; b < x_cnf.size(); b++) {
        const KNode& n = x_cnf.node(b);
        switch (n.kind) {
            case KKind::Initial: {
                int c = n.color;
                if (n.vertex[0] == 'x') {
                    int orig = std::stoi(n.vertex.substr(1));
                    add(b, eq::conv_var_leaf, c, Definition{sat(c, b), false, {}});
                    add(b, eq::conv_var_leaf, c, Definition::iff_and(tv(c, b), {orig}));
                    add(b, eq::conv_var_leaf, c, Definition::iff_and(fv(c, b), {-orig}));
                } else {
                    add(b, eq::conv_clause_leaf, c, Definition{sat(c, b), false, {Conjunct::any_of({})}});
                    add(b, eq::conv_clause_leaf, c, Definition{tv(c, b), false, {Conjunct::any_of({})}});
                    add(b, eq::conv_clause_leaf, c, Definition{fv(c, b), false, {Conjunct::any_of({})}});
                }
                break;
            }
            case KKind::Union:
                for (int c : st.cols[b]) {
                    std::vector<Lit> sb, tb, fb;
                    for (int ch : n.children)
                        if (st.live(ch, c)) {
                            sb.push_back(sat(c, ch));
                            tb.push_back(tv(c, ch));
                            fb.push_back(fv(c, ch));
                        }
                    add(b, eq::conv_union, c, Definition::iff_and(sat(c, b), sb));
                    add(b, eq::conv_union, c, Definition::iff_or(tv(c, b), tb));
                    add(b, eq::conv_union, c, Definition::iff_or(fv(c, b), fb));
                }
                break;
            case KKind::Relabel: {
                int ch = n.children[0];
                for (int c : st.cols[b]) {
                    std::vector<Lit> sb, tb, fb;
                    if (c == n.color2 && st.live(ch, n.color)) {
                        sb.push_back(sat(n.color, ch));
                        tb.push_back(tv(n.color, ch));
                        fb.push_back(fv(n.color, ch));
                    }
                    if (st.live(ch, c)) {
                        sb.push_back(sat(c, ch));
                        tb.push_back(tv(c, ch));
                        fb.push_back(fv(c, ch));
                    }
                    add(b, eq::conv_relabel, c, Definition::iff_and(sat(c, b), dedup(sb)));
                    add(b, eq::conv_relabel, c, Definition::iff_or(tv(c, b), dedup(tb)));
                    add(b, eq::conv_relabel, c, Definition::iff_or(fv(c, b), dedup(fb)));
                }
                break;
            }
            case KKind::EdgeIntro: {
                int ch = n.children[0];
                auto [svar, sclause] = side_of(ch, n.color);
                auto [tvar, tclause] = side_of(ch, n.color2);
                int clause_color = -1;
                Lit extra = 0;
                if (sclause && tvar && !svar && !tclause) {
                    // positive edges clause -> variable: a true variable of the
                    // target color satisfies the source clauses
                    clause_color = n.color;
                    extra = tv(n.color2, b);
                } else if (svar && tclause && !sclause && !tvar) {
                    clause_color = n.color2;
                    extra = fv(n.color, b);
                } else if ((svar || sclause) && (tvar || tclause)) {
                    throw input_error("dnf_convert: mixed clause/variable color at edge introduction");
                }
                for (int c : st.cols[b]) {
                    std::vector<Lit> sb{sat(c, ch)};
                    if (c == clause_color) sb.push_back(extra);
                    add(b, eq::conv_edge, c, Definition::iff_or(sat(c, b), sb));
                    add(b, eq::conv_edge, c, Definition::iff_or(tv(c, b), {tv(c, ch)}));
                    add(b, eq::conv_edge, c, Definition::iff_or(fv(c, b), {fv(c, ch)}));
                }
                break;
            }
        }
    }

    // defs plus the negated root units form the clause set; negating the
    // whole set gives the DNF, so the root clause becomes the cube that
    // asserts satisfaction for every root color.
    for (size_t i = 0; i < defs.size(); i++) {
        int before = static_cast<int>(conv.defs_cnf.clauses.size());
        clausify_def(defs[i], conv.defs_cnf.clauses);
        for (int j = before; j < static_cast<int>(conv.defs_cnf.clauses.size()); j++)
            conv.prov.push_back(defprov[i]);
    }
    Clause root;
    for (int c : st.cols[0]) {
        root.lits.push_back(-sat(c, 0));
        conv.root_sat_vars.push_back(sat(c, 0));
    }
    root.normalize();
    conv.defs_cnf.clauses.push_back(root);
    conv.prov.push_back({0, eq::conv_root, 0, false});

    conv.num_vars = vars.count();
    conv.defs_cnf.num_vars = conv.num_vars;
    conv.dnf.num_vars = conv.num_vars;
    for (auto& cl : conv.defs_cnf.clauses) {
        Cube cb;
        for (Lit l : cl.lits) cb.lits.push_back(-l);
        cb.normalize();
        conv.dnf.cubes.push_back(std::move(cb));
    }
    for (int v = cnf.num_vars + 1; v <= conv.num_vars; v++) conv.aux_vars.push_back(v);
    return conv;
}

} // namespace cwsat
