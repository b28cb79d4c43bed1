#include "doctest.h"

#include <random>

#include "cwsat/solver.hpp"
#include "cwsat/witness.hpp"
#include "helpers.hpp"

using namespace cwsat;
using namespace cwsat::test;

namespace {

const Semantics kAll[] = {Semantics::ConflictFree, Semantics::Admissible, Semantics::Complete,
                          Semantics::Stable,       Semantics::Preferred,  Semantics::SemiStable,
                          Semantics::Stage};

}

TEST_CASE("witness on the running example, all semantics") {
    Af af = fig1();
    KExpr x = fig2();
    for (Semantics sem : kAll) {
        CAPTURE(semantics_name(sem));
        Encoding enc = encode(af, x, sem);
        Witness w = build_witness(enc, x);
        WitnessReport rep = verify_witness(w, enc);
        CHECK(rep.ok());
        CHECK(w.colors_used <= witness_budget(sem, x.width));
    }
    CHECK(witness_budget(Semantics::Stable, 3) == 35);
    CHECK(witness_budget(Semantics::Complete, 3) == 70);
    CHECK(witness_budget(Semantics::Preferred, 3) == 85);
    CHECK(witness_budget(Semantics::Stage, 3) == 100);
}

TEST_CASE("witness on trivial and searched expressions") {
    std::mt19937_64 rng(55);
    for (int i = 0; i < 8; i++) {
        Af af = random_af(3 + static_cast<int>(rng() % 3), rng);
        KExpr x = trivial_expression(af);
        for (Semantics sem : kAll) {
            Encoding enc = encode(af, x, sem);
            Witness w = build_witness(enc, x);
            CHECK(verify_witness(w, enc).ok());
        }
    }
    Af left = parse_apx(kFig3LeftApx);
    SearchResult r = search_expression(left, 2);
    REQUIRE(r.status == SearchStatus::Found);
    for (Semantics sem : kAll) {
        Encoding enc = encode(left, *r.expr, sem);
        Witness w = build_witness(enc, *r.expr);
        CHECK(verify_witness(w, enc).ok());
        CHECK(w.budget == witness_budget(sem, r.expr->width));
    }
}

TEST_CASE("single leaf witness validates against the tiny incidence graph") {
    Af af = parse_apx("arg(a).");
    KExpr x = parse_kexpr("1(a)");
    Encoding enc = encode(af, x, Semantics::ConflictFree);
    Witness w = build_witness(enc, x);
    WitnessReport rep = verify_witness(w, enc);
    CHECK(rep.ok());
    ColoredDigraph g = evaluate(w.expression);
    CHECK(g.names.size() == 4); // e_a, e_1^0, two clauses
    CHECK(g.edges.size() == 4);
}

TEST_CASE("self-consistency of verify on a correct witness") {
    Af af = fig1();
    Encoding enc = encode(af, fig2(), Semantics::Complete);
    Witness w = build_witness(enc, fig2());
    WitnessReport rep = verify_witness(w, enc);
    CHECK(rep.vertices_ok());
    CHECK(rep.edges_ok());
    CHECK(rep.orientation_ok());
    CHECK(rep.bound_ok());
}

TEST_CASE("fault injection is detected") {
    Af af = fig1();
    KExpr x = fig2();
    Encoding enc = encode(af, x, Semantics::Stable);
    Witness w = build_witness(enc, x);
    REQUIRE(verify_witness(w, enc).ok());

    // drop the outermost edge introduction: a missing-edge report
    Witness dropped = w;
    {
        KExpr& e = dropped.expression;
        REQUIRE(e.node(0).kind != KKind::Initial);
        int i = 0;
        while (e.nodes[i].kind != KKind::EdgeIntro) i++;
        KNode& n = e.nodes[i];
        n.kind = KKind::Relabel; // relabel c -> c is the identity here
        n.color2 = n.color;
    }
    WitnessReport rep1 = verify_witness(dropped, enc);
    CHECK_FALSE(rep1.ok());
    CHECK_FALSE(rep1.missing_edges.empty());

    // flip one edge introduction: orientation must be flagged
    Witness flipped = w;
    {
        KExpr& e = flipped.expression;
        int i = 0;
        while (e.nodes[i].kind != KKind::EdgeIntro) i++;
        std::swap(e.nodes[i].color, e.nodes[i].color2);
    }
    WitnessReport rep2 = verify_witness(flipped, enc);
    CHECK_FALSE(rep2.ok());
    CHECK(rep2.flipped_edges.size() + rep2.missing_edges.size() > 0);
}

TEST_CASE("witness serialization") {
    Af af = fig1();
    Encoding enc = encode(af, fig2(), Semantics::Stable);
    Witness w = build_witness(enc, fig2());
    std::string text = write_witness(w);
    CHECK(text.rfind("# k'=", 0) == 0);
    // round trip through the grammar
    std::string body = text.substr(text.find('\n') + 1);
    KExpr back = parse_kexpr(body);
    ColoredDigraph g1 = evaluate(w.expression), g2 = evaluate(back);
    CHECK(g1.names == g2.names);
    CHECK(g1.edges == g2.edges);
}

TEST_CASE("dnf conversion witness stays within the drift bound") {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 10; round++) {
        Cnf cnf;
        cnf.num_vars = 2 + static_cast<int>(rng() % 4);
        int m = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < m; i++) {
            Clause c;
            std::set<int> used;
            for (int j = 0; j <= static_cast<int>(rng() % 3); j++) {
                int v = 1 + static_cast<int>(rng() % cnf.num_vars);
                if (used.insert(v).second) c.lits.push_back((rng() & 1) ? v : -v);
            }
            c.normalize();
            cnf.clauses.push_back(c);
        }
        // trivial incidence expression: every vertex its own color, one
        // n-ary union, edge introductions per incidence edge
        Digraph g = incidence_digraph(cnf);
        KExprBuilder b;
        std::vector<int> leaves;
        for (size_t v = 0; v < g.names.size(); v++)
            leaves.push_back(b.leaf(static_cast<int>(v) + 1, g.names[v]));
        int cur = leaves.size() == 1 ? leaves[0] : b.unite(leaves);
        for (auto& [u, v] : g.edges) cur = b.edge(u + 1, v + 1, cur);
        KExpr x = b.finish(cur);

        VarTable vars = plain_table(cnf.num_vars);
        DnfConversion conv = dnf_convert(cnf, x, vars);
        Witness w = build_dnf_witness(conv, x, vars);
        CHECK(w.colors_used <= 6 * x.width + 4);
        WitnessReport rep = verify_dnf_witness(w, conv);
        CHECK(rep.ok());
    }
}

TEST_CASE("matrix conversion to pure dnf preserves the filtered sets") {
    Af af = fig1();
    KExpr x = fig2();
    for (Semantics sem : {Semantics::Preferred, Semantics::SemiStable, Semantics::Stage}) {
        Encoding enc = encode(af, x, sem);
        DnfMatrixResult res = convert_matrix(enc, x);
        CHECK_FALSE(res.qbf.cnf_part.has_value());
        REQUIRE(res.qbf.dnf_part.has_value());

        // the converted matrix must accept exactly the same candidates
        auto assignments = enumerate_models(enc.cnf, enc.ext_vars);
        for (auto& asg : assignments) {
            Cnf fixed = enc.cnf;
            for (Lit l : asg) fixed.clauses.push_back(Clause{{l}});
            SolveResult r = sat(fixed);
            REQUIRE(r.sat);
            Model full = *r.model;
            full.value.resize(res.qbf.num_vars + 1, false);
            bool plain = check_2qbf(enc.dnf, enc.inner_vars, full);
            bool converted = check_2qbf(*res.qbf.dnf_part, res.qbf.inner_vars, full);
            CHECK(plain == converted);
        }
        auto qd = write_qdimacs_complement(res.qbf);
        CHECK(qd.has_value());
    }
}
