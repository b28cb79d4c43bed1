#include "doctest.h"

#include <algorithm>

#include "helpers.hpp"

using namespace cwsat;
using namespace cwsat::test;

TEST_CASE("apx parsing") {
    Af af = fig1();
    CHECK(af.arg_count() == 4);
    CHECK(af.args == std::vector<std::string>{"z", "o", "u", "r"});
    CHECK(af.attacks.size() == 4);
    CHECK(af.has_attack(af.arg_index("z"), af.arg_index("o")));
    CHECK(af.has_attack(af.arg_index("r"), af.arg_index("u")));

    Af single = parse_apx("arg(a).");
    CHECK(single.arg_count() == 1);
    CHECK(single.attacks.empty());

    CHECK_THROWS_AS(parse_apx("att(x,y)."), Error);
    CHECK_THROWS_AS(parse_apx("arg(a). arg(a)."), Error);
    CHECK_THROWS_AS(parse_apx("arg(a) arg(b)."), Error);
    CHECK_THROWS_AS(parse_apx("foo(a)."), Error);

    Af commented = parse_apx("% intro\narg(a).\n% attack block\narg(b).\natt(a,b).\n");
    CHECK(commented.arg_count() == 2);
    CHECK(commented.attacks.size() == 1);

    // duplicate attacks collapse
    Af dup = parse_apx("arg(a). arg(b). att(a,b). att(a,b).");
    CHECK(dup.attacks.size() == 1);
}

TEST_CASE("tgf parsing") {
    Af af = parse_tgf("1\n2\n#\n1 2\n");
    CHECK(af.arg_count() == 2);
    CHECK(af.attacks.size() == 1);

    Af lone = parse_tgf("1\n#\n");
    CHECK(lone.arg_count() == 1);
    CHECK(lone.attacks.empty());

    CHECK_THROWS_AS(parse_tgf("1\n#\n1 2\n"), Error);
}

TEST_CASE("defended set") {
    Af af = fig1();
    Extension s = ext_of(af, {"z", "r"});
    CHECK(defended_set(af, s) == ext_of(af, {"z", "r"}));
    // with nothing in the set only unattacked arguments are defended
    CHECK(defended_set(af, 0) == ext_of(af, {"z"}));

    Af single = parse_apx("arg(a).");
    CHECK(defended_set(single, 0) == 1);
}

TEST_CASE("range") {
    Af af = fig1();
    CHECK(range_of(af, ext_of(af, {"z", "u"})) == ext_of(af, {"z", "o", "u", "r"}));
    CHECK(range_of(af, 0) == 0);
    CHECK(range_of(af, 15) == 15);
}

TEST_CASE("check") {
    Af af = fig1();
    CHECK(oracle_check(af, ext_of(af, {"z", "r"}), Semantics::Stable));
    CHECK_FALSE(oracle_check(af, ext_of(af, {"z"}), Semantics::Stable));
    CHECK(oracle_check(af, 0, Semantics::Admissible));
}

TEST_CASE("enumerate on the running example") {
    Af af = fig1();
    auto stable = oracle_enumerate(af, Semantics::Stable);
    CHECK(stable == std::vector<Extension>{ext_of(af, {"z", "u"}), ext_of(af, {"z", "r"})});
    CHECK(oracle_enumerate(af, Semantics::Admissible).size() == 6);
    auto complete = oracle_enumerate(af, Semantics::Complete);
    CHECK(complete.size() == 3);
    CHECK(std::find(complete.begin(), complete.end(), ext_of(af, {"z"})) != complete.end());
    auto preferred = oracle_enumerate(af, Semantics::Preferred);
    CHECK(preferred.size() == 2);
    CHECK(oracle_enumerate(af, Semantics::SemiStable).size() == 2);
    CHECK(oracle_enumerate(af, Semantics::Stage).size() == 2);
}

TEST_CASE("enumerate on figure 3") {
    Af left = parse_apx(kFig3LeftApx);
    auto stable = oracle_enumerate(left, Semantics::Stable);
    CHECK(stable == std::vector<Extension>{1, 2, 4});

    Af right = parse_apx(kFig3RightApx);
    CHECK(oracle_enumerate(right, Semantics::Stable).empty());
    CHECK(oracle_enumerate(right, Semantics::Stage).size() == 3);
    CHECK(oracle_enumerate(right, Semantics::SemiStable) == std::vector<Extension>{0});
}

TEST_CASE("oracle accept") {
    Af af = fig1();
    CHECK(oracle_accept(af, Semantics::Stable, af.arg_index("z"), AcceptMode::Skeptical));
    CHECK(oracle_accept(af, Semantics::Stable, af.arg_index("r"), AcceptMode::Credulous));
    CHECK_FALSE(oracle_accept(af, Semantics::Stable, af.arg_index("o"), AcceptMode::Credulous));

    Af right = parse_apx(kFig3RightApx);
    // no stable extension: skeptical acceptance is vacuously true
    CHECK(oracle_accept(right, Semantics::Stable, 0, AcceptMode::Skeptical));
}

TEST_CASE("oracle limit") {
    Af big;
    for (int i = 0; i < 21; i++) big.add_arg("a" + std::to_string(i));
    CHECK_THROWS_AS(oracle_enumerate(big, Semantics::Stable), Error);
}

TEST_CASE("self-attacks stay within the oracle") {
    Af af = parse_apx("arg(a). att(a,a).");
    CHECK(af.has_self_attack());
    CHECK(oracle_enumerate(af, Semantics::Stable).empty());
    CHECK(oracle_enumerate(af, Semantics::ConflictFree) == std::vector<Extension>{0});
}

namespace {

void check_lattice(const Af& af) {
    int n = af.arg_count();
    Extension all = n == 0 ? 0 : (Extension(1) << n) - 1;
    auto in = [&](Semantics s, Extension e) { return oracle_check(af, e, s); };
    for (Extension e = 0;; e++) {
        if (in(Semantics::Stable, e)) {
            CHECK(in(Semantics::SemiStable, e));
            CHECK(in(Semantics::Stage, e));
        }
        if (in(Semantics::SemiStable, e)) CHECK(in(Semantics::Complete, e));
        if (in(Semantics::Preferred, e)) CHECK(in(Semantics::Complete, e));
        if (in(Semantics::Complete, e)) CHECK(in(Semantics::Admissible, e));
        if (in(Semantics::Admissible, e)) CHECK(in(Semantics::ConflictFree, e));
        CHECK(in(Semantics::Stable, e) ==
              (oracle_check(af, e, Semantics::ConflictFree) && range_of(af, e) == all));
        CHECK(in(Semantics::Complete, e) ==
              (in(Semantics::Admissible, e) && defended_set(af, e) == e));
        if (e == all) break;
    }
    // preferred = subset-maximal admissible, cross-checked
    auto preferred = oracle_enumerate(af, Semantics::Preferred);
    std::vector<Extension> adm = oracle_enumerate(af, Semantics::Admissible);
    std::vector<Extension> maximal;
    for (Extension s : adm) {
        bool max = true;
        for (Extension t : adm)
            if ((s & t) == s && t != s) max = false;
        if (max) maximal.push_back(s);
    }
    CHECK(preferred == maximal);
    for (Semantics s : {Semantics::ConflictFree, Semantics::Admissible, Semantics::Complete,
                        Semantics::Stable, Semantics::Preferred, Semantics::SemiStable,
                        Semantics::Stage}) {
        auto exts = oracle_enumerate(af, s);
        std::set<Extension> uniq(exts.begin(), exts.end());
        CHECK(uniq.size() == exts.size());
        for (Extension e : exts) CHECK(oracle_check(af, e, s));
    }
}

} // namespace

TEST_CASE("semantics lattice, exhaustive small and random medium") {
    for (int n = 1; n <= 3; n++) {
        unsigned long masks = 1ul << (n * (n - 1));
        for (unsigned long m = 0; m < masks; m++) check_lattice(af_from_mask(n, m));
    }
    std::mt19937_64 rng(7);
    for (int i = 0; i < 25; i++) check_lattice(random_af(4 + static_cast<int>(rng() % 4), rng));
}
