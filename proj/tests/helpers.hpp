#ifndef CWSAT_TEST_HELPERS_HPP
#define CWSAT_TEST_HELPERS_HPP

#include <random>
#include <set>
#include <string>
#include <vector>

#include "cwsat/af.hpp"
#include "cwsat/kexpr.hpp"

namespace cwsat::test {

inline const char* kFig1Apx =
    "arg(z). arg(o). arg(u). arg(r). att(z,o). att(u,o). att(u,r). att(r,u).";

inline const char* kFig2Expr = "e(1,2,u(e(2,1,u(1(u),2(r))),r(1->3,e(1,2,u(1(z),2(o))))))";

// Figure 3: the symmetric triangle and the directed 3-cycle.
inline const char* kFig3LeftApx =
    "arg(a). arg(b). arg(c). att(a,b). att(b,a). att(b,c). att(c,b). att(a,c). att(c,a).";
inline const char* kFig3RightApx = "arg(d). arg(e). arg(f). att(d,e). att(e,f). att(f,d).";

inline Af fig1() { return parse_apx(kFig1Apx); }
inline KExpr fig2() { return parse_kexpr(kFig2Expr); }

inline Af make_af(int n, const std::vector<std::pair<int, int>>& attacks) {
    Af af;
    for (int i = 0; i < n; i++) af.add_arg(std::string(1, static_cast<char>('a' + i)));
    for (auto& [x, y] : attacks) af.add_attack(x, y);
    return af;
}

// Deterministic random AF without self-attacks.
inline Af random_af(int n, std::mt19937_64& rng, int density_pct = 30) {
    std::vector<std::pair<int, int>> atts;
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            if (i == j) continue;
            if (static_cast<int>(rng() % 100) < density_pct) atts.emplace_back(i, j);
        }
    return make_af(n, atts);
}

// All AFs over n arguments as attack bitmasks over the n*(n-1) ordered
// non-diagonal pairs.
inline Af af_from_mask(int n, unsigned long mask) {
    std::vector<std::pair<int, int>> atts;
    int bit = 0;
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            if (i == j) continue;
            if (mask >> bit & 1) atts.emplace_back(i, j);
            bit++;
        }
    return make_af(n, atts);
}

inline Extension ext_of(const Af& af, const std::set<std::string>& names) {
    Extension e = 0;
    for (auto& n : names) e |= Extension(1) << af.arg_index(n);
    return e;
}

} // namespace cwsat::test

#endif
