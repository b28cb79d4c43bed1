#include "cwsat/af.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cwsat {

const char* semantics_name(Semantics s) {
    switch (s) {
        case Semantics::ConflictFree: return "conflict-free";
        case Semantics::Admissible: return "admissible";
        case Semantics::Complete: return "complete";
        case Semantics::Stable: return "stable";
        case Semantics::Preferred: return "preferred";
        case Semantics::SemiStable: return "semi-stable";
        case Semantics::Stage: return "stage";
    }
    return "?";
}

Semantics semantics_from_tag(std::string_view tag) {
    if (tag == "cf") return Semantics::ConflictFree;
    if (tag == "adm") return Semantics::Admissible;
    if (tag == "com") return Semantics::Complete;
    if (tag == "stb") return Semantics::Stable;
    if (tag == "prf") return Semantics::Preferred;
    if (tag == "sst") return Semantics::SemiStable;
    if (tag == "stg") return Semantics::Stage;
    throw input_error("unknown semantics tag: " + std::string(tag));
}

bool semantics_second_level(Semantics s) {
    return s == Semantics::Preferred || s == Semantics::SemiStable || s == Semantics::Stage;
}

int Af::add_arg(const std::string& name) {
    if (name.empty()) throw input_error("empty argument name");
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            throw input_error("bad character in argument name: " + name);
    if (index.count(name)) throw input_error("duplicate argument declaration: " + name);
    int id = arg_count();
    index[name] = id;
    args.push_back(name);
    return id;
}

int Af::arg_index(const std::string& name) const {
    auto it = index.find(name);
    return it == index.end() ? -1 : it->second;
}

void Af::add_attack(int from, int to) {
    if (from < 0 || from >= arg_count() || to < 0 || to >= arg_count())
        throw input_error("attack endpoint out of range");
    if (!has_attack(from, to)) attacks.emplace_back(from, to);
}

bool Af::has_attack(int from, int to) const {
    return std::find(attacks.begin(), attacks.end(), std::make_pair(from, to)) != attacks.end();
}

bool Af::has_self_attack() const {
    for (auto& [a, b] : attacks)
        if (a == b) return true;
    return false;
}

std::vector<int> Af::attackers_of(int a) const {
    std::vector<int> out;
    for (auto& [x, y] : attacks)
        if (y == a) out.push_back(x);
    return out;
}

std::vector<int> Af::targets_of(int a) const {
    std::vector<int> out;
    for (auto& [x, y] : attacks)
        if (x == a) out.push_back(y);
    return out;
}

namespace {

struct Scanner {
    std::string_view text;
    size_t pos = 0;

    void skip_ws_and_comments() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '%') {
                while (pos < text.size() && text[pos] != '\n') pos++;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                pos++;
            } else {
                break;
            }
        }
    }
    bool done() {
        skip_ws_and_comments();
        return pos >= text.size();
    }
    bool try_consume(std::string_view tok) {
        skip_ws_and_comments();
        if (text.substr(pos, tok.size()) == tok) {
            pos += tok.size();
            return true;
        }
        return false;
    }
    void expect(char c, const char* where) {
        skip_ws_and_comments();
        if (pos >= text.size() || text[pos] != c)
            throw input_error(std::string("malformed fact: expected '") + c + "' in " + where);
        pos++;
    }
    std::string name(const char* where) {
        skip_ws_and_comments();
        size_t start = pos;
        while (pos < text.size()) {
            char c = text[pos];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') pos++;
            else break;
        }
        if (pos == start) throw input_error(std::string("malformed fact: missing name in ") + where);
        return std::string(text.substr(start, pos - start));
    }
};

} // namespace

Af parse_apx(std::string_view text) {
    Af af;
    std::vector<std::pair<std::string, std::string>> atts;
    Scanner sc{text};
    while (!sc.done()) {
        if (sc.try_consume("arg")) {
            sc.expect('(', "arg fact");
            std::string n = sc.name("arg fact");
            sc.expect(')', "arg fact");
            sc.expect('.', "arg fact");
            af.add_arg(n);
        } else if (sc.try_consume("att")) {
            sc.expect('(', "att fact");
            std::string a = sc.name("att fact");
            sc.expect(',', "att fact");
            std::string b = sc.name("att fact");
            sc.expect(')', "att fact");
            sc.expect('.', "att fact");
            atts.emplace_back(a, b);
        } else {
            throw input_error("malformed fact near position " + std::to_string(sc.pos));
        }
    }
    for (auto& [a, b] : atts) {
        int ia = af.arg_index(a), ib = af.arg_index(b);
        if (ia < 0) throw input_error("attack references undeclared argument: " + a);
        if (ib < 0) throw input_error("attack references undeclared argument: " + b);
        af.add_attack(ia, ib);
    }
    return af;
}

Af parse_tgf(std::string_view text) {
    Af af;
    std::istringstream in{std::string(text)};
    std::string line;
    bool in_edges = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string a, b;
        if (!(ls >> a)) continue;
        if (a == "#") {
            if (in_edges) throw input_error("tgf: duplicate '#' separator");
            in_edges = true;
            continue;
        }
        if (!in_edges) {
            af.add_arg(a);
        } else {
            if (!(ls >> b)) throw input_error("tgf: edge line needs two nodes");
            int ia = af.arg_index(a), ib = af.arg_index(b);
            if (ia < 0) throw input_error("tgf: undeclared node: " + a);
            if (ib < 0) throw input_error("tgf: undeclared node: " + b);
            af.add_attack(ia, ib);
        }
    }
    return af;
}

std::string write_apx(const Af& af) {
    std::string out;
    for (auto& a : af.args) out += "arg(" + a + ").\n";
    for (auto& [x, y] : af.attacks) out += "att(" + af.args[x] + "," + af.args[y] + ").\n";
    return out;
}

Extension defended_set(const Af& af, Extension s) {
    Extension out = 0;
    for (int a = 0; a < af.arg_count(); a++) {
        bool ok = true;
        for (int p : af.attackers_of(a)) {
            bool countered = false;
            for (int q : af.attackers_of(p))
                if (s & (Extension(1) << q)) { countered = true; break; }
            if (!countered) { ok = false; break; }
        }
        if (ok) out |= Extension(1) << a;
    }
    return out;
}

Extension range_of(const Af& af, Extension s) {
    Extension out = s;
    for (auto& [x, y] : af.attacks)
        if (s & (Extension(1) << x)) out |= Extension(1) << y;
    return out;
}

namespace {

bool conflict_free(const Af& af, Extension s) {
    for (auto& [x, y] : af.attacks)
        if ((s >> x & 1) && (s >> y & 1)) return false;
    return true;
}

bool admissible(const Af& af, Extension s) {
    if (!conflict_free(af, s)) return false;
    return (s & ~defended_set(af, s)) == 0;
}

} // namespace

bool oracle_check(const Af& af, Extension s, Semantics sigma) {
    int n = af.arg_count();
    Extension all = n >= 64 ? ~Extension(0) : (Extension(1) << n) - 1;
    switch (sigma) {
        case Semantics::ConflictFree:
            return conflict_free(af, s);
        case Semantics::Admissible:
            return admissible(af, s);
        case Semantics::Complete:
            return admissible(af, s) && defended_set(af, s) == s;
        case Semantics::Stable:
            return conflict_free(af, s) && range_of(af, s) == all;
        case Semantics::Preferred: {
            if (!admissible(af, s)) return false;
            for (Extension t = 0; t <= all; t++) {
                if ((t & s) == s && t != s && admissible(af, t)) return false;
                if (t == all) break;
            }
            return true;
        }
        case Semantics::SemiStable: {
            if (!admissible(af, s)) return false;
            Extension r = range_of(af, s);
            for (Extension t = 0; t <= all; t++) {
                if (admissible(af, t)) {
                    Extension rt = range_of(af, t);
                    if ((r & rt) == r && rt != r) return false;
                }
                if (t == all) break;
            }
            return true;
        }
        case Semantics::Stage: {
            if (!conflict_free(af, s)) return false;
            Extension r = range_of(af, s);
            for (Extension t = 0; t <= all; t++) {
                if (conflict_free(af, t)) {
                    Extension rt = range_of(af, t);
                    if ((r & rt) == r && rt != r) return false;
                }
                if (t == all) break;
            }
            return true;
        }
    }
    return false;
}

std::vector<Extension> oracle_enumerate(const Af& af, Semantics sigma, int limit) {
    int n = af.arg_count();
    if (n > limit)
        throw resource_error("oracle limit exceeded: " + std::to_string(n) + " > " + std::to_string(limit));
    Extension all = (n == 0) ? 0 : (Extension(1) << n) - 1;
    std::vector<Extension> out;
    // Base predicate first; maximality filters run over the collected family
    // so the quadratic part only touches candidate sets.
    if (sigma == Semantics::Preferred || sigma == Semantics::SemiStable || sigma == Semantics::Stage) {
        bool range_based = sigma != Semantics::Preferred;
        Semantics base = sigma == Semantics::Stage ? Semantics::ConflictFree : Semantics::Admissible;
        std::vector<Extension> cands;
        for (Extension s = 0;; s++) {
            if (oracle_check(af, s, base)) cands.push_back(s);
            if (s == all) break;
        }
        for (Extension s : cands) {
            Extension rs = range_based ? range_of(af, s) : s;
            bool maximal = true;
            for (Extension t : cands) {
                Extension rt = range_based ? range_of(af, t) : t;
                if ((rs & rt) == rs && rt != rs) { maximal = false; break; }
            }
            if (maximal) out.push_back(s);
        }
        return out;
    }
    for (Extension s = 0;; s++) {
        if (oracle_check(af, s, sigma)) out.push_back(s);
        if (s == all) break;
    }
    return out;
}

bool oracle_accept(const Af& af, Semantics sigma, int arg, AcceptMode mode, int limit) {
    if (arg < 0 || arg >= af.arg_count()) throw input_error("unknown argument index");
    auto exts = oracle_enumerate(af, sigma, limit);
    Extension bit = Extension(1) << arg;
    if (mode == AcceptMode::Credulous) {
        for (Extension e : exts)
            if (e & bit) return true;
        return false;
    }
    // Intersection over the empty family is the full set of arguments.
    for (Extension e : exts)
        if (!(e & bit)) return false;
    return true;
}

} // namespace cwsat
