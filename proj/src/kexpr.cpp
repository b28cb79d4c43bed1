#include "cwsat/kexpr.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

namespace cwsat {

std::vector<int> KExpr::parents() const {
    std::vector<int> p(nodes.size(), -1);
    for (int i = 0; i < size(); i++)
        for (int c : nodes[i].children) p[c] = i;
    return p;
}

int ColoredDigraph::add_vertex(const std::string& name, int col) {
    if (index.count(name)) throw input_error("duplicate leaf argument: " + name);
    int id = static_cast<int>(names.size());
    names.push_back(name);
    index[name] = id;
    color.push_back(col);
    return id;
}

int ColoredDigraph::vertex(const std::string& name) const {
    auto it = index.find(name);
    return it == index.end() ? -1 : it->second;
}

bool ColorState::live(int node, int c) const {
    auto& v = cols[node];
    return std::binary_search(v.begin(), v.end(), c);
}

// ---------------------------------------------------------------- building

KExprBuilder::KExprBuilder() = default;

int KExprBuilder::leaf(int color, const std::string& vertex) {
    if (color <= 0) throw input_error("color must be positive");
    KNode n;
    n.kind = KKind::Initial;
    n.color = color;
    n.vertex = vertex;
    pool_.push_back(std::move(n));
    return static_cast<int>(pool_.size()) - 1;
}

int KExprBuilder::unite(std::vector<int> children) {
    if (children.size() < 2) throw input_error("union needs at least two children");
    KNode n;
    n.kind = KKind::Union;
    n.children = std::move(children);
    pool_.push_back(std::move(n));
    return static_cast<int>(pool_.size()) - 1;
}

int KExprBuilder::relabel(int from, int to, int child) {
    if (from <= 0 || to <= 0) throw input_error("color must be positive");
    KNode n;
    n.kind = KKind::Relabel;
    n.color = from;
    n.color2 = to;
    n.children = {child};
    pool_.push_back(std::move(n));
    return static_cast<int>(pool_.size()) - 1;
}

int KExprBuilder::edge(int src, int tgt, int child) {
    if (src <= 0 || tgt <= 0) throw input_error("color must be positive");
    if (src == tgt) throw input_error("self-color edge introduction");
    KNode n;
    n.kind = KKind::EdgeIntro;
    n.color = src;
    n.color2 = tgt;
    n.children = {child};
    pool_.push_back(std::move(n));
    return static_cast<int>(pool_.size()) - 1;
}

KExpr KExprBuilder::finish(int root) const {
    // Level-order renumbering so ids match the paper-style labeling with
    // the root at 0 and every child id above its parent's.
    KExpr x;
    std::vector<int> order;
    std::deque<int> queue{root};
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        order.push_back(t);
        for (int c : pool_[t].children) queue.push_back(c);
    }
    std::vector<int> newid(pool_.size(), -1);
    for (int i = 0; i < static_cast<int>(order.size()); i++) newid[order[i]] = i;
    x.nodes.resize(order.size());
    int width = 0, arity = 2;
    std::set<std::string> seen;
    for (int i = 0; i < static_cast<int>(order.size()); i++) {
        const KNode& src = pool_[order[i]];
        KNode n = src;
        for (auto& c : n.children) c = newid[c];
        if (n.kind == KKind::Initial) {
            width = std::max(width, n.color);
            if (!seen.insert(n.vertex).second)
                throw input_error("duplicate leaf argument: " + n.vertex);
        } else if (n.kind != KKind::Union) {
            width = std::max({width, n.color, n.color2});
        }
        arity = std::max(arity, static_cast<int>(n.children.size()));
        x.nodes[i] = std::move(n);
    }
    x.width = width;
    x.arity = arity;
    return x;
}

// ---------------------------------------------------------------- parsing

namespace {

struct KParser {
    std::string_view text;
    size_t pos = 0;

    void ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
    }
    char peek() {
        ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    void expect(char c) {
        ws();
        if (pos >= text.size() || text[pos] != c)
            throw input_error(std::string("k-expression syntax error: expected '") + c + "' at position " +
                              std::to_string(pos));
        pos++;
    }
    bool try_consume(std::string_view s) {
        ws();
        if (text.substr(pos, s.size()) == s) {
            pos += s.size();
            return true;
        }
        return false;
    }
    int integer() {
        ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) pos++;
        if (pos == start) throw input_error("k-expression syntax error: expected color at position " +
                                            std::to_string(pos));
        int v = std::stoi(std::string(text.substr(start, pos - start)));
        if (v <= 0) throw input_error("k-expression: color 0 or negative");
        return v;
    }
    std::string name() {
        ws();
        size_t start = pos;
        while (pos < text.size()) {
            char c = text[pos];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') pos++;
            else break;
        }
        if (pos == start)
            throw input_error("k-expression syntax error: expected name at position " + std::to_string(pos));
        return std::string(text.substr(start, pos - start));
    }
};

// Frame for the iterative parser; witness expressions nest deeply enough
// that plain recursion is not safe.
struct Frame {
    KKind kind;
    int c1 = 0, c2 = 0;
    std::vector<int> children;
};

} // namespace

KExpr parse_kexpr(std::string_view text) {
    KParser p{text};
    KExprBuilder b;
    std::vector<Frame> stack;
    int completed = -1;

    auto start_expr = [&]() {
        char c = p.peek();
        if (c == 'u') {
            p.pos++;
            p.expect('(');
            stack.push_back({KKind::Union, 0, 0, {}});
            return;
        }
        if (c == 'r') {
            p.pos++;
            p.expect('(');
            int from = p.integer();
            p.ws();
            if (!p.try_consume("->")) throw input_error("k-expression syntax error: expected '->'");
            int to = p.integer();
            p.expect(',');
            stack.push_back({KKind::Relabel, from, to, {}});
            return;
        }
        if (c == 'e') {
            p.pos++;
            p.expect('(');
            int src = p.integer();
            p.expect(',');
            int tgt = p.integer();
            if (src == tgt) throw input_error("k-expression: self-color edge introduction");
            p.expect(',');
            stack.push_back({KKind::EdgeIntro, src, tgt, {}});
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            int col = p.integer();
            p.expect('(');
            std::string n = p.name();
            p.expect(')');
            completed = b.leaf(col, n);
            return;
        }
        throw input_error("k-expression syntax error at position " + std::to_string(p.pos));
    };

    start_expr();
    while (true) {
        if (completed < 0) {
            start_expr();
            continue;
        }
        if (stack.empty()) break;
        Frame& f = stack.back();
        f.children.push_back(completed);
        completed = -1;
        if (f.kind == KKind::Union) {
            if (p.peek() == ',') {
                p.pos++;
                continue; // next child
            }
            p.expect(')');
            if (f.children.size() < 2) throw input_error("k-expression: union needs at least two children");
            completed = b.unite(f.children);
            stack.pop_back();
        } else {
            p.expect(')');
            completed = f.kind == KKind::Relabel ? b.relabel(f.c1, f.c2, f.children[0])
                                                 : b.edge(f.c1, f.c2, f.children[0]);
            stack.pop_back();
        }
    }
    p.ws();
    if (p.pos != text.size()) throw input_error("k-expression: trailing input at position " + std::to_string(p.pos));
    return b.finish(completed);
}

std::string serialize_kexpr(const KExpr& x) {
    std::string out;
    // (node, next child index); emit prefix on first visit.
    std::vector<std::pair<int, size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto& [id, ci] = stack.back();
        const KNode& n = x.node(id);
        if (ci == 0) {
            switch (n.kind) {
                case KKind::Initial:
                    out += std::to_string(n.color) + "(" + n.vertex + ")";
                    break;
                case KKind::Union: out += "u("; break;
                case KKind::Relabel:
                    out += "r(" + std::to_string(n.color) + "->" + std::to_string(n.color2) + ",";
                    break;
                case KKind::EdgeIntro:
                    out += "e(" + std::to_string(n.color) + "," + std::to_string(n.color2) + ",";
                    break;
            }
        }
        if (n.kind == KKind::Initial) {
            stack.pop_back();
        } else if (ci < n.children.size()) {
            if (n.kind == KKind::Union && ci > 0) out += ",";
            int child = n.children[ci];
            ci++;
            stack.push_back({child, 0});
        } else {
            out += ")";
            stack.pop_back();
        }
    }
    return out;
}

// ---------------------------------------------------------------- semantics

ColoredDigraph evaluate(const KExpr& x) {
    ColoredDigraph g;
    // color -> vertex ids, per node. Level-order ids mean children always
    // carry larger ids, so a reverse scan is a valid bottom-up order.
    std::vector<std::map<int, std::vector<int>>> bucket(x.size());
    for (int id = x.size() - 1; id >= 0; id--) {
        const KNode& n = x.node(id);
        switch (n.kind) {
            case KKind::Initial: {
                int v = g.add_vertex(n.vertex, n.color);
                bucket[id][n.color].push_back(v);
                break;
            }
            case KKind::Union: {
                auto& dst = bucket[id];
                for (int c : n.children)
                    for (auto& [col, vs] : bucket[c]) {
                        auto& d = dst[col];
                        d.insert(d.end(), vs.begin(), vs.end());
                    }
                for (int c : n.children) bucket[c].clear();
                break;
            }
            case KKind::Relabel: {
                auto& dst = bucket[id];
                dst = std::move(bucket[n.children[0]]);
                auto it = dst.find(n.color);
                if (it != dst.end()) {
                    auto vs = std::move(it->second);
                    dst.erase(it);
                    auto& d = dst[n.color2];
                    d.insert(d.end(), vs.begin(), vs.end());
                    for (int v : d) g.color[v] = n.color2;
                }
                break;
            }
            case KKind::EdgeIntro: {
                auto& dst = bucket[id];
                dst = std::move(bucket[n.children[0]]);
                auto si = dst.find(n.color);
                auto ti = dst.find(n.color2);
                if (si != dst.end() && ti != dst.end())
                    for (int u : si->second)
                        for (int v : ti->second) g.edges.insert({u, v});
                break;
            }
        }
    }
    return g;
}

ColorState annotate(const KExpr& x) {
    ColorState st;
    st.cols.resize(x.size());
    st.col.resize(x.size());
    for (int id = x.size() - 1; id >= 0; id--) {
        const KNode& n = x.node(id);
        auto& mine = st.col[id];
        switch (n.kind) {
            case KKind::Initial:
                mine[n.vertex] = n.color;
                break;
            case KKind::Union:
                for (int c : n.children) mine.insert(st.col[c].begin(), st.col[c].end());
                break;
            case KKind::Relabel:
                mine = st.col[n.children[0]];
                for (auto& [v, c] : mine)
                    if (c == n.color) c = n.color2;
                break;
            case KKind::EdgeIntro:
                mine = st.col[n.children[0]];
                break;
        }
        std::set<int> live;
        for (auto& [v, c] : mine) live.insert(c);
        st.cols[id].assign(live.begin(), live.end());
    }
    return st;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (auto& a : missing_args) os << "missing argument: " << a << "\n";
    for (auto& a : extra_args) os << "extra argument: " << a << "\n";
    for (auto& [u, v] : missing_edges) os << "missing edge: " << u << " -> " << v << "\n";
    for (auto& [u, v] : extra_edges) os << "extra edge: " << u << " -> " << v << "\n";
    return os.str();
}

ValidationReport validate(const KExpr& x, const Af& af) {
    ValidationReport rep;
    ColoredDigraph g = evaluate(x);
    for (auto& a : af.args)
        if (g.vertex(a) < 0) rep.missing_args.push_back(a);
    for (auto& v : g.names)
        if (af.arg_index(v) < 0) rep.extra_args.push_back(v);
    for (auto& [a, b] : af.attacks) {
        int u = g.vertex(af.args[a]), v = g.vertex(af.args[b]);
        if (u < 0 || v < 0 || !g.edges.count({u, v}))
            rep.missing_edges.emplace_back(af.args[a], af.args[b]);
    }
    for (auto& [u, v] : g.edges) {
        int a = af.arg_index(g.names[u]), b = af.arg_index(g.names[v]);
        if (a < 0 || b < 0 || !af.has_attack(a, b))
            rep.extra_edges.emplace_back(g.names[u], g.names[v]);
    }
    return rep;
}

KExpr trivial_expression(const Af& af) {
    if (af.arg_count() == 0) throw input_error("empty framework");
    if (af.has_self_attack()) throw input_error("self-attack cannot be expressed by a k-expression");
    KExprBuilder b;
    std::vector<int> leaves;
    for (int i = 0; i < af.arg_count(); i++) leaves.push_back(b.leaf(i + 1, af.args[i]));
    int cur = af.arg_count() == 1 ? leaves[0] : b.unite(leaves);
    for (auto& [x, y] : af.attacks) cur = b.edge(x + 1, y + 1, cur);
    return b.finish(cur);
}

// ---------------------------------------------------------------- search

namespace {

struct Component {
    std::map<std::string, int> color; // vertex -> color in [1..k]
    std::set<std::pair<std::string, std::string>> edges;
    std::string expr;

    std::string signature() const {
        std::ostringstream os;
        for (auto& [v, c] : color) os << v << ':' << c << ';';
        os << '|';
        for (auto& [u, v] : edges) os << u << '>' << v << ';';
        return os.str();
    }
};

struct State {
    std::vector<Component> comps;

    void canonicalize() {
        std::sort(comps.begin(), comps.end(),
                  [](const Component& a, const Component& b) { return a.signature() < b.signature(); });
    }
    std::string signature() const {
        std::string s;
        for (auto& c : comps) s += c.signature() + "#";
        return s;
    }
};

} // namespace

SearchResult search_expression(const Af& af, int k_max, long budget) {
    if (af.arg_count() == 0) throw input_error("empty framework");
    if (af.has_self_attack()) throw input_error("self-attack cannot be expressed by a k-expression");
    if (k_max < 1) return {SearchStatus::NoneWithinK, std::nullopt};

    std::set<std::pair<std::string, std::string>> target;
    for (auto& [x, y] : af.attacks) target.insert({af.args[x], af.args[y]});

    if (af.arg_count() > 10) {
        // Greedy twin-merge construction in declaration order; classes are
        // merged whenever their members agree on all not-yet-inserted
        // vertices, which keeps edge introductions all-or-nothing.
        KExprBuilder b;
        int n = af.arg_count();
        std::vector<std::vector<int>> cls; // color (index+1) -> member args; empty slots are reusable
        int cur = -1;
        auto future_equal = [&](int u, int v, int next) {
            for (int w = next; w < n; w++) {
                if (af.has_attack(u, w) != af.has_attack(v, w)) return false;
                if (af.has_attack(w, u) != af.has_attack(w, v)) return false;
            }
            return true;
        };
        for (int i = 0; i < n; i++) {
            int slot = 0;
            while (slot < static_cast<int>(cls.size()) && !cls[slot].empty()) slot++;
            if (slot == static_cast<int>(cls.size())) cls.emplace_back();
            int mycolor = slot + 1;
            cls[slot] = {i};
            int lf = b.leaf(mycolor, af.args[i]);
            cur = (cur < 0) ? lf : b.unite({cur, lf});
            for (int c = 0; c < static_cast<int>(cls.size()); c++) {
                if (c == slot || cls[c].empty()) continue;
                bool fwd = true, bwd = true;
                for (int m : cls[c]) {
                    if (!af.has_attack(i, m)) fwd = false;
                    if (!af.has_attack(m, i)) bwd = false;
                }
                if (fwd) cur = b.edge(mycolor, c + 1, cur);
                if (bwd) cur = b.edge(c + 1, mycolor, cur);
            }
            // merge pass
            for (int c1 = 0; c1 < static_cast<int>(cls.size()); c1++) {
                if (cls[c1].empty()) continue;
                for (int c2 = c1 + 1; c2 < static_cast<int>(cls.size()); c2++) {
                    if (cls[c2].empty()) continue;
                    if (future_equal(cls[c1][0], cls[c2][0], i + 1)) {
                        cur = b.relabel(c2 + 1, c1 + 1, cur);
                        for (int m : cls[c2]) cls[c1].push_back(m);
                        cls[c2].clear();
                    }
                }
            }
        }
        KExpr x = b.finish(cur);
        if (x.width <= k_max && validate(x, af).ok()) return {SearchStatus::Found, x};
        return {SearchStatus::BudgetExhausted, std::nullopt};
    }

    // Exhaustive breadth-first search over construction states. Leaves may
    // start with color 1 without loss of generality.
    State init;
    for (auto& a : af.args) {
        Component c;
        c.color[a] = 1;
        c.expr = "1(" + a + ")";
        init.comps.push_back(c);
    }
    init.canonicalize();

    std::deque<State> queue{init};
    std::set<std::string> seen{init.signature()};
    long expanded = 0;

    while (!queue.empty()) {
        State st = queue.front();
        queue.pop_front();
        if (++expanded > budget) return {SearchStatus::BudgetExhausted, std::nullopt};

        if (st.comps.size() == 1 && st.comps[0].edges == target &&
            static_cast<int>(st.comps[0].color.size()) == af.arg_count()) {
            KExpr x = parse_kexpr(st.comps[0].expr);
            return {SearchStatus::Found, x};
        }

        auto push = [&](State next) {
            next.canonicalize();
            auto sig = next.signature();
            if (seen.insert(sig).second) queue.push_back(std::move(next));
        };

        int m = static_cast<int>(st.comps.size());
        // unions
        for (int i = 0; i < m; i++)
            for (int j = i + 1; j < m; j++) {
                State next = st;
                Component merged = next.comps[i];
                for (auto& [v, c] : next.comps[j].color) merged.color[v] = c;
                for (auto& e : next.comps[j].edges) merged.edges.insert(e);
                merged.expr = "u(" + next.comps[i].expr + "," + next.comps[j].expr + ")";
                next.comps.erase(next.comps.begin() + j);
                next.comps[i] = std::move(merged);
                push(std::move(next));
            }
        for (int i = 0; i < m; i++) {
            std::set<int> live;
            for (auto& [v, c] : st.comps[i].color) live.insert(c);
            // relabels
            for (int c : live)
                for (int c2 = 1; c2 <= k_max; c2++) {
                    if (c2 == c) continue;
                    State next = st;
                    for (auto& [v, cc] : next.comps[i].color)
                        if (cc == c) cc = c2;
                    next.comps[i].expr =
                        "r(" + std::to_string(c) + "->" + std::to_string(c2) + "," + next.comps[i].expr + ")";
                    push(std::move(next));
                }
            // edge introductions
            for (int c : live)
                for (int c2 : live) {
                    if (c == c2) continue;
                    bool valid = true, adds = false;
                    for (auto& [u, cu] : st.comps[i].color) {
                        if (cu != c) continue;
                        for (auto& [v, cv] : st.comps[i].color) {
                            if (cv != c2) continue;
                            if (!target.count({u, v})) { valid = false; break; }
                            if (!st.comps[i].edges.count({u, v})) adds = true;
                        }
                        if (!valid) break;
                    }
                    if (!valid || !adds) continue;
                    State next = st;
                    for (auto& [u, cu] : next.comps[i].color) {
                        if (cu != c) continue;
                        for (auto& [v, cv] : next.comps[i].color)
                            if (cv == c2) next.comps[i].edges.insert({u, v});
                    }
                    next.comps[i].expr =
                        "e(" + std::to_string(c) + "," + std::to_string(c2) + "," + next.comps[i].expr + ")";
                    push(std::move(next));
                }
        }
    }
    return {SearchStatus::NoneWithinK, std::nullopt};
}

} // namespace cwsat
