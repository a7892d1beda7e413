#include "circseq/formula.hpp"

#include <cassert>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace circseq {

namespace {

struct Node {
    Kind kind;
    std::string atom;          // Atom only
    const Node* a = nullptr;   // child / left
    const Node* b = nullptr;   // right
    int complexity = 0;
    int node_count = 1;
    std::string text;          // canonical print, filled at intern time
};

struct NodeKey {
    Kind kind;
    std::string_view atom;
    const Node* a;
    const Node* b;
    bool operator==(const NodeKey& o) const noexcept {
        return kind == o.kind && atom == o.atom && a == o.a && b == o.b;
    }
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const noexcept {
        std::size_t h = static_cast<std::size_t>(k.kind);
        h ^= std::hash<std::string_view>{}(k.atom) + 0x9e3779b9 + (h << 6) + (h >> 2);
        h ^= std::hash<const void*>{}(k.a) + 0x9e3779b9 + (h << 6) + (h >> 2);
        h ^= std::hash<const void*>{}(k.b) + 0x9e3779b9 + (h << 6) + (h >> 2);
        return h;
    }
};

int precedence(Kind k) {
    switch (k) {
        case Kind::Imp: return 1;
        case Kind::Or: return 2;
        case Kind::And: return 3;
        default: return 4;  // constants, atoms, prefix operators
    }
}

std::string render(const Node* n) {
    auto wrap = [](const Node* c, int min_prec) {
        if (precedence(c->kind) < min_prec) return "(" + c->text + ")";
        return c->text;
    };
    switch (n->kind) {
        case Kind::Top: return "T";
        case Kind::Bot: return "F";
        case Kind::Atom: return n->atom;
        case Kind::Neg: return "~" + wrap(n->a, 4);
        case Kind::Box: return "[]" + wrap(n->a, 4);
        // "&" and "|" print left associative, "->" right associative
        case Kind::And: return wrap(n->a, 3) + " & " + wrap(n->b, 4);
        case Kind::Or: return wrap(n->a, 2) + " | " + wrap(n->b, 3);
        case Kind::Imp: return wrap(n->a, 2) + " -> " + wrap(n->b, 1);
    }
    return "?";
}

class Interner {
public:
    static Interner& instance() {
        static Interner it;
        return it;
    }

    const Node* intern(Kind k, std::string_view atom, const Node* a, const Node* b) {
        std::lock_guard<std::mutex> lock(mu_);
        NodeKey key{k, atom, a, b};
        auto hit = map_.find(key);
        if (hit != map_.end()) return hit->second;
        auto node = std::make_unique<Node>();
        node->kind = k;
        node->atom = std::string(atom);
        node->a = a;
        node->b = b;
        switch (k) {
            case Kind::Top:
            case Kind::Bot:
            case Kind::Atom:
                node->complexity = 0;
                node->node_count = 1;
                break;
            case Kind::Neg:
            case Kind::Box:
                node->complexity = a->complexity + 1;
                node->node_count = a->node_count + 1;
                break;
            default:
                node->complexity = a->complexity + b->complexity + 1;
                node->node_count = a->node_count + b->node_count + 1;
        }
        node->text = render(node.get());
        const Node* raw = node.get();
        map_.emplace(NodeKey{k, raw->atom, a, b}, raw);
        pool_.push_back(std::move(node));
        return raw;
    }

private:
    std::mutex mu_;
    std::unordered_map<NodeKey, const Node*, NodeKeyHash> map_;
    std::vector<std::unique_ptr<Node>> pool_;
};

}  // namespace

struct FormulaInterner {
    static Formula make(const Node* n) { return Formula(n); }
    static const Node* get(const Formula& f) { return static_cast<const Node*>(f.node_); }
};

namespace {
Formula wrap_node(const Node* n) { return FormulaInterner::make(n); }
const Node* node_of(const Formula& f) { return FormulaInterner::get(f); }
}  // namespace

Formula Formula::top() { return wrap_node(Interner::instance().intern(Kind::Top, {}, nullptr, nullptr)); }
Formula Formula::bot() { return wrap_node(Interner::instance().intern(Kind::Bot, {}, nullptr, nullptr)); }

Formula Formula::atom(std::string_view name) {
    assert(!name.empty());
    return wrap_node(Interner::instance().intern(Kind::Atom, name, nullptr, nullptr));
}

Formula Formula::neg(Formula f) {
    return wrap_node(Interner::instance().intern(Kind::Neg, {}, node_of(f), nullptr));
}

Formula Formula::conj(Formula l, Formula r) {
    return wrap_node(Interner::instance().intern(Kind::And, {}, node_of(l), node_of(r)));
}

Formula Formula::disj(Formula l, Formula r) {
    return wrap_node(Interner::instance().intern(Kind::Or, {}, node_of(l), node_of(r)));
}

Formula Formula::imp(Formula l, Formula r) {
    return wrap_node(Interner::instance().intern(Kind::Imp, {}, node_of(l), node_of(r)));
}

Formula Formula::box(Formula f) {
    return wrap_node(Interner::instance().intern(Kind::Box, {}, node_of(f), nullptr));
}

Kind Formula::kind() const { return node_of(*this)->kind; }

const std::string& Formula::atom_name() const {
    assert(kind() == Kind::Atom);
    return node_of(*this)->atom;
}

Formula Formula::child() const {
    assert(kind() == Kind::Neg || kind() == Kind::Box);
    return wrap_node(node_of(*this)->a);
}

Formula Formula::left() const {
    assert(kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Imp);
    return wrap_node(node_of(*this)->a);
}

Formula Formula::right() const {
    assert(kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Imp);
    return wrap_node(node_of(*this)->b);
}

int Formula::complexity() const { return node_of(*this)->complexity; }
int Formula::node_count() const { return node_of(*this)->node_count; }
const std::string& Formula::text() const { return node_of(*this)->text; }

std::size_t Formula::hash() const noexcept { return std::hash<const void*>{}(node_); }

bool formula_less(const Formula& a, const Formula& b) {
    if (a.complexity() != b.complexity()) return a.complexity() < b.complexity();
    return a.text() < b.text();
}

Formula boxdot(Formula f) { return Formula::conj(f, Formula::box(f)); }

FormulaSet subformulas(Formula f) {
    FormulaSet out;
    std::vector<Formula> stack{f};
    while (!stack.empty()) {
        Formula cur = stack.back();
        stack.pop_back();
        if (!out.insert(cur).second) continue;
        switch (cur.kind()) {
            case Kind::Neg:
            case Kind::Box:
                stack.push_back(cur.child());
                break;
            case Kind::And:
            case Kind::Or:
            case Kind::Imp:
                stack.push_back(cur.left());
                stack.push_back(cur.right());
                break;
            default:
                break;
        }
    }
    return out;
}

Formula substitute(Formula f, const std::map<std::string, Formula>& map) {
    switch (f.kind()) {
        case Kind::Top:
        case Kind::Bot:
            return f;
        case Kind::Atom: {
            auto hit = map.find(f.atom_name());
            return hit == map.end() ? f : hit->second;
        }
        case Kind::Neg: return Formula::neg(substitute(f.child(), map));
        case Kind::Box: return Formula::box(substitute(f.child(), map));
        case Kind::And: return Formula::conj(substitute(f.left(), map), substitute(f.right(), map));
        case Kind::Or: return Formula::disj(substitute(f.left(), map), substitute(f.right(), map));
        case Kind::Imp: return Formula::imp(substitute(f.left(), map), substitute(f.right(), map));
    }
    return f;
}

Formula desugar(Formula f) {
    switch (f.kind()) {
        case Kind::Top: return Formula::imp(Formula::bot(), Formula::bot());
        case Kind::Bot:
        case Kind::Atom:
            return f;
        case Kind::Neg: return Formula::imp(desugar(f.child()), Formula::bot());
        case Kind::Box: return Formula::box(desugar(f.child()));
        case Kind::And: return Formula::conj(desugar(f.left()), desugar(f.right()));
        case Kind::Or: return Formula::disj(desugar(f.left()), desugar(f.right()));
        case Kind::Imp: return Formula::imp(desugar(f.left()), desugar(f.right()));
    }
    return f;
}

bool is_desugared(Formula f) { return desugar(f) == f; }

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) { throw SyntaxError(what, pos); }

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool eat(std::string_view tok) {
        skip_ws();
        if (text.substr(pos, tok.size()) == tok) {
            pos += tok.size();
            return true;
        }
        return false;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    Formula parse_imp() {
        Formula lhs = parse_or();
        skip_ws();
        if (eat("->")) return Formula::imp(lhs, parse_imp());
        return lhs;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (true) {
            skip_ws();
            // do not swallow the "|" of a hypothetical "||": grammar has none
            if (pos < text.size() && text[pos] == '|') {
                ++pos;
                f = Formula::disj(f, parse_and());
            } else {
                return f;
            }
        }
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (eat("&")) f = Formula::conj(f, parse_unary());
        return f;
    }

    Formula parse_unary() {
        skip_ws();
        if (pos >= text.size()) fail("expected formula");
        char c = text[pos];
        if (c == '~') {
            ++pos;
            return Formula::neg(parse_unary());
        }
        if (c == '[') {
            if (text.substr(pos, 2) == "[]") {
                pos += 2;
                return Formula::box(parse_unary());
            }
            if (text.substr(pos, 3) == "[.]") {
                pos += 3;
                Formula f = parse_unary();
                return boxdot(f);
            }
            fail("expected \"[]\" or \"[.]\"");
        }
        if (c == '(') {
            ++pos;
            Formula f = parse_imp();
            skip_ws();
            if (!eat(")")) fail("expected ')'");
            return f;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
            std::size_t start = pos;
            ++pos;
            while (pos < text.size() &&
                   ((text[pos] >= 'a' && text[pos] <= 'z') || (text[pos] >= 'A' && text[pos] <= 'Z') ||
                    (text[pos] >= '0' && text[pos] <= '9') || text[pos] == '_'))
                ++pos;
            std::string_view name = text.substr(start, pos - start);
            if (name == "T") return Formula::top();
            if (name == "F") return Formula::bot();
            return Formula::atom(name);
        }
        fail("unexpected character");
    }
};

}  // namespace

Formula parse_formula(std::string_view text) {
    Parser p{text};
    Formula f = p.parse_imp();
    if (!p.at_end()) p.fail("trailing input");
    return f;
}

}  // namespace circseq
