// Modal propositional syntax: hash-consed formula trees, the ASCII
// grammar, and the small structural operations everything else builds on.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace circseq {

enum class Kind : std::uint8_t { Top, Bot, Atom, Neg, And, Or, Imp, Box };

// Interned handle. Two formulas are equal iff they are the same node, so
// equality and hashing are O(1). Nodes live for the whole process.
class Formula {
public:
    Formula() = delete;

    static Formula top();
    static Formula bot();
    static Formula atom(std::string_view name);
    static Formula neg(Formula f);
    static Formula conj(Formula l, Formula r);
    static Formula disj(Formula l, Formula r);
    static Formula imp(Formula l, Formula r);
    static Formula box(Formula f);

    Kind kind() const;
    const std::string& atom_name() const;  // Atom
    Formula child() const;                 // Neg, Box
    Formula left() const;                  // And, Or, Imp
    Formula right() const;                 // And, Or, Imp

    // Number of connectives and modal operators.
    int complexity() const;
    // Number of syntax-tree nodes (leaves included).
    int node_count() const;
    // Canonical print; parse(text()) == *this.
    const std::string& text() const;

    bool operator==(const Formula& o) const noexcept { return node_ == o.node_; }
    bool operator!=(const Formula& o) const noexcept { return node_ != o.node_; }

    std::size_t hash() const noexcept;

private:
    explicit Formula(const void* n) : node_(n) {}
    const void* node_;
    friend struct FormulaInterner;
};

// Deterministic total order: complexity first, then print string.
bool formula_less(const Formula& a, const Formula& b);

struct FormulaLess {
    bool operator()(const Formula& a, const Formula& b) const { return formula_less(a, b); }
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

using FormulaSet = std::set<Formula, FormulaLess>;

// phi & []phi
Formula boxdot(Formula f);

// Reflexive-transitive subterm closure, f included.
FormulaSet subformulas(Formula f);

// Homomorphic replacement of atoms; atoms absent from the map are unchanged.
Formula substitute(Formula f, const std::map<std::string, Formula>& map);

// T becomes F -> F and ~x becomes x -> F, recursively. The calculi have no
// rules for T or ~, so proof search and the transformers work on this image.
Formula desugar(Formula f);
bool is_desugared(Formula f);

struct SyntaxError : std::runtime_error {
    std::size_t offset;
    SyntaxError(std::string msg, std::size_t off)
        : std::runtime_error(std::move(msg)), offset(off) {}
};

// Grammar (tightest first): "~" and "[]" prefix; "&"; "|"; "->" (right
// associative; "&" and "|" associate left). Atoms are [a-zA-Z][a-zA-Z0-9_]*
// except the reserved "T" and "F". "[.]x" is sugar for "(x & []x)".
Formula parse_formula(std::string_view text);

}  // namespace circseq
