// Finite multisets of formulas, sequents, the sequent algebra (multiplication,
// boxing, the star/set-sequent normalisation) and the Dershowitz-Manna order.

#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circseq/formula.hpp"

namespace circseq {

// Multiset with deterministic iteration: entries sorted by (complexity, print
// string), no zero multiplicities, equality is multiplicity-exact.
class FormulaMultiset {
public:
    FormulaMultiset() = default;
    FormulaMultiset(std::initializer_list<Formula> fs);
    explicit FormulaMultiset(const std::vector<Formula>& fs);

    void add(Formula f, int n = 1);
    // Removes up to n occurrences; returns how many were removed.
    int remove(Formula f, int n = 1);

    int count(Formula f) const;
    bool contains(Formula f) const { return count(f) > 0; }
    bool empty() const { return entries_.empty(); }
    int total() const { return total_; }
    std::size_t distinct() const { return entries_.size(); }

    const std::vector<std::pair<Formula, int>>& entries() const { return entries_; }
    // Every occurrence in order, duplicates adjacent.
    std::vector<Formula> expanded() const;

    FormulaMultiset united(const FormulaMultiset& o) const;      // multiplicities add
    FormulaMultiset minus(const FormulaMultiset& o) const;       // saturating difference
    bool subset_of(const FormulaMultiset& o) const;              // pointwise <=
    FormulaMultiset dedup() const;                               // every multiplicity -> 1

    bool operator==(const FormulaMultiset& o) const { return entries_ == o.entries_; }
    bool operator!=(const FormulaMultiset& o) const { return !(*this == o); }

    std::size_t hash() const noexcept;

private:
    std::vector<std::pair<Formula, int>> entries_;
    int total_ = 0;
};

FormulaMultiset box_multiset(const FormulaMultiset& g);     // []g
FormulaMultiset boxdot_multiset(const FormulaMultiset& g);  // g u []g

// The canonical largest set-shaped boxdot pattern inside g. Candidates x with
// x in g and []x in g are scanned in decreasing complexity (ties by print
// string) and greedily admitted while the accumulated pattern still fits in g.
FormulaMultiset boxdot_core(const FormulaMultiset& g);

// g restricted to its boxdot core plus one copy of everything else.
FormulaMultiset star(const FormulaMultiset& g);

class Sequent {
public:
    Sequent() = default;
    Sequent(FormulaMultiset ante, FormulaMultiset succ)
        : ante_(std::move(ante)), succ_(std::move(succ)) {}

    const FormulaMultiset& ante() const { return ante_; }
    const FormulaMultiset& succ() const { return succ_; }

    bool operator==(const Sequent& o) const { return ante_ == o.ante_ && succ_ == o.succ_; }
    bool operator!=(const Sequent& o) const { return !(*this == o); }

    std::size_t hash() const noexcept;
    std::string text() const;
    int weight() const;  // total node count over both sides

private:
    FormulaMultiset ante_;
    FormulaMultiset succ_;
};

struct SequentHash {
    std::size_t operator()(const Sequent& s) const noexcept { return s.hash(); }
};

// Componentwise multiset union; the empty sequent is the unit.
Sequent multiply(const Sequent& a, const Sequent& b);

// /\ante -> \/succ, folding each side right-associatively in print-string
// order; empty conjunction is T, empty disjunction is F.
Formula interpret(const Sequent& s);

Sequent box_sequent(const Sequent& s);
Sequent boxdot_sequent(const Sequent& s);
Sequent star(const Sequent& s);
bool is_set_sequent(const Sequent& s);
bool set_equivalent(const Sequent& a, const Sequent& b);

Sequent desugar(const Sequent& s);

// Dershowitz-Manna comparison of the combined side multisets: a <= b iff the
// union multiset of a is reachable from b's by replacing formulas with
// finitely many formulas of strictly lower complexity.
bool dm_leq(const Sequent& a, const Sequent& b);
// Strict variant: dm_leq and the union multisets differ. (Requiring mere
// sequent inequality would make the relation cyclic on sequents whose sides
// are rearrangements of each other; strictness on unions keeps it a proper
// order, which the rule classification relies on.)
bool dm_less(const Sequent& a, const Sequent& b);

// "G => D" with comma-separated formulas; either side may be empty.
Sequent parse_sequent(std::string_view text);

}  // namespace circseq
