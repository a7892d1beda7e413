// Terminating backward proof search: decision procedures for standard and
// circular provability, the finite sequent universe that bounds them, and
// the enumeration corpus used by the cross-validation harness.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "circseq/derivation.hpp"

namespace circseq {

enum class Mode : std::uint8_t { Standard, Circular };

struct SearchConfig {
    Calculus calculus;
    Mode mode = Mode::Standard;
    std::uint64_t max_visits = 1'000'000;  // safety cap, distinct from NotProvable
    bool trace = false;
    std::ostream* trace_out = nullptr;  // defaults to stderr when trace is set
};

struct ResourceLimit : std::runtime_error {
    std::uint64_t visited;
    explicit ResourceLimit(std::uint64_t v)
        : std::runtime_error("search resource cap exceeded"), visited(v) {}
};

// Finite universe for a goal: sequents over the subformula closure (extended
// with the []( x -> []x ) guards for Grz and the curried implications of the
// single-conclusion base) whose combined weight stays under a bound chosen so
// that every sequent backward search or a set-normalised proof can mention is
// a member. The size is the member count (saturating at uint64 max).
struct ClosureSet {
    FormulaSet formulas;
    int weight_bound = 0;
    std::uint64_t size = 0;

    bool member(const Sequent& s) const;
};

ClosureSet closure(const Sequent& goal, const Calculus& c,
                   std::optional<std::uint64_t> max_sequents = std::nullopt);

// Backward search over the desugared goal. Returns a checker-valid proof of
// the desugared goal, or nothing (definitive: the search is exhaustive over
// the finite universe). Throws ResourceLimit if the visit cap is hit and
// std::invalid_argument for goals a single-conclusion calculus cannot state.
std::optional<DerivationTree> prove(const SearchConfig& cfg, const Sequent& goal);

bool decide(const SearchConfig& cfg, const Sequent& goal);

// Deterministic duplicate-free enumeration of all formulas up to the given
// node count over the given number of atoms (plus T and F), emitted as
// right-hand-side goals "=> f".
std::vector<Sequent> corpus(int atoms, int max_size);

}  // namespace circseq
