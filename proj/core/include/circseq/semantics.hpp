// Finite Kripke models as an independent sound-only oracle: evaluation and
// bounded countermodel enumeration under frame conditions.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "circseq/sequent.hpp"

namespace circseq {

struct KripkeModel {
    int worlds = 0;
    std::vector<std::pair<int, int>> access;           // explicit edge list
    std::vector<std::set<std::string>> valuation;      // atoms true per world

    bool related(int u, int v) const;
    bool is_transitive() const;
    bool is_reflexive() const;
    bool is_irreflexive() const;

    std::string describe() const;
};

struct UnknownWorld : std::runtime_error {
    explicit UnknownWorld(int w)
        : std::runtime_error("world " + std::to_string(w) + " not in model") {}
};

bool eval(const KripkeModel& m, int world, Formula f);

enum class FrameClass : std::uint8_t { K4, S4, GLFinite };

std::optional<FrameClass> frame_by_name(std::string_view name);  // k4 | s4 | gl-finite

// Enumerates models up to max_worlds under the frame condition (K4:
// transitive; S4: reflexive transitive; GLFinite: transitive irreflexive),
// with valuations over the goal's atoms, canonicalised up to world renaming.
// Returns a model and world falsifying the goal's interpretation, or nothing
// (inconclusive: the search is bounded).
struct Countermodel {
    KripkeModel model;
    int world = 0;
};

std::optional<Countermodel> countermodel(const Sequent& goal, FrameClass frame, int max_worlds);

}  // namespace circseq
