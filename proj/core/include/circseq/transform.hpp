// Executable proof transformers: depth-preserving weakening, contraction and
// inversion, set-proof normalisation, and the translations between standard
// and circular proofs (GL to circular K4 and back, Grz to circular S4).

#pragma once

#include "circseq/search.hpp"

namespace circseq {

struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

struct ShapeMismatch : std::runtime_error {
    explicit ShapeMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

// Valid proof of S plus extra gives a valid proof of extra . S. Standard
// proofs keep their depth (box rules absorb the extra into their contexts).
// Circular proofs are re-validated; a circular leaf whose companion sits
// below the absorbing box application is repaired by unfolding one cycle,
// which can deepen the proof.
DerivationTree weaken(const Calculus& c, const DerivationTree& d, const Sequent& extra);

// Valid standard proof of dup . dup . S gives a valid proof of dup . S with
// depth no greater than the input.
DerivationTree contract(const Calculus& c, const DerivationTree& d, const Sequent& dup);

enum class InversionShape : std::uint8_t { LAnd, LOr, LImp, RAnd, ROr, RImp };

// Premiss-wise inversion of a standard proof whose endsequent carries the
// principal formula on the shape's side. Returns one proof per inverted
// premiss (two for LOr, LImp and RAnd), each of depth no greater than the
// input.
std::vector<DerivationTree> invert(const Calculus& c, const DerivationTree& d, InversionShape shape,
                                   Formula principal);

// Rewrites every box-rule application so its premiss is a set-sequent,
// without changing the endsequent or increasing the depth.
DerivationTree to_set_proof(const Calculus& c, const DerivationTree& d);

// Standard GL proof to circular K4 proof of the same (desugared) endsequent.
DerivationTree gl_to_circular(const DerivationTree& d);

// Circular K4 proof to standard GL proof of the same (desugared) endsequent.
DerivationTree circular_to_standard(const DerivationTree& d);

// Standard Grz proof (G3p + RT + RGrz) to circular S4 proof.
DerivationTree grz_to_circular_s4(const DerivationTree& d);

// Every branch with two equal labels has an application of the given rule
// whose conclusion lies at or above the lower occurrence and below the upper.
bool box_rule_between_repeats(const DerivationTree& d, Rule r);

}  // namespace circseq
