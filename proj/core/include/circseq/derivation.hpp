// Derivation trees, validity checking for standard and circular proofs,
// proof statistics, and the JSON interchange format.

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "circseq/calculus.hpp"

namespace circseq {

struct DerivationTree {
    Sequent sequent;
    // a rule name, or the leaf tags "circular" / "assumption"
    std::string rule;
    std::vector<DerivationTree> premisses;

    bool is_leaf() const { return premisses.empty(); }
    bool is_circular() const { return rule == "circular"; }
    bool is_assumption() const { return rule == "assumption"; }

    static DerivationTree leaf(Sequent s, std::string tag) {
        return DerivationTree{std::move(s), std::move(tag), {}};
    }
    static DerivationTree node(Sequent s, Rule r, std::vector<DerivationTree> kids) {
        return DerivationTree{std::move(s), rule_name(r), std::move(kids)};
    }
};

struct Verdict {
    bool valid = false;
    std::string reason;      // empty when valid
    std::vector<int> path;   // child indices from the root to the offending node

    explicit operator bool() const { return valid; }
    static Verdict ok() { return Verdict{true, {}, {}}; }
};

// Valid iff every inner node is an instance of a rule of the calculus and
// every leaf is an axiom instance.
Verdict check_standard(const Calculus& c, const DerivationTree& d);

// Valid iff every leaf is an axiom instance or is tagged circular with a
// node strictly below it on its branch carrying the identical sequent
// (multiplicity-exact, not merely set-equivalent).
Verdict check_circular(const Calculus& c, const DerivationTree& d);

struct ProofStats {
    int depth = 0;                               // nodes on the longest branch
    std::map<std::string, int> lowest_height;    // per rule; absent rule -> 0
    std::map<std::string, int> count_at_lowest;  // applications at that height
};

int depth(const DerivationTree& d);
ProofStats stats(const DerivationTree& d);

int count_rule(const DerivationTree& d, Rule r);
int count_tag(const DerivationTree& d, const std::string& tag);

struct FormatError : std::runtime_error {
    std::string path;  // JSON-pointer-ish location
    FormatError(std::string msg, std::string where)
        : std::runtime_error(msg + " at " + where), path(std::move(where)) {}
};

std::string to_interchange(const DerivationTree& d);
DerivationTree from_interchange(const std::string& text);

// Indented plain-text rendering, one sequent per line.
std::string to_text(const DerivationTree& d);

// All sequents of the tree are desugared (T and ~ rewritten away).
DerivationTree desugar(const DerivationTree& d);

}  // namespace circseq
