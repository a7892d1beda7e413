// Rule schemas, concrete calculi, backward rule application and instance
// matching, plus the box / slim / ordered classification predicates.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "circseq/sequent.hpp"

namespace circseq {

enum class Rule : std::uint8_t {
    // classical propositional base
    Ax,
    LBot,
    LAnd,
    RAnd,
    LOr,
    ROr,
    LImp,
    RImp,
    // single-conclusion propositional base (terminating, implication-left
    // split by the shape of the implication's antecedent)
    ROr1,
    ROr2,
    LImpAtom,
    LImpAnd,
    LImpOr,
    LImpImp,
    LImpBox,
    // modal rules
    RK4,
    RGL,
    RGrz,
    RT,
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view name);

struct UnknownRule : std::runtime_error {
    explicit UnknownRule(const std::string& name) : std::runtime_error("unknown rule: " + name) {}
};

enum class Base : std::uint8_t { Classical, SingleConclusion };

struct Calculus {
    std::string name;
    Base base = Base::Classical;
    std::vector<Rule> box_rules;  // among RK4, RGL, RGrz; RT listed here too
    bool single_conclusion = false;

    std::vector<Rule> rules() const;  // full schema list, emission order
    bool has_rule(Rule r) const;
};

Calculus g3p();
Calculus g3k4();
Calculus g3gl();
Calculus g3s4();
Calculus g3grz();
Calculus ig3k4();
Calculus ig3gl();

// nullopt for unknown names; accepted: g3p, k4, gl, s4, grz, ik4, igl
std::optional<Calculus> calculus_by_name(std::string_view name);

// Which formulas played which schema role in a matched instance.
struct Instantiation {
    Rule rule;
    std::optional<Formula> principal;  // propositional rules and RT
    // box rules only:
    FormulaMultiset gamma;
    std::optional<Formula> phi;
    Sequent context;  // the passive part (Pi => Delta)
};

struct RuleInstance {
    Rule rule;
    Sequent conclusion;
    std::vector<Sequent> premisses;
    Instantiation inst;
};

// All backward applications of the calculus' rules whose conclusion equals
// the goal, in the deterministic order proof search consumes them: axioms,
// invertible propositional rules, non-invertible propositional rules, RT,
// then box rules. Box rules instantiate Gamma maximally (the set of all
// bodies of boxed antecedent formulas) and emit the star-normalised premiss.
std::vector<RuleInstance> backward_applications(const Calculus& c, const Sequent& goal);

// The premiss tuple the named propositional rule (or RT) writes backward for
// the given principal formula at the given conclusion, or nothing when the
// principal does not fit the rule there. Box rules are not handled here; see
// backward_applications for their instantiation policy.
std::optional<std::vector<Sequent>> rule_premisses(const Calculus& c, Rule r, Formula principal,
                                                   const Sequent& conclusion);

// The premiss a box rule writes for instantiation (gamma, phi), before any
// star normalisation.
Sequent raw_box_premiss(Rule rule, const FormulaMultiset& gamma, Formula phi);

// True (with the witnessing instantiation) iff conclusion/premisses form a
// literal instance of the named schema. Box-rule premisses are accepted in
// raw form or as the star-normal form of a raw premiss; everything else is
// matched multiset-exactly. Throws UnknownRule if the calculus lacks the rule.
std::optional<Instantiation> match_instance(const Calculus& c, Rule rule, const Sequent& conclusion,
                                            const std::vector<Sequent>& premisses);
std::optional<Instantiation> match_instance(const Calculus& c, const std::string& rule,
                                            const Sequent& conclusion,
                                            const std::vector<Sequent>& premisses);

// Rule classification, checked per concrete instance.
bool is_box_instance(const Calculus& c, const RuleInstance& inst);
bool is_slim_instance(const Calculus& c, const RuleInstance& inst);
bool is_ordered_instance(const Calculus& c, const RuleInstance& inst);

// Schema-level flags.
bool rule_is_box(Rule r);      // RK4, RGL, RGrz
bool rule_is_ordered(Rule r);  // propositional rules and RT
int rule_arity(Rule r);

// Rules whose backward application never loses provability, so search can
// commit to the first one without backtracking.
bool rule_invertible(Rule r, Base base);

}  // namespace circseq
