#include "circseq/transform.hpp"

#include <algorithm>
#include <cassert>

namespace circseq {

namespace {

Rule rule_of(const DerivationTree& n) {
    auto r = rule_from_name(n.rule);
    if (!r) throw InvalidInput("unknown rule \"" + n.rule + "\"");
    return *r;
}

Instantiation rematch(const Calculus& c, const DerivationTree& n) {
    std::vector<Sequent> prems;
    prems.reserve(n.premisses.size());
    for (const DerivationTree& k : n.premisses) prems.push_back(k.sequent);
    auto inst = match_instance(c, rule_of(n), n.sequent, prems);
    if (!inst) throw InvalidInput("node is not a rule instance at \"" + n.sequent.text() + "\"");
    return *inst;
}

bool sequent_empty(const Sequent& s) { return s.ante().empty() && s.succ().empty(); }

Sequent remove_one(const Sequent& s, Formula f, bool left) {
    FormulaMultiset a = s.ante(), c = s.succ();
    int removed = left ? a.remove(f) : c.remove(f);
    if (removed != 1) throw std::logic_error("remove_one: formula not present");
    return Sequent(std::move(a), std::move(c));
}

DerivationTree rebuilt(const Calculus& c, Sequent seq, Rule r, std::vector<DerivationTree> kids) {
    std::vector<Sequent> prems;
    prems.reserve(kids.size());
    for (const DerivationTree& k : kids) prems.push_back(k.sequent);
    if (!match_instance(c, r, seq, prems))
        throw std::logic_error(std::string("transformed node is not an instance of ") +
                               rule_name(r) + " at \"" + seq.text() + "\"");
    return DerivationTree{std::move(seq), rule_name(r), std::move(kids)};
}

// ---------------------------------------------------------------------------
// weakening

struct WeakenWalker {
    const Calculus& c;
    std::vector<const DerivationTree*> orig_branch;
    std::vector<Sequent> new_branch;

    DerivationTree walk(const DerivationTree& n, const Sequent& extra) {
        bool active = !sequent_empty(extra);
        Sequent label = active ? multiply(extra, n.sequent) : n.sequent;
        if (n.is_leaf()) {
            if (n.is_circular()) {
                for (auto it = new_branch.rbegin(); it != new_branch.rend(); ++it)
                    if (*it == label) return DerivationTree::leaf(label, "circular");
                // the companion was weakened away below the absorbing box
                // application; unfold one cycle from the original companion
                const DerivationTree* companion = nullptr;
                for (auto it = orig_branch.rbegin(); it != orig_branch.rend(); ++it)
                    if ((*it)->sequent == n.sequent) {
                        companion = *it;
                        break;
                    }
                if (!companion) throw std::logic_error("weaken: no companion for a circular leaf");
                return walk(*companion, Sequent{});
            }
            return DerivationTree::leaf(label, n.rule);
        }
        Rule r = rule_of(n);
        Sequent child_extra = (active && rule_is_box(r)) ? Sequent{} : extra;
        orig_branch.push_back(&n);
        new_branch.push_back(label);
        std::vector<DerivationTree> kids;
        kids.reserve(n.premisses.size());
        for (const DerivationTree& k : n.premisses) kids.push_back(walk(k, child_extra));
        new_branch.pop_back();
        orig_branch.pop_back();
        return rebuilt(c, std::move(label), r, std::move(kids));
    }
};

}  // namespace

DerivationTree weaken(const Calculus& c, const DerivationTree& d, const Sequent& extra) {
    Verdict v = check_circular(c, d);
    if (!v) throw InvalidInput(std::string("weaken: ") + v.reason);
    if (c.single_conclusion && !extra.succ().empty())
        throw InvalidInput("weaken: single-conclusion calculi admit antecedent weakening only");
    if (sequent_empty(extra)) return d;
    WeakenWalker w{c};
    DerivationTree out = w.walk(d, extra);
    Verdict vo = check_circular(c, out);
    if (!vo) throw std::logic_error("weaken produced an invalid proof: " + vo.reason);
    return out;
}

// ---------------------------------------------------------------------------
// inversion

namespace {

struct ShapeInfo {
    Rule rule;
    bool left;
    int outputs;
};

ShapeInfo shape_info(InversionShape s) {
    switch (s) {
        case InversionShape::LAnd: return {Rule::LAnd, true, 1};
        case InversionShape::LOr: return {Rule::LOr, true, 2};
        case InversionShape::LImp: return {Rule::LImp, true, 2};
        case InversionShape::RAnd: return {Rule::RAnd, false, 2};
        case InversionShape::ROr: return {Rule::ROr, false, 1};
        case InversionShape::RImp: return {Rule::RImp, false, 1};
    }
    return {Rule::LAnd, true, 1};
}

// The sequent the inversion proves, for the given output index.
Sequent invert_target(InversionShape s, Formula f, const Sequent& seq, int variant) {
    FormulaMultiset a = seq.ante(), c = seq.succ();
    switch (s) {
        case InversionShape::LAnd:
            a.remove(f);
            a.add(f.left());
            a.add(f.right());
            break;
        case InversionShape::LOr:
            a.remove(f);
            a.add(variant == 0 ? f.left() : f.right());
            break;
        case InversionShape::LImp:
            a.remove(f);
            if (variant == 0)
                a.add(f.right());
            else
                c.add(f.left());
            break;
        case InversionShape::RAnd:
            c.remove(f);
            c.add(variant == 0 ? f.left() : f.right());
            break;
        case InversionShape::ROr:
            c.remove(f);
            c.add(f.left());
            c.add(f.right());
            break;
        case InversionShape::RImp:
            c.remove(f);
            a.add(f.left());
            c.add(f.right());
            break;
    }
    return Sequent(std::move(a), std::move(c));
}

int premiss_index_for(InversionShape s, int variant) {
    switch (s) {
        case InversionShape::LAnd:
        case InversionShape::ROr:
        case InversionShape::RImp:
            return 0;
        case InversionShape::LOr:
        case InversionShape::RAnd:
            return variant;
        case InversionShape::LImp:
            return variant == 0 ? 1 : 0;  // outputs: G,psi => D then G => phi,D
    }
    return 0;
}

DerivationTree invert_one(const Calculus& c, const DerivationTree& n, InversionShape s, Formula f,
                          int variant) {
    Sequent target = invert_target(s, f, n.sequent, variant);
    if (n.is_leaf()) {
        if (n.is_circular() || n.is_assumption())
            throw InvalidInput("invert: standard proofs only");
        Rule r = rule_of(n);
        if (!match_instance(c, r, target, {}))
            throw std::logic_error("inversion broke an axiom at \"" + n.sequent.text() + "\"");
        return DerivationTree::leaf(std::move(target), n.rule);
    }
    Rule r = rule_of(n);
    Instantiation inst = rematch(c, n);
    ShapeInfo si = shape_info(s);
    if (r == si.rule && inst.principal && *inst.principal == f)
        return n.premisses[premiss_index_for(s, variant)];
    if (rule_is_box(r)) {
        // the principal is a compound non-box formula, so it lives in the
        // passive context; the premiss does not mention it
        return rebuilt(c, std::move(target), r, n.premisses);
    }
    auto prems = rule_premisses(c, r, *inst.principal, target);
    if (!prems) throw std::logic_error("inversion broke an instance at \"" + n.sequent.text() + "\"");
    std::vector<DerivationTree> kids;
    for (std::size_t i = 0; i < n.premisses.size(); ++i) {
        const DerivationTree& old = n.premisses[i];
        const Sequent& want = (*prems)[i];
        if (want == old.sequent) {
            kids.push_back(old);
        } else if (want == invert_target(s, f, old.sequent, variant)) {
            kids.push_back(invert_one(c, old, s, f, variant));
        } else {
            // the rule rewrote this premiss's carrying side; fall back to
            // weakening whichever variant fits inside it
            FormulaMultiset da = want.ante().minus(old.sequent.ante());
            FormulaMultiset dc = want.succ().minus(old.sequent.succ());
            if (multiply(old.sequent, Sequent(da, dc)) == want) {
                kids.push_back(weaken(c, old, Sequent(da, dc)));
            } else {
                Sequent inv = invert_target(s, f, old.sequent, variant);
                FormulaMultiset ia = want.ante().minus(inv.ante());
                FormulaMultiset ic = want.succ().minus(inv.succ());
                if (multiply(inv, Sequent(ia, ic)) != want)
                    throw std::logic_error("inversion could not rebuild a premiss");
                kids.push_back(weaken(c, invert_one(c, old, s, f, variant), Sequent(ia, ic)));
            }
        }
    }
    return rebuilt(c, std::move(target), r, std::move(kids));
}

}  // namespace

std::vector<DerivationTree> invert(const Calculus& c, const DerivationTree& d, InversionShape shape,
                                   Formula principal) {
    Verdict v = check_standard(c, d);
    if (!v) throw InvalidInput(std::string("invert: ") + v.reason);
    ShapeInfo si = shape_info(shape);
    const FormulaMultiset& side = si.left ? d.sequent.ante() : d.sequent.succ();
    Kind want = si.rule == Rule::LAnd || si.rule == Rule::RAnd ? Kind::And
                : si.rule == Rule::LOr || si.rule == Rule::ROr ? Kind::Or
                                                               : Kind::Imp;
    if (principal.kind() != want || !side.contains(principal))
        throw ShapeMismatch("invert: endsequent does not carry the requested principal");
    std::vector<DerivationTree> out;
    for (int variant = 0; variant < si.outputs; ++variant) {
        DerivationTree t = invert_one(c, d, shape, principal, variant);
        Verdict vo = check_standard(c, t);
        if (!vo) throw std::logic_error("invert produced an invalid proof: " + vo.reason);
        out.push_back(std::move(t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// contraction

namespace {

DerivationTree contract_formula(const Calculus& c, const DerivationTree& d, Formula f, bool left);

// One inversion output with a single surplus copy contracted back, used for
// the principal-duplication cases.
DerivationTree invert_and_contract(const Calculus& c, const DerivationTree& child,
                                   InversionShape s, Formula f, int variant,
                                   const std::vector<std::pair<Formula, bool>>& dups) {
    DerivationTree t = invert_one(c, child, s, f, variant);
    for (const auto& [g, side] : dups) t = contract_formula(c, t, g, side);
    return t;
}

DerivationTree contract_formula(const Calculus& c, const DerivationTree& d, Formula f, bool left) {
    const FormulaMultiset& side = left ? d.sequent.ante() : d.sequent.succ();
    if (side.count(f) < 2) throw std::logic_error("contract: formula not duplicated");
    Sequent target = remove_one(d.sequent, f, left);

    if (d.is_leaf()) {
        Rule r = rule_of(d);
        if (!match_instance(c, r, target, {}))
            throw std::logic_error("contraction broke an axiom");
        return DerivationTree::leaf(std::move(target), d.rule);
    }

    Rule r = rule_of(d);
    Instantiation inst = rematch(c, d);

    if (rule_is_box(r)) {
        // a copy inside the passive context disappears without touching the
        // premiss; otherwise the duplication sits inside the boxed part
        const FormulaMultiset& ctx = left ? inst.context.ante() : inst.context.succ();
        if (ctx.contains(f)) return rebuilt(c, std::move(target), r, d.premisses);
        if (!left || f.kind() != Kind::Box)
            throw std::logic_error("contract: box conclusion duplication outside the boxed part");
        Formula body = f.child();
        if (inst.gamma.count(body) < 2)
            throw std::logic_error("contract: boxed duplication not visible in gamma");
        FormulaMultiset gamma2 = inst.gamma;
        gamma2.remove(body);
        const DerivationTree& child = d.premisses[0];
        Sequent raw = raw_box_premiss(r, inst.gamma, *inst.phi);
        if (child.sequent == raw) {
            DerivationTree k = child;
            if (r != Rule::RGrz) k = contract_formula(c, k, body, true);
            k = contract_formula(c, k, f, true);
            return rebuilt(c, std::move(target), r, {std::move(k)});
        }
        // star-normalised premiss: dropping a duplicated body does not change
        // the star, so the child proof is reused as is
        Sequent want = star(raw_box_premiss(r, gamma2, *inst.phi));
        if (child.sequent != want)
            throw std::logic_error("contract: star premiss changed under contraction");
        return rebuilt(c, std::move(target), r, d.premisses);
    }

    if (r == Rule::RT) {
        Formula principal = *inst.principal;
        if (!left || f != principal) {
            std::vector<DerivationTree> kids{contract_formula(c, d.premisses[0], f, left)};
            return rebuilt(c, std::move(target), r, std::move(kids));
        }
        if (side.count(f) >= 3) {
            std::vector<DerivationTree> kids{contract_formula(c, d.premisses[0], f, true)};
            return rebuilt(c, std::move(target), r, std::move(kids));
        }
        // both copies interact with the reflexivity step; re-derive
        if (desugar(target) != target)
            throw InvalidInput("contract: reflexivity case needs a desugared proof");
        SearchConfig cfg{c, Mode::Standard};
        auto witness = prove(cfg, target);
        if (!witness) throw std::logic_error("contract: reflexivity case not re-derivable");
        return *witness;
    }

    Formula principal = *inst.principal;
    bool principal_left = r != Rule::RAnd && r != Rule::ROr && r != Rule::RImp &&
                          r != Rule::ROr1 && r != Rule::ROr2;
    if (f != principal || left != principal_left) {
        // duplication lives in the passive context of every premiss
        std::vector<DerivationTree> kids;
        for (const DerivationTree& k : d.premisses)
            kids.push_back(contract_formula(c, k, f, left));
        return rebuilt(c, std::move(target), r, std::move(kids));
    }

    // the principal itself is duplicated: invert the surviving copy inside
    // each premiss, contract the doubled pieces, and re-apply the rule
    switch (r) {
        case Rule::LAnd: {
            auto k = invert_and_contract(c, d.premisses[0], InversionShape::LAnd, f, 0,
                                         {{f.left(), true}, {f.right(), true}});
            return rebuilt(c, std::move(target), r, {std::move(k)});
        }
        case Rule::RAnd: {
            auto k1 = invert_and_contract(c, d.premisses[0], InversionShape::RAnd, f, 0,
                                          {{f.left(), false}});
            auto k2 = invert_and_contract(c, d.premisses[1], InversionShape::RAnd, f, 1,
                                          {{f.right(), false}});
            return rebuilt(c, std::move(target), r, {std::move(k1), std::move(k2)});
        }
        case Rule::LOr: {
            auto k1 = invert_and_contract(c, d.premisses[0], InversionShape::LOr, f, 0,
                                          {{f.left(), true}});
            auto k2 = invert_and_contract(c, d.premisses[1], InversionShape::LOr, f, 1,
                                          {{f.right(), true}});
            return rebuilt(c, std::move(target), r, {std::move(k1), std::move(k2)});
        }
        case Rule::ROr: {
            auto k = invert_and_contract(c, d.premisses[0], InversionShape::ROr, f, 0,
                                         {{f.left(), false}, {f.right(), false}});
            return rebuilt(c, std::move(target), r, {std::move(k)});
        }
        case Rule::LImp: {
            auto k1 = invert_and_contract(c, d.premisses[0], InversionShape::LImp, f, 1,
                                          {{f.left(), false}});
            auto k2 = invert_and_contract(c, d.premisses[1], InversionShape::LImp, f, 0,
                                          {{f.right(), true}});
            return rebuilt(c, std::move(target), r, {std::move(k1), std::move(k2)});
        }
        case Rule::RImp: {
            auto k = invert_and_contract(c, d.premisses[0], InversionShape::RImp, f, 0,
                                         {{f.left(), true}, {f.right(), false}});
            return rebuilt(c, std::move(target), r, {std::move(k)});
        }
        default: {
            // single-conclusion implication-left variants: re-derive
            if (desugar(target) != target)
                throw InvalidInput("contract: this case needs a desugared proof");
            SearchConfig cfg{c, Mode::Standard};
            auto witness = prove(cfg, target);
            if (!witness) throw std::logic_error("contract: case not re-derivable");
            return *witness;
        }
    }
}

}  // namespace

DerivationTree contract(const Calculus& c, const DerivationTree& d, const Sequent& dup) {
    Verdict v = check_standard(c, d);
    if (!v) throw InvalidInput(std::string("contract: ") + v.reason);
    if (!multiply(dup, dup).ante().subset_of(d.sequent.ante()) ||
        !multiply(dup, dup).succ().subset_of(d.sequent.succ()))
        throw InvalidInput("contract: endsequent does not contain the duplicate twice");
    DerivationTree out = d;
    for (const Formula& f : dup.ante().expanded()) out = contract_formula(c, out, f, true);
    for (const Formula& f : dup.succ().expanded()) out = contract_formula(c, out, f, false);
    Verdict vo = check_standard(c, out);
    if (!vo) throw std::logic_error("contract produced an invalid proof: " + vo.reason);
    return out;
}

// ---------------------------------------------------------------------------
// set-proof normalisation

namespace {

// Proof of a sequent with the same members but different multiplicities:
// weaken in what is missing, contract away the surplus.
DerivationTree derive_structural(const Calculus& c, const DerivationTree& have,
                                 const Sequent& want) {
    if (have.sequent == want) return have;
    FormulaMultiset wa = want.ante().minus(have.sequent.ante());
    FormulaMultiset wc = want.succ().minus(have.sequent.succ());
    DerivationTree t = sequent_empty(Sequent(wa, wc)) ? have : weaken(c, have, Sequent(wa, wc));
    for (const auto& [f, n] : t.sequent.ante().entries()) {
        int surplus = n - want.ante().count(f);
        for (int i = 0; i < surplus; ++i) t = contract_formula(c, t, f, true);
    }
    for (const auto& [f, n] : t.sequent.succ().entries()) {
        int surplus = n - want.succ().count(f);
        for (int i = 0; i < surplus; ++i) t = contract_formula(c, t, f, false);
    }
    if (t.sequent != want) throw std::logic_error("derive_structural missed its target");
    return t;
}

}  // namespace

DerivationTree to_set_proof(const Calculus& c, const DerivationTree& d) {
    Verdict v = check_standard(c, d);
    if (!v) throw InvalidInput(std::string("to_set_proof: ") + v.reason);

    struct Walker {
        const Calculus& c;
        DerivationTree go(const DerivationTree& n) {
            if (n.is_leaf()) return n;
            Rule r = rule_of(n);
            std::vector<DerivationTree> kids;
            kids.reserve(n.premisses.size());
            for (const DerivationTree& k : n.premisses) kids.push_back(go(k));
            if (!rule_is_box(r)) return rebuilt(c, n.sequent, r, std::move(kids));
            DerivationTree child = std::move(kids[0]);
            Sequent starred = star(child.sequent);
            if (starred != child.sequent) child = derive_structural(c, child, starred);
            std::vector<Sequent> prems{child.sequent};
            if (!match_instance(c, r, n.sequent, prems)) {
                // fall back to the maximal instantiation for this conclusion
                FormulaMultiset gamma_max;
                for (const auto& [f, cnt] : n.sequent.ante().entries())
                    if (f.kind() == Kind::Box) gamma_max.add(f.child());
                gamma_max = gamma_max.dedup();
                Instantiation inst = rematch(c, n);
                Sequent target = star(raw_box_premiss(r, gamma_max, *inst.phi));
                child = derive_structural(c, child, target);
            }
            return rebuilt(c, n.sequent, r, {std::move(child)});
        }
    };
    Walker w{c};
    DerivationTree out = w.go(d);
    Verdict vo = check_standard(c, out);
    if (!vo) throw std::logic_error("to_set_proof produced an invalid proof: " + vo.reason);
    return out;
}

// ---------------------------------------------------------------------------
// translations

namespace {

// navigation by child-index path
DerivationTree* navigate(DerivationTree& d, const std::vector<int>& path) {
    DerivationTree* cur = &d;
    for (int i : path) cur = &cur->premisses[i];
    return cur;
}

// pre-order search for the lowest (then leftmost) application of a rule
bool find_lowest(const DerivationTree& n, Rule r, int height, std::vector<int>& cur,
                 std::vector<int>& best, int& best_height) {
    if (n.rule == rule_name(r) && (best_height < 0 || height < best_height)) {
        best = cur;
        best_height = height;
    }
    for (int i = 0; i < static_cast<int>(n.premisses.size()); ++i) {
        cur.push_back(i);
        find_lowest(n.premisses[i], r, height + 1, cur, best, best_height);
        cur.pop_back();
    }
    return best_height >= 0;
}

DerivationTree truncate_at_repeats(const DerivationTree& n, std::vector<Sequent>& branch) {
    for (const Sequent& s : branch)
        if (s == n.sequent) return DerivationTree::leaf(n.sequent, "circular");
    DerivationTree out{n.sequent, n.rule, {}};
    branch.push_back(n.sequent);
    for (const DerivationTree& k : n.premisses)
        out.premisses.push_back(truncate_at_repeats(k, branch));
    branch.pop_back();
    return out;
}

struct UnfoldTranslator {
    Calculus source;       // the calculus the admissibility witnesses live in
    Calculus mix;          // source plus the companion box rule
    Calculus target;       // the circular system the result is checked in
    Rule from_rule;        // the box rule being eliminated
    Rule to_rule;          // its circular companion

    DerivationTree run(const DerivationTree& d0) {
        DerivationTree d = desugar(d0);
        Verdict v = check_standard(source, d);
        if (!v) throw InvalidInput(std::string("translate: ") + v.reason);

        ClosureSet cs = closure(d.sequent, mix);
        DerivationTree cur = to_set_proof(mix, d);
        std::uint64_t rounds = 0;
        while (true) {
            if (count_rule(cur, from_rule) == 0) {
                Verdict vt = check_circular(target, cur);
                if (!vt) throw std::logic_error("translate: residue not in target calculus");
                return cur;
            }
            std::vector<Sequent> branch;
            DerivationTree trunc = truncate_at_repeats(cur, branch);
            if (count_rule(trunc, from_rule) == 0 && check_circular(target, trunc).valid)
                return trunc;

            std::vector<int> path, cur_path;
            int best_height = -1;
            find_lowest(cur, from_rule, 1, cur_path, path, best_height);
            DerivationTree* node = navigate(cur, path);
            Instantiation inst = rematch(mix, *node);
            Sequent witness_goal = star(raw_box_premiss(to_rule, inst.gamma, *inst.phi));
            SearchConfig cfg{source, Mode::Standard};
            auto witness = prove(cfg, witness_goal);
            if (!witness)
                throw std::logic_error("translate: companion admissibility witness not derivable");
            std::vector<Sequent> prems{witness->sequent};
            if (!match_instance(mix, to_rule, node->sequent, prems))
                throw std::logic_error("translate: companion premiss does not fit");
            *node = DerivationTree{node->sequent, rule_name(to_rule), {std::move(*witness)}};

            if (++rounds > cs.size)
                throw std::logic_error("translate: exceeded the closure bound");
        }
    }
};

}  // namespace

DerivationTree gl_to_circular(const DerivationTree& d) {
    UnfoldTranslator t{g3gl(),
                       Calculus{"g3p+gl+k4", Base::Classical, {Rule::RGL, Rule::RK4}, false},
                       g3k4(), Rule::RGL, Rule::RK4};
    return t.run(d);
}

DerivationTree grz_to_circular_s4(const DerivationTree& d) {
    UnfoldTranslator t{g3grz(),
                       Calculus{"g3p+t+grz+k4", Base::Classical,
                                {Rule::RT, Rule::RGrz, Rule::RK4}, false},
                       g3s4(), Rule::RGrz, Rule::RK4};
    return t.run(d);
}

namespace {

struct CircularToStandard {
    Calculus gl = g3gl();
    Calculus k4 = g3k4();

    struct Result {
        DerivationTree proof;  // GL proof of chi(ap), eta(nap), S^a => S^s
        FormulaSet ap;         // as box f
        FormulaSet nap;        // as f & box f
    };

    static Formula key_of(const Sequent& s) { return desugar(interpret(s)); }

    Sequent with_context(const FormulaSet& ap, const FormulaSet& nap, const Sequent& s) {
        FormulaMultiset a = s.ante();
        for (Formula f : ap) a.add(Formula::box(f));
        for (Formula f : nap) a.add(boxdot(f));
        return Sequent(std::move(a), s.succ());
    }

    DerivationTree derive(const Sequent& goal) {
        SearchConfig cfg{gl, Mode::Standard};
        auto proof = prove(cfg, goal);
        if (!proof)
            throw std::logic_error("translate: expected-derivable sequent failed: \"" +
                                   goal.text() + "\"");
        return *proof;
    }

    Result go(const DerivationTree& n) {
        if (n.is_leaf() && !n.is_circular() && !n.is_assumption())
            return {DerivationTree::leaf(n.sequent, n.rule), {}, {}};
        if (n.is_leaf()) {
            // assumption leaf (possibly an unresolved circular one): its
            // interpretation, boxdotted, yields the sequent
            Formula f = key_of(n.sequent);
            Sequent goal = with_context({}, {f}, n.sequent);
            return {derive(goal), {}, {f}};
        }

        Rule r = rule_of(n);
        std::vector<Result> sub;
        sub.reserve(n.premisses.size());
        for (const DerivationTree& k : n.premisses) sub.push_back(go(k));
        FormulaSet ap, nap;
        for (const Result& s : sub) {
            ap.insert(s.ap.begin(), s.ap.end());
            nap.insert(s.nap.begin(), s.nap.end());
        }
        Formula fI = key_of(n.sequent);
        bool discharge = ap.count(fI) || nap.count(fI);

        if (r == Rule::RK4) {
            // everything hanging above a companion step moves to the boxed side
            FormulaSet ap2 = ap;
            for (Formula f : nap) ap2.insert(f);
            if (discharge) {
                ap2.erase(fI);
                Sequent goal = with_context(ap2, {}, n.sequent);
                return {derive(goal), ap2, {}};
            }
            Instantiation inst = rematch(k4, n);
            DerivationTree q = std::move(sub[0].proof);
            // open up the eta conjunctions
            for (Formula f : sub[0].nap)
                q = invert_one(gl, q, InversionShape::LAnd, boxdot(f), 0);
            // pad up to the exact companion premiss and close with the rule
            FormulaMultiset gamma2 = inst.gamma;
            for (Formula f : ap2) gamma2.add(f);
            Sequent want = raw_box_premiss(Rule::RGL, gamma2, *inst.phi);
            FormulaMultiset da = want.ante().minus(q.sequent.ante());
            if (!q.sequent.ante().subset_of(want.ante()) || q.sequent.succ() != want.succ())
                throw std::logic_error("translate: companion premiss shape mismatch");
            if (!da.empty()) q = weaken(gl, q, Sequent(da, {}));
            Sequent conclusion = with_context(ap2, {}, n.sequent);
            return {rebuilt(gl, std::move(conclusion), Rule::RGL, {std::move(q)}), ap2, {}};
        }

        // a propositional step: weaken the branches to the shared ledgers and
        // re-apply the rule under that context
        for (std::size_t i = 0; i < sub.size(); ++i) {
            Sequent want = with_context(ap, nap, n.premisses[i].sequent);
            FormulaMultiset da = want.ante().minus(sub[i].proof.sequent.ante());
            if (!da.empty()) sub[i].proof = weaken(gl, sub[i].proof, Sequent(da, {}));
        }
        Instantiation inst = rematch(k4, n);
        Sequent conclusion = with_context(ap, nap, n.sequent);
        auto prems = rule_premisses(gl, r, *inst.principal, conclusion);
        std::vector<DerivationTree> kids;
        for (std::size_t i = 0; i < sub.size(); ++i) {
            if (!prems || (*prems)[i] != sub[i].proof.sequent)
                throw std::logic_error("translate: context application mismatch");
            kids.push_back(std::move(sub[i].proof));
        }
        DerivationTree applied = rebuilt(gl, conclusion, r, std::move(kids));
        if (!discharge) return {std::move(applied), ap, nap};

        // a circular leaf pointing here was carried as chi(fI) or eta(fI);
        // absorb it
        FormulaSet ap2 = ap, nap2 = nap;
        ap2.erase(fI);
        nap2.erase(fI);
        Sequent goal = with_context(ap2, nap2, n.sequent);
        return {derive(goal), ap2, nap2};
    }
};

}  // namespace

DerivationTree circular_to_standard(const DerivationTree& d0) {
    CircularToStandard tr;
    DerivationTree d = desugar(d0);
    Verdict v = check_circular(tr.k4, d);
    if (!v) throw InvalidInput(std::string("translate: ") + v.reason);
    auto res = tr.go(d);
    if (!res.ap.empty() || !res.nap.empty())
        throw std::logic_error("translate: undischarged assumption ledger");
    if (res.proof.sequent != d.sequent)
        throw std::logic_error("translate: endsequent changed");
    Verdict vo = check_standard(tr.gl, res.proof);
    if (!vo) throw std::logic_error("translate produced an invalid proof: " + vo.reason);
    return res.proof;
}

bool box_rule_between_repeats(const DerivationTree& d, Rule r) {
    struct Walker {
        Rule r;
        std::vector<const DerivationTree*> branch;
        bool ok = true;

        void go(const DerivationTree& n) {
            if (!ok) return;
            for (std::size_t i = 0; i < branch.size(); ++i) {
                if (branch[i]->sequent != n.sequent) continue;
                bool found = false;
                for (std::size_t k = i; k < branch.size(); ++k)
                    if (branch[k]->rule == rule_name(r)) {
                        found = true;
                        break;
                    }
                if (!found) {
                    ok = false;
                    return;
                }
            }
            branch.push_back(&n);
            for (const DerivationTree& k : n.premisses) go(k);
            branch.pop_back();
        }
    };
    Walker w{r};
    w.go(d);
    return w.ok;
}

}  // namespace circseq
