#include "circseq/calculus.hpp"

#include <algorithm>
#include <cassert>

namespace circseq {

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Ax: return "Ax";
        case Rule::LBot: return "LBot";
        case Rule::LAnd: return "LAnd";
        case Rule::RAnd: return "RAnd";
        case Rule::LOr: return "LOr";
        case Rule::ROr: return "ROr";
        case Rule::LImp: return "LImp";
        case Rule::RImp: return "RImp";
        case Rule::ROr1: return "ROr1";
        case Rule::ROr2: return "ROr2";
        case Rule::LImpAtom: return "LImpAtom";
        case Rule::LImpAnd: return "LImpAnd";
        case Rule::LImpOr: return "LImpOr";
        case Rule::LImpImp: return "LImpImp";
        case Rule::LImpBox: return "LImpBox";
        case Rule::RK4: return "RK4";
        case Rule::RGL: return "RGL";
        case Rule::RGrz: return "RGrz";
        case Rule::RT: return "RT";
    }
    return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
    static const Rule all[] = {Rule::Ax,      Rule::LBot,     Rule::LAnd,     Rule::RAnd,
                               Rule::LOr,     Rule::ROr,      Rule::LImp,     Rule::RImp,
                               Rule::ROr1,    Rule::ROr2,     Rule::LImpAtom, Rule::LImpAnd,
                               Rule::LImpOr,  Rule::LImpImp,  Rule::LImpBox,  Rule::RK4,
                               Rule::RGL,     Rule::RGrz,     Rule::RT};
    for (Rule r : all)
        if (name == rule_name(r)) return r;
    return std::nullopt;
}

int rule_arity(Rule r) {
    switch (r) {
        case Rule::Ax:
        case Rule::LBot:
            return 0;
        case Rule::RAnd:
        case Rule::LOr:
        case Rule::LImp:
        case Rule::LImpImp:
        case Rule::LImpBox:
            return 2;
        default:
            return 1;
    }
}

bool rule_is_box(Rule r) { return r == Rule::RK4 || r == Rule::RGL || r == Rule::RGrz; }

bool rule_is_ordered(Rule r) { return !rule_is_box(r); }

bool rule_invertible(Rule r, Base base) {
    if (base == Base::Classical) {
        switch (r) {
            case Rule::LAnd:
            case Rule::RAnd:
            case Rule::LOr:
            case Rule::ROr:
            case Rule::LImp:
            case Rule::RImp:
                return true;
            default:
                return false;
        }
    }
    switch (r) {
        case Rule::LAnd:
        case Rule::RAnd:
        case Rule::LOr:
        case Rule::RImp:
        case Rule::LImpAtom:
        case Rule::LImpAnd:
        case Rule::LImpOr:
            return true;
        default:
            return false;
    }
}

std::vector<Rule> Calculus::rules() const {
    std::vector<Rule> out;
    if (base == Base::Classical)
        out = {Rule::Ax, Rule::LBot, Rule::LAnd, Rule::RAnd,
               Rule::LOr, Rule::ROr,  Rule::LImp, Rule::RImp};
    else
        out = {Rule::Ax,      Rule::LBot,    Rule::LAnd,   Rule::RAnd,     Rule::LOr,
               Rule::ROr1,    Rule::ROr2,    Rule::RImp,   Rule::LImpAtom, Rule::LImpAnd,
               Rule::LImpOr,  Rule::LImpImp, Rule::LImpBox};
    for (Rule r : box_rules) out.push_back(r);
    return out;
}

bool Calculus::has_rule(Rule r) const {
    auto all = rules();
    return std::find(all.begin(), all.end(), r) != all.end();
}

Calculus g3p() { return Calculus{"g3p", Base::Classical, {}, false}; }
Calculus g3k4() { return Calculus{"k4", Base::Classical, {Rule::RK4}, false}; }
Calculus g3gl() { return Calculus{"gl", Base::Classical, {Rule::RGL}, false}; }
Calculus g3s4() { return Calculus{"s4", Base::Classical, {Rule::RT, Rule::RK4}, false}; }
Calculus g3grz() { return Calculus{"grz", Base::Classical, {Rule::RT, Rule::RGrz}, false}; }
Calculus ig3k4() { return Calculus{"ik4", Base::SingleConclusion, {Rule::RK4}, true}; }
Calculus ig3gl() { return Calculus{"igl", Base::SingleConclusion, {Rule::RGL}, true}; }

std::optional<Calculus> calculus_by_name(std::string_view name) {
    if (name == "g3p") return g3p();
    if (name == "k4") return g3k4();
    if (name == "gl") return g3gl();
    if (name == "s4") return g3s4();
    if (name == "grz") return g3grz();
    if (name == "ik4") return ig3k4();
    if (name == "igl") return ig3gl();
    return std::nullopt;
}

std::optional<std::vector<Sequent>> rule_premisses(const Calculus& c, Rule r, Formula f,
                                                   const Sequent& con) {
    const FormulaMultiset& A = con.ante();
    const FormulaMultiset& S = con.succ();
    bool single = c.single_conclusion;
    if (single && S.total() > 1) return std::nullopt;

    switch (r) {
        case Rule::Ax:
            if (f.kind() == Kind::Atom && A.contains(f) && S.contains(f))
                return std::vector<Sequent>{};
            return std::nullopt;

        case Rule::LBot:
            if (f == Formula::bot() && A.contains(f)) return std::vector<Sequent>{};
            return std::nullopt;

        case Rule::LAnd: {
            if (f.kind() != Kind::And || !A.contains(f)) return std::nullopt;
            FormulaMultiset a = A;
            a.remove(f);
            a.add(f.left());
            a.add(f.right());
            return std::vector<Sequent>{Sequent(a, S)};
        }

        case Rule::RAnd: {
            if (f.kind() != Kind::And || !S.contains(f)) return std::nullopt;
            FormulaMultiset s1 = S, s2 = S;
            s1.remove(f);
            s2.remove(f);
            s1.add(f.left());
            s2.add(f.right());
            return std::vector<Sequent>{Sequent(A, s1), Sequent(A, s2)};
        }

        case Rule::LOr: {
            if (f.kind() != Kind::Or || !A.contains(f)) return std::nullopt;
            FormulaMultiset a1 = A, a2 = A;
            a1.remove(f);
            a2.remove(f);
            a1.add(f.left());
            a2.add(f.right());
            return std::vector<Sequent>{Sequent(a1, S), Sequent(a2, S)};
        }

        case Rule::ROr: {
            if (single || f.kind() != Kind::Or || !S.contains(f)) return std::nullopt;
            FormulaMultiset s = S;
            s.remove(f);
            s.add(f.left());
            s.add(f.right());
            return std::vector<Sequent>{Sequent(A, s)};
        }

        case Rule::LImp: {
            if (f.kind() != Kind::Imp || !A.contains(f)) return std::nullopt;
            FormulaMultiset a = A;
            a.remove(f);
            FormulaMultiset s1 = S;
            s1.add(f.left());
            FormulaMultiset a2 = a;
            a2.add(f.right());
            return std::vector<Sequent>{Sequent(a, s1), Sequent(a2, S)};
        }

        case Rule::RImp: {
            if (f.kind() != Kind::Imp || !S.contains(f)) return std::nullopt;
            FormulaMultiset a = A;
            a.add(f.left());
            FormulaMultiset s = S;
            s.remove(f);
            s.add(f.right());
            return std::vector<Sequent>{Sequent(a, s)};
        }

        case Rule::ROr1:
        case Rule::ROr2: {
            if (f.kind() != Kind::Or || S.total() != 1 || !S.contains(f)) return std::nullopt;
            Formula kept = r == Rule::ROr1 ? f.left() : f.right();
            return std::vector<Sequent>{Sequent(A, FormulaMultiset{kept})};
        }

        case Rule::LImpAtom: {
            if (f.kind() != Kind::Imp || f.left().kind() != Kind::Atom || !A.contains(f))
                return std::nullopt;
            FormulaMultiset a = A;
            a.remove(f);
            if (!a.contains(f.left())) return std::nullopt;
            a.add(f.right());
            return std::vector<Sequent>{Sequent(a, S)};
        }

        case Rule::LImpAnd: {
            if (f.kind() != Kind::Imp || f.left().kind() != Kind::And || !A.contains(f))
                return std::nullopt;
            FormulaMultiset a = A;
            a.remove(f);
            a.add(Formula::imp(f.left().left(), Formula::imp(f.left().right(), f.right())));
            return std::vector<Sequent>{Sequent(a, S)};
        }

        case Rule::LImpOr: {
            if (f.kind() != Kind::Imp || f.left().kind() != Kind::Or || !A.contains(f))
                return std::nullopt;
            FormulaMultiset a = A;
            a.remove(f);
            a.add(Formula::imp(f.left().left(), f.right()));
            a.add(Formula::imp(f.left().right(), f.right()));
            return std::vector<Sequent>{Sequent(a, S)};
        }

        case Rule::LImpImp: {
            if (f.kind() != Kind::Imp || f.left().kind() != Kind::Imp || !A.contains(f))
                return std::nullopt;
            FormulaMultiset a = A;
            a.remove(f);
            FormulaMultiset a1 = a;
            a1.add(Formula::imp(f.left().right(), f.right()));
            FormulaMultiset a2 = a;
            a2.add(f.right());
            return std::vector<Sequent>{Sequent(a1, FormulaMultiset{f.left()}), Sequent(a2, S)};
        }

        case Rule::LImpBox: {
            if (f.kind() != Kind::Imp || f.left().kind() != Kind::Box || !A.contains(f))
                return std::nullopt;
            FormulaMultiset a2 = A;
            a2.remove(f);
            a2.add(f.right());
            return std::vector<Sequent>{Sequent(A, FormulaMultiset{f.left()}), Sequent(a2, S)};
        }

        case Rule::RT: {
            if (f.kind() != Kind::Box || !A.contains(f)) return std::nullopt;
            FormulaMultiset a = A;
            a.remove(f);
            a.add(f.child());
            return std::vector<Sequent>{Sequent(a, S)};
        }

        default:
            return std::nullopt;
    }
}

namespace {

// Solve boxdot(G) == a for the unique multiset G. Members are visited in
// ascending complexity, so a body is fixed before its box shows up.
std::optional<FormulaMultiset> solve_boxdot(const FormulaMultiset& a) {
    FormulaMultiset gamma;
    for (const auto& [f, n] : a.entries()) {
        int from_body = (f.kind() == Kind::Box) ? gamma.count(f.child()) : 0;
        int own = n - from_body;
        if (own < 0) return std::nullopt;
        if (own > 0) gamma.add(f, own);
    }
    if (boxdot_multiset(gamma) != a) return std::nullopt;
    return gamma;
}

Formula grz_guard(Formula phi) {
    return Formula::box(Formula::imp(phi, Formula::box(phi)));
}

}  // namespace

Sequent raw_box_premiss(Rule rule, const FormulaMultiset& gamma, Formula phi) {
    FormulaMultiset ante;
    switch (rule) {
        case Rule::RK4:
            ante = boxdot_multiset(gamma);
            break;
        case Rule::RGL:
            ante = boxdot_multiset(gamma);
            ante.add(Formula::box(phi));
            break;
        case Rule::RGrz:
            ante = box_multiset(gamma);
            ante.add(grz_guard(phi));
            break;
        default:
            assert(false && "not a box rule");
    }
    FormulaMultiset succ;
    succ.add(phi);
    return Sequent(std::move(ante), std::move(succ));
}

namespace {

struct BoxMatcher {
    const Calculus& c;
    Rule rule;
    const Sequent& con;
    const Sequent& prem;

    std::optional<Instantiation> run() {
        if (prem.succ().total() != 1) return std::nullopt;
        Formula phi = prem.succ().entries()[0].first;
        Formula bphi = Formula::box(phi);
        if (!con.succ().contains(bphi)) return std::nullopt;
        if (c.single_conclusion && con.succ().total() != 1) return std::nullopt;

        // exact reading of the premiss
        if (auto gamma = solve_exact(phi))
            if (auto inst = accept(*gamma, phi, bphi, /*starred=*/false)) return inst;

        // star-normalised reading; the star of a raw premiss is itself a
        // fixed point, so anything else can only match the exact reading
        if (star(prem.ante()) != prem.ante()) return std::nullopt;
        std::vector<Formula> pool = candidate_bodies();
        if (pool.size() <= 20) {
            // subsets by descending size: the full pool is what backward
            // application emits, so it matches first in the common case
            for (std::size_t want = pool.size() + 1; want-- > 0;) {
                std::optional<Instantiation> found;
                enumerate_subsets(pool, want, 0, {}, phi, bphi, found);
                if (found) return found;
            }
        } else {
            FormulaMultiset gamma;
            for (const Formula& f : pool) gamma.add(f);
            if (auto inst = accept(gamma, phi, bphi, /*starred=*/true)) return inst;
        }
        return std::nullopt;
    }

    std::optional<FormulaMultiset> solve_exact(Formula phi) {
        FormulaMultiset a = prem.ante();
        if (rule == Rule::RGL && a.remove(Formula::box(phi)) != 1) return std::nullopt;
        if (rule == Rule::RGrz) {
            if (a.remove(grz_guard(phi)) != 1) return std::nullopt;
            FormulaMultiset gamma;
            for (const auto& [f, n] : a.entries()) {
                if (f.kind() != Kind::Box) return std::nullopt;
                gamma.add(f.child(), n);
            }
            return gamma;
        }
        return solve_boxdot(a);
    }

    std::vector<Formula> candidate_bodies() const {
        std::vector<Formula> out;
        for (const auto& [f, n] : prem.ante().entries()) {
            Formula body = f;
            if (rule == Rule::RGrz) {
                if (f.kind() != Kind::Box) continue;
                body = f.child();
            }
            if (con.ante().contains(Formula::box(body)) &&
                !std::count(out.begin(), out.end(), body))
                out.push_back(body);
        }
        return out;
    }

    void enumerate_subsets(const std::vector<Formula>& pool, std::size_t want, std::size_t from,
                           std::vector<Formula> acc, Formula phi, Formula bphi,
                           std::optional<Instantiation>& found) {
        if (found) return;
        if (acc.size() == want) {
            FormulaMultiset gamma;
            for (const Formula& f : acc) gamma.add(f);
            found = accept(gamma, phi, bphi, /*starred=*/true);
            return;
        }
        if (from >= pool.size() || pool.size() - from < want - acc.size()) return;
        auto with = acc;
        with.push_back(pool[from]);
        enumerate_subsets(pool, want, from + 1, std::move(with), phi, bphi, found);
        enumerate_subsets(pool, want, from + 1, std::move(acc), phi, bphi, found);
    }

    std::optional<Instantiation> accept(const FormulaMultiset& gamma, Formula phi, Formula bphi,
                                        bool starred) {
        Sequent raw = raw_box_premiss(rule, gamma, phi);
        if (prem != (starred ? star(raw) : raw)) return std::nullopt;
        FormulaMultiset boxed = box_multiset(gamma);
        if (!boxed.subset_of(con.ante())) return std::nullopt;
        Instantiation inst;
        inst.rule = rule;
        inst.gamma = gamma;
        inst.phi = phi;
        FormulaMultiset pi = con.ante().minus(boxed);
        FormulaMultiset delta = con.succ();
        delta.remove(bphi);
        inst.context = Sequent(std::move(pi), std::move(delta));
        return inst;
    }
};

std::vector<Formula> principal_candidates(Rule r, const Sequent& con) {
    std::vector<Formula> out;
    auto from = [&](const FormulaMultiset& side) {
        for (const auto& [f, n] : side.entries()) out.push_back(f);
    };
    switch (r) {
        case Rule::Ax:
        case Rule::LBot:
        case Rule::LAnd:
        case Rule::LOr:
        case Rule::LImp:
        case Rule::LImpAtom:
        case Rule::LImpAnd:
        case Rule::LImpOr:
        case Rule::LImpImp:
        case Rule::LImpBox:
        case Rule::RT:
            from(con.ante());
            break;
        default:
            from(con.succ());
    }
    return out;
}

}  // namespace

std::optional<Instantiation> match_instance(const Calculus& c, Rule rule, const Sequent& conclusion,
                                            const std::vector<Sequent>& premisses) {
    if (!c.has_rule(rule)) throw UnknownRule(rule_name(rule));
    if (static_cast<int>(premisses.size()) != rule_arity(rule)) return std::nullopt;
    if (rule_is_box(rule)) {
        BoxMatcher m{c, rule, conclusion, premisses[0]};
        return m.run();
    }
    for (Formula f : principal_candidates(rule, conclusion)) {
        auto prems = rule_premisses(c, rule, f, conclusion);
        if (prems && *prems == premisses) {
            Instantiation inst;
            inst.rule = rule;
            inst.principal = f;
            return inst;
        }
    }
    return std::nullopt;
}

std::optional<Instantiation> match_instance(const Calculus& c, const std::string& rule,
                                            const Sequent& conclusion,
                                            const std::vector<Sequent>& premisses) {
    auto r = rule_from_name(rule);
    if (!r) throw UnknownRule(rule);
    return match_instance(c, *r, conclusion, premisses);
}

std::vector<RuleInstance> backward_applications(const Calculus& c, const Sequent& goal) {
    std::vector<RuleInstance> out;
    if (c.single_conclusion && goal.succ().total() > 1) return out;

    auto push = [&](Rule r, std::vector<Sequent> prems) {
        auto inst = match_instance(c, r, goal, prems);
        if (!inst)
            throw std::logic_error(std::string("backward application of ") + rule_name(r) +
                                   " failed to self-match at \"" + goal.text() + "\"");
        out.push_back(RuleInstance{r, goal, std::move(prems), std::move(*inst)});
    };

    // axioms first, then the propositional rules (invertible ones leading),
    // then RT, then box rules
    std::vector<Rule> order;
    if (c.base == Base::Classical)
        order = {Rule::Ax,  Rule::LBot, Rule::LAnd, Rule::RAnd,
                 Rule::LOr, Rule::ROr,  Rule::LImp, Rule::RImp};
    else
        order = {Rule::Ax,      Rule::LBot,    Rule::LAnd,    Rule::RAnd,     Rule::LOr,
                 Rule::RImp,    Rule::LImpAtom, Rule::LImpAnd, Rule::LImpOr,  Rule::ROr1,
                 Rule::ROr2,    Rule::LImpImp, Rule::LImpBox};
    if (c.has_rule(Rule::RT)) order.push_back(Rule::RT);

    for (Rule r : order) {
        bool nullary = rule_arity(r) == 0;
        for (Formula f : principal_candidates(r, goal)) {
            auto prems = rule_premisses(c, r, f, goal);
            if (!prems) continue;
            push(r, std::move(*prems));
            if (nullary) break;  // one axiom instance is enough
        }
    }

    // box rules: one instance per succedent principal, Gamma maximal
    for (Rule r : c.box_rules) {
        if (!rule_is_box(r)) continue;
        FormulaMultiset gamma_max;
        for (const auto& [f, n] : goal.ante().entries())
            if (f.kind() == Kind::Box) gamma_max.add(f.child());
        gamma_max = gamma_max.dedup();
        for (const auto& [f, n] : goal.succ().entries()) {
            if (f.kind() != Kind::Box) continue;
            if (c.single_conclusion && goal.succ().total() != 1) continue;
            Sequent prem = star(raw_box_premiss(r, gamma_max, f.child()));
            push(r, {prem});
        }
    }
    return out;
}

bool is_box_instance(const Calculus& c, const RuleInstance& inst) {
    if (rule_is_box(inst.rule)) {
        auto m = match_instance(c, inst.rule, inst.conclusion, inst.premisses);
        if (!m || !m->phi) return false;
        // premisses built from subformulas of the boxed part
        FormulaSet allowed;
        auto admit = [&](Formula f) {
            for (Formula g : subformulas(f)) allowed.insert(g);
        };
        for (const auto& [f, n] : m->gamma.entries()) admit(Formula::box(f));
        admit(Formula::box(*m->phi));
        if (inst.rule == Rule::RGrz) admit(grz_guard(*m->phi));
        for (const Sequent& p : inst.premisses) {
            for (const auto& [f, n] : p.ante().entries())
                if (!allowed.count(f)) return false;
            for (const auto& [f, n] : p.succ().entries())
                if (!allowed.count(f)) return false;
        }
        // closure under contracting a duplicated formula of the boxed part
        for (const auto& [f, n] : m->gamma.entries()) {
            if (n < 2) continue;
            FormulaMultiset gamma2 = m->gamma;
            gamma2.remove(f);
            FormulaMultiset a2 = inst.conclusion.ante();
            if (a2.remove(Formula::box(f)) != 1) return false;
            Sequent con2(a2, inst.conclusion.succ());
            Sequent prem2 = star(raw_box_premiss(inst.rule, gamma2, *m->phi));
            if (!match_instance(c, inst.rule, con2, {prem2})) return false;
        }
        return true;
    }
    // generic reading for other rules: the biggest boxed decomposition must
    // account for every premiss formula
    FormulaSet allowed;
    auto admit_boxed = [&](const FormulaMultiset& side) {
        for (const auto& [f, n] : side.entries())
            if (f.kind() == Kind::Box)
                for (Formula g : subformulas(f)) allowed.insert(g);
    };
    admit_boxed(inst.conclusion.ante());
    admit_boxed(inst.conclusion.succ());
    for (const Sequent& p : inst.premisses) {
        for (const auto& [f, n] : p.ante().entries())
            if (!allowed.count(f)) return false;
        for (const auto& [f, n] : p.succ().entries())
            if (!allowed.count(f)) return false;
    }
    return true;
}

bool is_slim_instance(const Calculus& c, const RuleInstance& inst) {
    std::vector<Sequent> starred;
    starred.reserve(inst.premisses.size());
    for (const Sequent& p : inst.premisses) starred.push_back(star(p));
    return match_instance(c, inst.rule, inst.conclusion, starred).has_value();
}

bool is_ordered_instance(const Calculus& c, const RuleInstance& inst) {
    (void)c;
    FormulaSet allowed;
    auto admit = [&](const FormulaMultiset& side) {
        for (const auto& [f, n] : side.entries())
            for (Formula g : subformulas(f)) allowed.insert(g);
    };
    admit(inst.conclusion.ante());
    admit(inst.conclusion.succ());
    for (const Sequent& p : inst.premisses) {
        if (!dm_less(p, inst.conclusion)) return false;
        for (const auto& [f, n] : p.ante().entries())
            if (!allowed.count(f)) return false;
        for (const auto& [f, n] : p.succ().entries())
            if (!allowed.count(f)) return false;
    }
    return true;
}

}  // namespace circseq
