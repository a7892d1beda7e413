#include "circseq/search.hpp"

#include <algorithm>
#include <iostream>
#include <limits>
#include <unordered_map>

namespace circseq {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return (a > kSaturated - b) ? kSaturated : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

}  // namespace

bool ClosureSet::member(const Sequent& s) const {
    if (s.weight() > weight_bound) return false;
    for (const auto& [f, n] : s.ante().entries())
        if (!formulas.count(f)) return false;
    for (const auto& [f, n] : s.succ().entries())
        if (!formulas.count(f)) return false;
    return true;
}

ClosureSet closure(const Sequent& goal, const Calculus& c,
                   std::optional<std::uint64_t> max_sequents) {
    Sequent g = desugar(goal);
    FormulaSet fs;
    auto admit = [&](Formula f) {
        for (Formula sub : subformulas(f)) fs.insert(sub);
    };
    for (const auto& [f, n] : g.ante().entries()) admit(f);
    for (const auto& [f, n] : g.succ().entries()) admit(f);

    if (c.has_rule(Rule::RGrz)) {
        std::vector<Formula> boxes;
        for (Formula f : fs)
            if (f.kind() == Kind::Box) boxes.push_back(f);
        for (Formula f : boxes) admit(Formula::box(Formula::imp(f.child(), f)));
    }

    if (c.base == Base::SingleConclusion) {
        // close under the implication-splitting the terminating base performs
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<Formula> snapshot(fs.begin(), fs.end());
            for (Formula f : snapshot) {
                if (f.kind() != Kind::Imp) continue;
                Formula a = f.left(), b = f.right();
                std::vector<Formula> fresh;
                if (a.kind() == Kind::And)
                    fresh = {Formula::imp(a.left(), Formula::imp(a.right(), b))};
                else if (a.kind() == Kind::Or)
                    fresh = {Formula::imp(a.left(), b), Formula::imp(a.right(), b)};
                else if (a.kind() == Kind::Imp)
                    fresh = {Formula::imp(a.right(), b)};
                for (Formula nf : fresh)
                    if (!fs.count(nf)) {
                        admit(nf);
                        changed = true;
                    }
            }
        }
    }

    ClosureSet out;
    out.formulas = fs;

    int max_w = 0, sum_w = 0;
    for (Formula f : fs) {
        max_w = std::max(max_w, f.node_count());
        sum_w += 2 * f.node_count() + 1;
    }
    out.weight_bound = g.weight() + sum_w + 2 * max_w + 3;

    // count multisets over the universe by weight, then pair them up
    const int W = out.weight_bound;
    std::vector<std::uint64_t> m(W + 1, 0);
    m[0] = 1;
    for (Formula f : fs) {
        int w = f.node_count();
        for (int i = w; i <= W; ++i) m[i] = sat_add(m[i], m[i - w]);
    }
    std::vector<std::uint64_t> prefix(W + 2, 0);
    for (int i = 0; i <= W; ++i) prefix[i + 1] = sat_add(prefix[i], m[i]);
    std::uint64_t total = 0;
    for (int a = 0; a <= W; ++a) total = sat_add(total, sat_mul(m[a], prefix[W - a + 1]));
    out.size = total;

    if (max_sequents && out.size > *max_sequents) throw ResourceLimit(out.size);
    return out;
}

namespace {

struct Searcher {
    const Calculus& c;
    Mode mode;
    std::uint64_t cap;
    bool trace;
    std::ostream* trace_out;

    std::uint64_t visited = 0;
    std::vector<Sequent> branch;
    std::unordered_map<Sequent, int, SequentHash> on_branch;

    bool branch_has(const Sequent& s) const {
        auto it = on_branch.find(s);
        return it != on_branch.end() && it->second > 0;
    }

    void log(int depth, const char* what, const Sequent& s) {
        if (!trace) return;
        std::ostream& os = trace_out ? *trace_out : std::cerr;
        os << depth << " " << what << " " << s.text() << "\n";
    }

    std::optional<DerivationTree> run(const Sequent& goal, int depth) {
        if (++visited > cap) throw ResourceLimit(visited);
        if (branch_has(goal)) {
            if (mode == Mode::Circular) {
                log(depth, "circular", goal);
                return DerivationTree::leaf(goal, "circular");
            }
            log(depth, "prune", goal);
            return std::nullopt;
        }

        auto instances = backward_applications(c, goal);
        for (const RuleInstance& inst : instances) {
            if (inst.premisses.empty()) {
                log(depth, rule_name(inst.rule), goal);
                return DerivationTree::leaf(goal, rule_name(inst.rule));
            }
            bool invertible = rule_invertible(inst.rule, c.base);
            auto attempt = try_instance(inst, depth);
            if (attempt) return attempt;
            // committing to the first invertible application is complete:
            // its premisses are provable exactly when the goal is
            if (invertible) return std::nullopt;
        }
        return std::nullopt;
    }

    std::optional<DerivationTree> try_instance(const RuleInstance& inst, int depth) {
        log(depth, rule_name(inst.rule), inst.conclusion);
        branch.push_back(inst.conclusion);
        ++on_branch[inst.conclusion];
        std::vector<DerivationTree> kids;
        bool ok = true;
        for (const Sequent& p : inst.premisses) {
            auto sub = run(p, depth + 1);
            if (!sub) {
                ok = false;
                break;
            }
            kids.push_back(std::move(*sub));
        }
        --on_branch[inst.conclusion];
        branch.pop_back();
        if (!ok) return std::nullopt;
        return DerivationTree{inst.conclusion, rule_name(inst.rule), std::move(kids)};
    }
};

}  // namespace

std::optional<DerivationTree> prove(const SearchConfig& cfg, const Sequent& goal) {
    const Calculus& c = cfg.calculus;
    Sequent g = desugar(goal);
    if (c.single_conclusion && g.succ().total() > 1)
        throw std::invalid_argument("single-conclusion calculus given a multi-succedent goal");
    if (cfg.mode == Mode::Circular) {
        bool has_box = false;
        for (Rule r : c.box_rules) has_box = has_box || rule_is_box(r);
        if (!has_box)
            throw std::invalid_argument("circular search needs a calculus with a box rule");
    }

    Searcher s{c, cfg.mode, cfg.max_visits, cfg.trace, cfg.trace_out};
    auto proof = s.run(g, 1);
    if (!proof) return std::nullopt;

    Verdict v = cfg.mode == Mode::Circular ? check_circular(c, *proof) : check_standard(c, *proof);
    if (!v.valid)
        throw std::logic_error("search produced an invalid proof: " + v.reason);
    return proof;
}

bool decide(const SearchConfig& cfg, const Sequent& goal) { return prove(cfg, goal).has_value(); }

namespace {

std::string atom_name_for(int i) {
    static const char* first[] = {"p", "q", "r"};
    if (i < 3) return first[i];
    return "a" + std::to_string(i);
}

}  // namespace

std::vector<Sequent> corpus(int atoms, int max_size) {
    std::vector<std::vector<Formula>> by_size(max_size + 1);
    if (max_size >= 1) {
        for (int i = 0; i < atoms; ++i) by_size[1].push_back(Formula::atom(atom_name_for(i)));
        by_size[1].push_back(Formula::top());
        by_size[1].push_back(Formula::bot());
    }
    for (int n = 2; n <= max_size; ++n) {
        for (Formula f : by_size[n - 1]) by_size[n].push_back(Formula::neg(f));
        for (Formula f : by_size[n - 1]) by_size[n].push_back(Formula::box(f));
        for (int i = 1; i <= n - 2; ++i)
            for (Formula l : by_size[i])
                for (Formula r : by_size[n - 1 - i]) {
                    by_size[n].push_back(Formula::conj(l, r));
                    by_size[n].push_back(Formula::disj(l, r));
                    by_size[n].push_back(Formula::imp(l, r));
                }
    }
    std::vector<Sequent> out;
    for (int n = 1; n <= max_size; ++n)
        for (Formula f : by_size[n]) out.push_back(Sequent({}, FormulaMultiset{f}));
    return out;
}

}  // namespace circseq
