#include "circseq/sequent.hpp"

#include <algorithm>
#include <cassert>

namespace circseq {

namespace {

struct EntryLess {
    bool operator()(const std::pair<Formula, int>& e, const Formula& f) const {
        return formula_less(e.first, f);
    }
};

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b9 + (h << 6) + (h >> 2));
}

}  // namespace

FormulaMultiset::FormulaMultiset(std::initializer_list<Formula> fs) {
    for (const Formula& f : fs) add(f);
}

FormulaMultiset::FormulaMultiset(const std::vector<Formula>& fs) {
    for (const Formula& f : fs) add(f);
}

void FormulaMultiset::add(Formula f, int n) {
    assert(n >= 0);
    if (n == 0) return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), f, EntryLess{});
    if (it != entries_.end() && it->first == f)
        it->second += n;
    else
        entries_.insert(it, {f, n});
    total_ += n;
}

int FormulaMultiset::remove(Formula f, int n) {
    assert(n >= 0);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), f, EntryLess{});
    if (it == entries_.end() || !(it->first == f)) return 0;
    int removed = std::min(it->second, n);
    it->second -= removed;
    if (it->second == 0) entries_.erase(it);
    total_ -= removed;
    return removed;
}

int FormulaMultiset::count(Formula f) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), f, EntryLess{});
    if (it == entries_.end() || !(it->first == f)) return 0;
    return it->second;
}

std::vector<Formula> FormulaMultiset::expanded() const {
    std::vector<Formula> out;
    out.reserve(total_);
    for (const auto& [f, n] : entries_)
        for (int i = 0; i < n; ++i) out.push_back(f);
    return out;
}

FormulaMultiset FormulaMultiset::united(const FormulaMultiset& o) const {
    FormulaMultiset out = *this;
    for (const auto& [f, n] : o.entries_) out.add(f, n);
    return out;
}

FormulaMultiset FormulaMultiset::minus(const FormulaMultiset& o) const {
    FormulaMultiset out = *this;
    for (const auto& [f, n] : o.entries_) out.remove(f, n);
    return out;
}

bool FormulaMultiset::subset_of(const FormulaMultiset& o) const {
    for (const auto& [f, n] : entries_)
        if (o.count(f) < n) return false;
    return true;
}

FormulaMultiset FormulaMultiset::dedup() const {
    FormulaMultiset out;
    for (const auto& [f, n] : entries_) out.add(f, 1);
    return out;
}

std::size_t FormulaMultiset::hash() const noexcept {
    std::size_t h = entries_.size();
    for (const auto& [f, n] : entries_) {
        h = mix(h, f.hash());
        h = mix(h, static_cast<std::size_t>(n));
    }
    return h;
}

FormulaMultiset box_multiset(const FormulaMultiset& g) {
    FormulaMultiset out;
    for (const auto& [f, n] : g.entries()) out.add(Formula::box(f), n);
    return out;
}

FormulaMultiset boxdot_multiset(const FormulaMultiset& g) {
    return g.united(box_multiset(g));
}

FormulaMultiset boxdot_core(const FormulaMultiset& g) {
    // candidate members x with both x and []x present, highest complexity first
    std::vector<Formula> candidates;
    for (const auto& [f, n] : g.entries())
        if (g.contains(Formula::box(f))) candidates.push_back(f);
    std::sort(candidates.begin(), candidates.end(), [](const Formula& a, const Formula& b) {
        if (a.complexity() != b.complexity()) return a.complexity() > b.complexity();
        return a.text() < b.text();
    });
    FormulaMultiset pattern;
    for (const Formula& f : candidates) {
        FormulaMultiset trial = pattern;
        trial.add(f);
        trial.add(Formula::box(f));
        if (trial.subset_of(g)) pattern = std::move(trial);
    }
    return pattern;
}

FormulaMultiset star(const FormulaMultiset& g) {
    FormulaMultiset core = boxdot_core(g);
    FormulaMultiset out = core;
    for (const auto& [f, n] : g.entries())
        if (!core.contains(f)) out.add(f, 1);
    return out;
}

std::size_t Sequent::hash() const noexcept {
    return mix(ante_.hash(), succ_.hash());
}

std::string Sequent::text() const {
    std::string out;
    bool first = true;
    for (const Formula& f : ante_.expanded()) {
        if (!first) out += ", ";
        out += f.text();
        first = false;
    }
    out += first ? "=>" : " =>";
    first = true;
    for (const Formula& f : succ_.expanded()) {
        out += first ? " " : ", ";
        out += f.text();
        first = false;
    }
    return out;
}

int Sequent::weight() const {
    int w = 0;
    for (const auto& [f, n] : ante_.entries()) w += f.node_count() * n;
    for (const auto& [f, n] : succ_.entries()) w += f.node_count() * n;
    return w;
}

Sequent multiply(const Sequent& a, const Sequent& b) {
    return Sequent(a.ante().united(b.ante()), a.succ().united(b.succ()));
}

namespace {

Formula fold(const FormulaMultiset& g, bool conjunction) {
    std::vector<Formula> items = g.expanded();
    std::sort(items.begin(), items.end(),
              [](const Formula& a, const Formula& b) { return a.text() < b.text(); });
    if (items.empty()) return conjunction ? Formula::top() : Formula::bot();
    Formula acc = items.back();
    for (auto it = items.rbegin() + 1; it != items.rend(); ++it)
        acc = conjunction ? Formula::conj(*it, acc) : Formula::disj(*it, acc);
    return acc;
}

}  // namespace

Formula interpret(const Sequent& s) {
    return Formula::imp(fold(s.ante(), true), fold(s.succ(), false));
}

Sequent box_sequent(const Sequent& s) {
    return Sequent(box_multiset(s.ante()), box_multiset(s.succ()));
}

Sequent boxdot_sequent(const Sequent& s) {
    return Sequent(boxdot_multiset(s.ante()), boxdot_multiset(s.succ()));
}

Sequent star(const Sequent& s) { return Sequent(star(s.ante()), star(s.succ())); }

bool is_set_sequent(const Sequent& s) { return star(s) == s; }

bool set_equivalent(const Sequent& a, const Sequent& b) { return star(a) == star(b); }

Sequent desugar(const Sequent& s) {
    FormulaMultiset a, c;
    for (const auto& [f, n] : s.ante().entries()) a.add(desugar(f), n);
    for (const auto& [f, n] : s.succ().entries()) c.add(desugar(f), n);
    return Sequent(std::move(a), std::move(c));
}

bool dm_leq(const Sequent& a, const Sequent& b) {
    // Characterisation of the reflexive-transitive replacement closure: every
    // surplus formula on the smaller side must sit strictly below some surplus
    // formula on the larger side, complexity-wise.
    FormulaMultiset ua = a.ante().united(a.succ());
    FormulaMultiset ub = b.ante().united(b.succ());
    FormulaMultiset only_a = ua.minus(ub);
    FormulaMultiset only_b = ub.minus(ua);
    int max_b = -1;
    for (const auto& [f, n] : only_b.entries()) max_b = std::max(max_b, f.complexity());
    for (const auto& [f, n] : only_a.entries())
        if (f.complexity() >= max_b) return false;
    return true;
}

bool dm_less(const Sequent& a, const Sequent& b) {
    FormulaMultiset ua = a.ante().united(a.succ());
    FormulaMultiset ub = b.ante().united(b.succ());
    return ua != ub && dm_leq(a, b);
}

Sequent parse_sequent(std::string_view text) {
    auto arrow = text.find("=>");
    if (arrow == std::string_view::npos) throw SyntaxError("expected \"=>\"", text.size());

    auto parse_side = [&](std::string_view side, std::size_t base) {
        FormulaMultiset out;
        std::size_t start = 0;
        int depth = 0;
        auto flush = [&](std::size_t end) {
            std::string_view piece = side.substr(start, end - start);
            if (piece.find_first_not_of(" \t") == std::string_view::npos)
                throw SyntaxError("empty formula in sequent", base + start);
            try {
                out.add(parse_formula(piece));
            } catch (const SyntaxError& e) {
                throw SyntaxError(e.what(), base + start + e.offset);
            }
        };
        bool any = side.find_first_not_of(" \t") != std::string_view::npos;
        if (!any) return out;
        for (std::size_t i = 0; i < side.size(); ++i) {
            if (side[i] == '(') ++depth;
            if (side[i] == ')') --depth;
            if (side[i] == ',' && depth == 0) {
                flush(i);
                start = i + 1;
            }
        }
        flush(side.size());
        return out;
    };

    FormulaMultiset ante = parse_side(text.substr(0, arrow), 0);
    FormulaMultiset succ = parse_side(text.substr(arrow + 2), arrow + 2);
    return Sequent(std::move(ante), std::move(succ));
}

}  // namespace circseq
