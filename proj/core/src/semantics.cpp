#include "circseq/semantics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace circseq {

bool KripkeModel::related(int u, int v) const {
    return std::find(access.begin(), access.end(), std::make_pair(u, v)) != access.end();
}

bool KripkeModel::is_transitive() const {
    for (auto [a, b] : access)
        for (auto [c, d] : access)
            if (b == c && !related(a, d)) return false;
    return true;
}

bool KripkeModel::is_reflexive() const {
    for (int w = 0; w < worlds; ++w)
        if (!related(w, w)) return false;
    return true;
}

bool KripkeModel::is_irreflexive() const {
    for (int w = 0; w < worlds; ++w)
        if (related(w, w)) return false;
    return true;
}

std::string KripkeModel::describe() const {
    std::ostringstream os;
    os << worlds << " world(s)\n";
    os << "access:";
    if (access.empty()) os << " (none)";
    for (auto [a, b] : access) os << " w" << a << "->w" << b;
    os << "\n";
    for (int w = 0; w < worlds; ++w) {
        os << "w" << w << ":";
        if (valuation[w].empty()) os << " (no atoms)";
        for (const std::string& p : valuation[w]) os << " " << p;
        os << "\n";
    }
    return os.str();
}

bool eval(const KripkeModel& m, int world, Formula f) {
    if (world < 0 || world >= m.worlds) throw UnknownWorld(world);
    switch (f.kind()) {
        case Kind::Top: return true;
        case Kind::Bot: return false;
        case Kind::Atom: return m.valuation[world].count(f.atom_name()) > 0;
        case Kind::Neg: return !eval(m, world, f.child());
        case Kind::And: return eval(m, world, f.left()) && eval(m, world, f.right());
        case Kind::Or: return eval(m, world, f.left()) || eval(m, world, f.right());
        case Kind::Imp: return !eval(m, world, f.left()) || eval(m, world, f.right());
        case Kind::Box:
            for (auto [a, b] : m.access)
                if (a == world && !eval(m, b, f.child())) return false;
            return true;
    }
    return false;
}

std::optional<FrameClass> frame_by_name(std::string_view name) {
    if (name == "k4") return FrameClass::K4;
    if (name == "s4") return FrameClass::S4;
    if (name == "gl-finite") return FrameClass::GLFinite;
    return std::nullopt;
}

namespace {

bool frame_ok(const KripkeModel& m, FrameClass f) {
    switch (f) {
        case FrameClass::K4: return m.is_transitive();
        case FrameClass::S4: return m.is_transitive() && m.is_reflexive();
        case FrameClass::GLFinite: return m.is_transitive() && m.is_irreflexive();
    }
    return false;
}

std::vector<std::string> goal_atoms(const Sequent& s) {
    std::set<std::string> names;
    auto scan = [&](const FormulaMultiset& side) {
        for (const auto& [f, n] : side.entries())
            for (Formula g : subformulas(f))
                if (g.kind() == Kind::Atom) names.insert(g.atom_name());
    };
    scan(s.ante());
    scan(s.succ());
    return {names.begin(), names.end()};
}

// canonical-form filter: a model is kept only if no world permutation yields
// a lexicographically smaller encoding
bool canonical(const KripkeModel& m, const std::vector<std::string>& atoms) {
    std::vector<int> perm(m.worlds);
    std::iota(perm.begin(), perm.end(), 0);
    auto encode = [&](const std::vector<int>& p) {
        std::vector<std::uint64_t> code;
        for (int u = 0; u < m.worlds; ++u)
            for (int v = 0; v < m.worlds; ++v) code.push_back(m.related(p[u], p[v]) ? 1 : 0);
        for (int u = 0; u < m.worlds; ++u)
            for (const std::string& a : atoms) code.push_back(m.valuation[p[u]].count(a) ? 1 : 0);
        return code;
    };
    auto base = encode(perm);
    while (std::next_permutation(perm.begin(), perm.end()))
        if (encode(perm) < base) return false;
    return true;
}

}  // namespace

std::optional<Countermodel> countermodel(const Sequent& goal, FrameClass frame, int max_worlds) {
    Formula f = interpret(goal);
    std::vector<std::string> atoms = goal_atoms(goal);
    for (int n = 1; n <= max_worlds; ++n) {
        int pairs = n * n;
        std::uint64_t rel_count = std::uint64_t{1} << pairs;
        std::uint64_t val_count = std::uint64_t{1} << (n * atoms.size());
        for (std::uint64_t rel = 0; rel < rel_count; ++rel) {
            KripkeModel m;
            m.worlds = n;
            m.valuation.assign(n, {});
            for (int i = 0; i < pairs; ++i)
                if (rel & (std::uint64_t{1} << i)) m.access.push_back({i / n, i % n});
            if (!frame_ok(m, frame)) continue;
            for (std::uint64_t val = 0; val < val_count; ++val) {
                for (int w = 0; w < n; ++w) {
                    m.valuation[w].clear();
                    for (std::size_t a = 0; a < atoms.size(); ++a)
                        if (val & (std::uint64_t{1} << (w * atoms.size() + a)))
                            m.valuation[w].insert(atoms[a]);
                }
                if (!canonical(m, atoms)) continue;
                for (int w = 0; w < n; ++w)
                    if (!eval(m, w, f)) return Countermodel{m, w};
            }
        }
    }
    return std::nullopt;
}

}  // namespace circseq
