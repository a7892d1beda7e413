#include "circseq/derivation.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace circseq {

namespace {

struct Checker {
    const Calculus& c;
    bool allow_circular;
    std::vector<const Sequent*> branch;
    Verdict verdict = Verdict::ok();
    std::vector<int> path;

    bool fail(const DerivationTree& d, std::string why) {
        verdict = Verdict{false, std::move(why) + " at \"" + d.sequent.text() + "\"", path};
        return false;
    }

    bool walk(const DerivationTree& d) {
        if (d.is_leaf()) {
            if (d.is_circular()) {
                if (!allow_circular) return fail(d, "circular leaf in a standard proof");
                for (const Sequent* s : branch)
                    if (*s == d.sequent) return true;
                return fail(d, "circular leaf with no identical sequent below");
            }
            if (d.is_assumption()) return fail(d, "assumption leaf");
            auto r = rule_from_name(d.rule);
            if (!r) return fail(d, "unknown rule \"" + d.rule + "\"");
            if (rule_arity(*r) != 0) return fail(d, std::string(d.rule) + " given no premisses");
            if (!c.has_rule(*r)) return fail(d, std::string(d.rule) + " not in calculus " + c.name);
            if (!match_instance(c, *r, d.sequent, {})) return fail(d, "not an axiom instance");
            return true;
        }
        auto r = rule_from_name(d.rule);
        if (!r) return fail(d, "unknown rule \"" + d.rule + "\"");
        if (!c.has_rule(*r)) return fail(d, std::string(d.rule) + " not in calculus " + c.name);
        if (rule_arity(*r) != static_cast<int>(d.premisses.size()))
            return fail(d, "premiss count does not match " + std::string(d.rule));
        std::vector<Sequent> prems;
        prems.reserve(d.premisses.size());
        for (const DerivationTree& k : d.premisses) prems.push_back(k.sequent);
        if (!match_instance(c, *r, d.sequent, prems))
            return fail(d, "not an instance of " + std::string(d.rule));
        branch.push_back(&d.sequent);
        for (int i = 0; i < static_cast<int>(d.premisses.size()); ++i) {
            path.push_back(i);
            if (!walk(d.premisses[i])) return false;
            path.pop_back();
        }
        branch.pop_back();
        return true;
    }
};

}  // namespace

Verdict check_standard(const Calculus& c, const DerivationTree& d) {
    Checker ck{c, false};
    ck.walk(d);
    return ck.verdict;
}

Verdict check_circular(const Calculus& c, const DerivationTree& d) {
    Checker ck{c, true};
    ck.walk(d);
    return ck.verdict;
}

int depth(const DerivationTree& d) {
    int best = 0;
    for (const DerivationTree& k : d.premisses) best = std::max(best, depth(k));
    return best + 1;
}

namespace {

void stats_walk(const DerivationTree& d, int height, ProofStats& out) {
    out.depth = std::max(out.depth, height);
    if (!d.is_circular() && !d.is_assumption()) {
        auto it = out.lowest_height.find(d.rule);
        if (it == out.lowest_height.end() || height < it->second) {
            out.lowest_height[d.rule] = height;
            out.count_at_lowest[d.rule] = 1;
        } else if (height == it->second) {
            ++out.count_at_lowest[d.rule];
        }
    }
    for (const DerivationTree& k : d.premisses) stats_walk(k, height + 1, out);
}

}  // namespace

ProofStats stats(const DerivationTree& d) {
    ProofStats out;
    stats_walk(d, 1, out);
    return out;
}

int count_rule(const DerivationTree& d, Rule r) { return count_tag(d, rule_name(r)); }

int count_tag(const DerivationTree& d, const std::string& tag) {
    int n = d.rule == tag ? 1 : 0;
    for (const DerivationTree& k : d.premisses) n += count_tag(k, tag);
    return n;
}

namespace {

nlohmann::json to_json(const DerivationTree& d) {
    nlohmann::json j;
    j["sequent"] = d.sequent.text();
    j["rule"] = d.rule;
    nlohmann::json kids = nlohmann::json::array();
    for (const DerivationTree& k : d.premisses) kids.push_back(to_json(k));
    j["premisses"] = std::move(kids);
    return j;
}

DerivationTree from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw FormatError("expected an object", where);
    if (!j.contains("sequent") || !j["sequent"].is_string())
        throw FormatError("missing or non-string \"sequent\"", where);
    if (!j.contains("rule") || !j["rule"].is_string())
        throw FormatError("missing or non-string \"rule\"", where);
    DerivationTree d;
    try {
        d.sequent = parse_sequent(j["sequent"].get<std::string>());
    } catch (const SyntaxError& e) {
        throw FormatError(std::string("bad sequent: ") + e.what(), where + ".sequent");
    }
    d.rule = j["rule"].get<std::string>();
    if (j.contains("premisses")) {
        if (!j["premisses"].is_array())
            throw FormatError("\"premisses\" must be an array", where + ".premisses");
        int i = 0;
        for (const auto& k : j["premisses"]) {
            d.premisses.push_back(from_json(k, where + ".premisses[" + std::to_string(i) + "]"));
            ++i;
        }
    }
    return d;
}

}  // namespace

std::string to_interchange(const DerivationTree& d) { return to_json(d).dump(2); }

DerivationTree from_interchange(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw FormatError("not valid JSON", "$");
    return from_json(j, "$");
}

namespace {

void render_text(const DerivationTree& d, int indent, std::string& out) {
    out.append(indent * 2, ' ');
    out += d.sequent.text();
    out += "   (";
    out += d.rule;
    out += ")\n";
    for (const DerivationTree& k : d.premisses) render_text(k, indent + 1, out);
}

}  // namespace

std::string to_text(const DerivationTree& d) {
    std::string out;
    render_text(d, 0, out);
    return out;
}

DerivationTree desugar(const DerivationTree& d) {
    DerivationTree out;
    out.sequent = desugar(d.sequent);
    out.rule = d.rule;
    out.premisses.reserve(d.premisses.size());
    for (const DerivationTree& k : d.premisses) out.premisses.push_back(desugar(k));
    return out;
}

}  // namespace circseq
