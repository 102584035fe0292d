#pragma once

// Exhaustive reference classifier. Looks only at snapshot memberships and
// region sides: every subset of system regions (and of environment regions)
// is enumerated per step and the cardinality conditions are tested directly.
// Events are never consulted, so agreement with classify() is a genuine
// cross-check of the event-driven search.

#include "axiom/classifier.hpp"

#include <cstdint>
#include <vector>

namespace axiom {

inline constexpr std::size_t kOracleMaxElements = 12;
inline constexpr std::size_t kOracleMaxWindow = 8;
inline constexpr std::size_t kOracleMaxRegionsPerSide = 10;

namespace oracle_detail {

struct Frame {
    std::vector<RegionId> regions;           // one side, sorted
    std::vector<long> before, after;         // per-region counts
};

inline Frame frame(const Snapshot& a, const Snapshot& b, Side side)
{
    Frame f;
    for (const auto& [r, s] : a.region_side)
        if (s == side) f.regions.push_back(r);
    f.before.assign(f.regions.size(), 0);
    f.after.assign(f.regions.size(), 0);
    auto index = [&](const RegionId& r) -> long {
        auto it = std::lower_bound(f.regions.begin(), f.regions.end(), r);
        return (it != f.regions.end() && *it == r) ? it - f.regions.begin() : -1;
    };
    for (const auto& [_, r] : a.membership)
        if (auto i = index(r); i >= 0) ++f.before[static_cast<std::size_t>(i)];
    for (const auto& [_, r] : b.membership)
        if (auto i = index(r); i >= 0) ++f.after[static_cast<std::size_t>(i)];
    return f;
}

inline long subset_delta(const Frame& f, std::uint32_t mask)
{
    long before = 0, after = 0;
    for (std::size_t i = 0; i < f.regions.size(); ++i) {
        if (!(mask & (1u << i))) continue;
        before += f.before[i];
        after += f.after[i];
    }
    return after - before;
}

inline RegionSet subset_regions(const Frame& f, std::uint32_t mask)
{
    RegionSet out;
    for (std::size_t i = 0; i < f.regions.size(); ++i)
        if (mask & (1u << i)) out.insert(f.regions[i]);
    return out;
}

// Elements in `from` at snapshot a and in `to` at snapshot b.
inline ElementSet travellers(const Snapshot& a, const Snapshot& b, const RegionSet& from, const RegionSet& to)
{
    ElementSet out;
    for (const auto& [e, r] : a.membership) {
        if (!from.contains(r)) continue;
        auto it = b.membership.find(e);
        if (it != b.membership.end() && to.contains(it->second)) out.insert(e);
    }
    return out;
}

inline std::optional<Witness> boundary(const Snapshot& a, const Snapshot& b, std::size_t step, Condition cond)
{
    Frame sys = frame(a, b, Side::system);
    Frame env = frame(a, b, Side::environment);
    const std::uint32_t sys_all = (1u << sys.regions.size());
    const std::uint32_t env_all = (1u << env.regions.size());
    for (std::uint32_t sm = 1; sm < sys_all; ++sm) {
        long ds = subset_delta(sys, sm);
        if (cond == Condition::input ? ds <= 0 : ds >= 0) continue;
        for (std::uint32_t em = 1; em < env_all; ++em) {
            long de = subset_delta(env, em);
            if (cond == Condition::input ? de >= 0 : de <= 0) continue;
            RegionSet sr = subset_regions(sys, sm), er = subset_regions(env, em);
            auto movers = cond == Condition::input ? travellers(a, b, er, sr) : travellers(a, b, sr, er);
            if (movers.empty()) continue;
            if (cond == Condition::input) return Witness{step, cond, sr, er, movers};
            return Witness{step, cond, er, sr, movers};
        }
    }
    return std::nullopt;
}

inline std::optional<Witness> internal(const Snapshot& a, const Snapshot& b, std::size_t step)
{
    Frame sys = frame(a, b, Side::system);
    const std::uint32_t all = (1u << sys.regions.size());
    for (std::uint32_t tm = 1; tm < all; ++tm) {
        if (subset_delta(sys, tm) <= 0) continue;
        for (std::uint32_t vm = 1; vm < all; ++vm) {
            if ((vm & tm) || subset_delta(sys, vm) >= 0) continue;
            RegionSet tr = subset_regions(sys, tm), vr = subset_regions(sys, vm);
            auto movers = travellers(a, b, vr, tr);
            if (!movers.empty()) return Witness{step, Condition::processing, tr, vr, movers};
        }
    }
    return std::nullopt;
}

} // namespace oracle_detail

inline IntelligenceReport brute_force_classify(const Trace& t, const Window& w)
{
    require_window(t, w);
    if (t.initial().size() > kOracleMaxElements) throw ModelError("oracle size guard exceeded: too many elements");
    if (w.length() > kOracleMaxWindow) throw ModelError("oracle size guard exceeded: window too long");
    if (t.initial().regions(Side::system).size() > kOracleMaxRegionsPerSide ||
        t.initial().regions(Side::environment).size() > kOracleMaxRegionsPerSide)
        throw ModelError("oracle size guard exceeded: too many regions");

    IntelligenceReport rep;
    rep.window = w;
    for (std::size_t i = w.begin; i < w.end; ++i) {
        const auto& a = t.snapshots[i];
        const auto& b = t.snapshots[i + 1];
        if (auto x = oracle_detail::boundary(a, b, i, Condition::input)) rep.input.push_back(std::move(*x));
        if (auto x = oracle_detail::internal(a, b, i)) rep.processing.push_back(std::move(*x));
        if (auto x = oracle_detail::boundary(a, b, i, Condition::output)) rep.output.push_back(std::move(*x));
    }
    return rep;
}

struct OracleComparison {
    bool verdict_agrees = true;
    bool input_steps_agree = true;
    bool processing_steps_agree = true;
    bool output_steps_agree = true;

    [[nodiscard]] bool agrees() const
    {
        return verdict_agrees && input_steps_agree && processing_steps_agree && output_steps_agree;
    }
};

inline OracleComparison compare_reports(const IntelligenceReport& a, const IntelligenceReport& b)
{
    return {a.verdict() == b.verdict(), witness_steps(a.input) == witness_steps(b.input),
            witness_steps(a.processing) == witness_steps(b.processing), witness_steps(a.output) == witness_steps(b.output)};
}

} // namespace axiom
