#pragma once

// Decides possession of input, processing, and output structures from trace
// evidence, aggregates the intelligence verdict, and measures activity.
//
// A condition is witnessed at step i by region sets whose cardinalities move
// in opposite directions across the step, together with at least one element
// that actually travelled from the shrinking set to the growing one:
//
//   input       R (system) grows, some environment set O' shrinks, mover O' -> R
//   output      S (system) shrinks, some environment set O' grows, mover S -> O'
//   processing  T, V disjoint system sets, T grows, V shrinks, mover V -> T
//
// Witness search is driven by the step's events. For a mover a -> b the best
// candidate sets are {b} plus every other region of the same side that grew,
// and {a} plus every other region of the same side that shrank, so one pass
// over the movers decides existence exactly.

#include "axiom/evolution.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace axiom {

enum class Condition { input, processing, output };

inline const char* to_string(Condition c)
{
    switch (c) {
    case Condition::input: return "input";
    case Condition::processing: return "processing";
    case Condition::output: return "output";
    }
    return "input";
}

/// Half-open interval [begin, end) of step indices (transitions).
struct Window {
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t length() const { return end - begin; }
    [[nodiscard]] bool contains(const Window& w) const { return begin <= w.begin && w.end <= end; }

    friend bool operator==(const Window&, const Window&) = default;
};

inline Window full_window(const Trace& t) { return {0, t.steps()}; }

inline void require_window(const Trace& t, const Window& w)
{
    if (w.begin >= w.end) throw ModelError("empty window");
    if (w.end > t.steps()) throw ModelError("window exceeds trace length");
}

struct Witness {
    std::size_t step = 0;
    Condition condition = Condition::input;
    RegionSet grown;
    RegionSet shrunk;
    ElementSet movers;

    friend bool operator==(const Witness&, const Witness&) = default;
};

struct StepAttribution {
    std::size_t step = 0;
    std::vector<Role> roles;

    friend bool operator==(const StepAttribution&, const StepAttribution&) = default;
};

struct IntelligenceReport {
    Window window;
    std::vector<Witness> input;
    std::vector<Witness> processing;
    std::vector<Witness> output;
    std::vector<StepAttribution> attribution;

    [[nodiscard]] bool has_input() const { return !input.empty(); }
    [[nodiscard]] bool has_processing() const { return !processing.empty(); }
    [[nodiscard]] bool has_output() const { return !output.empty(); }
    [[nodiscard]] bool verdict() const { return has_input() && has_processing() && has_output(); }
};

/// Steps carrying a witness of the given condition.
inline std::vector<std::size_t> witness_steps(const std::vector<Witness>& ws)
{
    std::vector<std::size_t> out;
    for (const auto& w : ws) out.push_back(w.step);
    return out;
}

namespace detail {

using Deltas = std::map<RegionId, long>;

inline Deltas step_deltas(const Trace& t, std::size_t step)
{
    Deltas d;
    for (const auto& [r, n] : t.snapshots[step].region_counts()) d[r] -= static_cast<long>(n);
    for (const auto& [r, n] : t.snapshots[step + 1].region_counts()) d[r] += static_cast<long>(n);
    return d;
}

inline void require_step(const Trace& t, std::size_t step)
{
    if (step >= t.steps()) throw ModelError("step out of range", step);
}

// Best set containing `anchor` on side `side`, excluding `avoid`: the anchor plus
// every other region whose delta has sign `sign` (+1 or -1). Returns the set and its delta.
inline std::pair<RegionSet, long> extremal_set(const Snapshot& s, const Deltas& d, const RegionId& anchor,
                                               Side side, int sign, const std::optional<RegionId>& avoid = {})
{
    RegionSet set{anchor};
    long total = d.at(anchor);
    if (total * sign > 0) return {set, total};
    for (const auto& [r, delta] : d) {
        if (r == anchor || (avoid && r == *avoid) || s.side_of(r) != side) continue;
        if (delta * sign > 0) {
            set.insert(r);
            total += delta;
        }
    }
    return {set, total};
}

inline ElementSet movers_between(const StepEvents& evs, TransferKind kind, const RegionSet& from, const RegionSet& to)
{
    ElementSet out;
    for (const auto& ev : evs)
        if (ev.kind == kind && from.contains(ev.from) && to.contains(ev.to))
            out.insert(ev.moved.begin(), ev.moved.end());
    return out;
}

} // namespace detail

inline std::optional<Witness> witness_input(const Trace& t, std::size_t step)
{
    detail::require_step(t, step);
    const auto& s = t.snapshots[step];
    auto d = detail::step_deltas(t, step);
    for (const auto& ev : t.events[step]) {
        if (ev.kind != TransferKind::external_in) continue;
        auto [grown, gain] = detail::extremal_set(s, d, ev.to, Side::system, +1);
        auto [shrunk, loss] = detail::extremal_set(s, d, ev.from, Side::environment, -1);
        if (gain > 0 && loss < 0)
            return Witness{step, Condition::input, grown, shrunk,
                           detail::movers_between(t.events[step], TransferKind::external_in, shrunk, grown)};
    }
    return std::nullopt;
}

inline std::optional<Witness> witness_output(const Trace& t, std::size_t step)
{
    detail::require_step(t, step);
    const auto& s = t.snapshots[step];
    auto d = detail::step_deltas(t, step);
    for (const auto& ev : t.events[step]) {
        if (ev.kind != TransferKind::external_out) continue;
        auto [shrunk, loss] = detail::extremal_set(s, d, ev.from, Side::system, -1);
        auto [grown, gain] = detail::extremal_set(s, d, ev.to, Side::environment, +1);
        if (gain > 0 && loss < 0)
            return Witness{step, Condition::output, grown, shrunk,
                           detail::movers_between(t.events[step], TransferKind::external_out, shrunk, grown)};
    }
    return std::nullopt;
}

/// Either direction qualifies: T and V are only named by which one grows.
inline std::optional<Witness> witness_processing(const Trace& t, std::size_t step)
{
    detail::require_step(t, step);
    const auto& s = t.snapshots[step];
    auto d = detail::step_deltas(t, step);
    for (const auto& ev : t.events[step]) {
        if (ev.kind != TransferKind::internal || ev.from == ev.to) continue;
        auto [grown, gain] = detail::extremal_set(s, d, ev.to, Side::system, +1, ev.from);
        auto [shrunk, loss] = detail::extremal_set(s, d, ev.from, Side::system, -1, ev.to);
        if (gain > 0 && loss < 0)
            return Witness{step, Condition::processing, grown, shrunk,
                           detail::movers_between(t.events[step], TransferKind::internal, shrunk, grown)};
    }
    return std::nullopt;
}

/// Structure roles cited by the step's events, in event order without repeats.
inline std::vector<Role> step_roles(const Trace& t, std::size_t step)
{
    std::vector<Role> out;
    for (const auto& ev : t.events[step]) {
        if (!ev.via) continue;
        const auto* decl = t.declaration(*ev.via);
        Role r = decl ? decl->role : Role::other;
        if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    }
    return out;
}

inline IntelligenceReport classify(const Trace& t, const Window& w)
{
    require_window(t, w);
    IntelligenceReport rep;
    rep.window = w;
    for (std::size_t i = w.begin; i < w.end; ++i) {
        if (auto x = witness_input(t, i)) rep.input.push_back(std::move(*x));
        if (auto x = witness_processing(t, i)) rep.processing.push_back(std::move(*x));
        if (auto x = witness_output(t, i)) rep.output.push_back(std::move(*x));
        rep.attribution.push_back({i, step_roles(t, i)});
    }
    return rep;
}

inline IntelligenceReport classify(const Trace& t) { return classify(t, full_window(t)); }

// ---------------------------------------------------------------------------
// Activity

enum class ActivityMode { step, element };

struct ActivityScore {
    Window window;
    ActivityMode mode = ActivityMode::step;
    double step_activity = 0.0; // fraction of steps with a boundary crossing
    double element_rate = 0.0;  // boundary-moved elements per step

    [[nodiscard]] double value() const { return mode == ActivityMode::step ? step_activity : element_rate; }
};

inline ActivityScore activity(const Trace& t, const Window& w, ActivityMode mode = ActivityMode::step)
{
    require_window(t, w);
    std::size_t active_steps = 0;
    std::size_t moved = 0;
    for (std::size_t i = w.begin; i < w.end; ++i) {
        bool active = false;
        for (const auto& ev : t.events[i]) {
            if (!crosses_boundary(ev.kind)) continue;
            active = true;
            moved += ev.moved.size();
        }
        active_steps += active ? 1 : 0;
    }
    const auto len = static_cast<double>(w.length());
    return {w, mode, static_cast<double>(active_steps) / len, static_cast<double>(moved) / len};
}

} // namespace axiom
