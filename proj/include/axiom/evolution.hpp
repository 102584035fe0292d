#pragma once

// Step-indexed evolution. Each step's transfer events realize the time
// mapping from one snapshot to the next.

#include "axiom/universe.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace axiom {

enum class TransferKind { external_in, external_out, internal };

inline const char* to_string(TransferKind k)
{
    switch (k) {
    case TransferKind::external_in: return "external_in";
    case TransferKind::external_out: return "external_out";
    case TransferKind::internal: return "internal";
    }
    return "internal";
}

inline TransferKind transfer_kind_from_string(const std::string& s)
{
    if (s == "external_in") return TransferKind::external_in;
    if (s == "external_out") return TransferKind::external_out;
    if (s == "internal") return TransferKind::internal;
    throw ModelError("unknown transfer kind '" + s + "'");
}

inline bool crosses_boundary(TransferKind k) { return k != TransferKind::internal; }

struct TransferEvent {
    TransferKind kind = TransferKind::internal;
    ElementSet moved;
    RegionId from;
    RegionId to;
    std::optional<std::string> via; // structure declaration id
    std::map<ElementId, ElementState> state_updates;

    friend bool operator==(const TransferEvent&, const TransferEvent&) = default;
};

struct Phase {
    std::string label;
    std::size_t begin = 0; // half-open step interval
    std::size_t end = 0;
    std::size_t cycle = 0; // steps per trial, 0 when not cyclic

    friend bool operator==(const Phase&, const Phase&) = default;
};

using StepEvents = std::vector<TransferEvent>;

/// Snapshots 0..n plus the n per-step event lists between them.
struct Trace {
    std::string label;
    std::vector<Snapshot> snapshots;
    std::vector<StepEvents> events;
    std::vector<Phase> phases;
    std::vector<StructureRelation> declarations;

    [[nodiscard]] std::size_t steps() const { return events.size(); }
    [[nodiscard]] const Snapshot& initial() const { return snapshots.front(); }

    [[nodiscard]] const StructureRelation* declaration(const std::string& id) const
    {
        for (const auto& d : declarations)
            if (d.id == id) return &d;
        return nullptr;
    }

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// Checks that an event's kind agrees with the sides of the regions it connects.
inline void check_event_sides(const Snapshot& s, const TransferEvent& ev)
{
    Side from = s.side_of(ev.from);
    Side to = s.side_of(ev.to);
    bool ok = false;
    switch (ev.kind) {
    case TransferKind::external_in: ok = from == Side::environment && to == Side::system; break;
    case TransferKind::external_out: ok = from == Side::system && to == Side::environment; break;
    case TransferKind::internal: ok = from == Side::system && to == Side::system; break;
    }
    if (!ok)
        throw ModelError(std::string("region-side mismatch for ") + to_string(ev.kind) + " event " + ev.from.value +
                             " -> " + ev.to.value,
                         s.step);
}

/// Applies one step's events. Every element may be moved by at most one event per step.
inline Snapshot apply_step(const Snapshot& s, const StepEvents& evs)
{
    Snapshot next = s;
    next.step = s.step + 1;

    std::map<ElementId, TransferKind> moved_by;
    for (const auto& ev : evs) {
        if (ev.moved.empty()) throw ModelError("transfer event moves no elements", s.step);
        check_event_sides(s, ev);
        for (const auto& e : ev.moved) {
            auto it = s.membership.find(e);
            if (it == s.membership.end()) throw ModelError("unknown element '" + e.value + "'", s.step);
            auto [prev, fresh] = moved_by.emplace(e, ev.kind);
            if (!fresh) {
                bool opposite = (prev->second == TransferKind::external_in && ev.kind == TransferKind::external_out) ||
                                (prev->second == TransferKind::external_out && ev.kind == TransferKind::external_in);
                throw ModelError(std::string(opposite ? "boundary double-move" : "element moved twice") + " of '" +
                                     e.value + "'",
                                 s.step);
            }
            if (it->second != ev.from)
                throw ModelError("element '" + e.value + "' is in region '" + it->second.value + "', not '" +
                                     ev.from.value + "'",
                                 s.step);
            next.membership[e] = ev.to;
        }
        for (const auto& [e, st] : ev.state_updates) {
            if (!s.states.contains(e)) throw ModelError("state update for unknown element '" + e.value + "'", s.step);
            next.states[e] = st;
        }
    }
    return next;
}

inline void validate_declarations(const Snapshot& initial, const std::vector<StructureRelation>& decls)
{
    std::set<std::string> ids;
    for (const auto& d : decls) {
        if (!ids.insert(d.id).second) throw ModelError("duplicate structure declaration '" + d.id + "'");
        require_known_regions(initial, d.scope);
        for (const auto& t : d.tuples) {
            if (t.size() != d.arity()) throw ModelError("tuple arity mismatch in relation '" + d.id + "'");
            for (const auto& e : t)
                if (!initial.membership.contains(e))
                    throw ModelError("relation '" + d.id + "' names unknown element '" + e.value + "'");
        }
    }
}

/// Replays `schedule` from `initial`, validating every step, phase, and declaration.
inline Trace build_trace(Snapshot initial, std::vector<StepEvents> schedule, std::vector<Phase> phases = {},
                         std::vector<StructureRelation> declarations = {}, std::string label = {})
{
    initial.step = 0;
    validate_declarations(initial, declarations);

    Trace t;
    t.label = std::move(label);
    t.snapshots.reserve(schedule.size() + 1);
    t.snapshots.push_back(std::move(initial));
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        for (const auto& ev : schedule[i]) {
            if (ev.via &&
                std::none_of(declarations.begin(), declarations.end(),
                             [&](const StructureRelation& d) { return d.id == *ev.via; }))
                throw ModelError("event cites undeclared structure '" + *ev.via + "'", i);
        }
        t.snapshots.push_back(apply_step(t.snapshots.back(), schedule[i]));
    }
    for (const auto& p : phases)
        if (p.begin > p.end || p.end > schedule.size())
            throw ModelError("phase '" + p.label + "' lies outside the trace");
    t.events = std::move(schedule);
    t.phases = std::move(phases);
    t.declarations = std::move(declarations);
    return t;
}

struct ConservationViolation {
    std::size_t step = 0;
    std::size_t expected = 0;
    std::size_t actual = 0;

    friend bool operator==(const ConservationViolation&, const ConservationViolation&) = default;
};

/// Reports every step where |E| + |O| or the element-id set changed.
inline std::vector<ConservationViolation> verify_conservation(const Trace& t)
{
    std::vector<ConservationViolation> out;
    for (std::size_t i = 0; i + 1 < t.snapshots.size(); ++i) {
        const auto& a = t.snapshots[i];
        const auto& b = t.snapshots[i + 1];
        std::size_t before = cardinality(a, a.regions(Side::system)) + cardinality(a, a.regions(Side::environment));
        std::size_t after = cardinality(b, b.regions(Side::system)) + cardinality(b, b.regions(Side::environment));
        bool same_ids = a.membership.size() == b.membership.size() &&
                        std::equal(a.membership.begin(), a.membership.end(), b.membership.begin(),
                                   [](const auto& x, const auto& y) { return x.first == y.first; });
        if (before != after || !same_ids) out.push_back({i, before, after});
    }
    return out;
}

} // namespace axiom
