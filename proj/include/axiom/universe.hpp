#pragma once

// Finite universe model: elements with states, regions that partition the
// universe into a system side (the existence) and an environment side (its
// complement), and structures as finite extensional relations.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace axiom {

/// Raised for any violated precondition or invariant of the model.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what, std::optional<std::size_t> step = std::nullopt)
        : std::runtime_error(step ? what + " (step " + std::to_string(*step) + ")" : what), step_(step)
    {
    }

    [[nodiscard]] std::optional<std::size_t> step() const { return step_; }

private:
    std::optional<std::size_t> step_;
};

template <typename Tag>
struct StrongId {
    std::string value;

    StrongId() = default;
    explicit StrongId(std::string v) : value(std::move(v)) {}
    explicit StrongId(const char* v) : value(v) {}

    friend auto operator<=>(const StrongId&, const StrongId&) = default;
    friend bool operator==(const StrongId&, const StrongId&) = default;
};

using ElementId = StrongId<struct ElementTag>;
using RegionId = StrongId<struct RegionTag>;

using RegionSet = std::set<RegionId>;
using ElementSet = std::set<ElementId>;

enum class Side { system, environment };

inline const char* to_string(Side s) { return s == Side::system ? "system" : "environment"; }

inline Side side_from_string(const std::string& s)
{
    if (s == "system") return Side::system;
    if (s == "environment") return Side::environment;
    throw ModelError("unknown region side '" + s + "'");
}

/// A state attribute is numeric or a tag.
using Value = std::variant<double, std::string>;

/// Immutable attribute map with cheap copies. Keys are kept sorted.
class ElementState {
public:
    using Attributes = std::map<std::string, Value>;

    ElementState() : attrs_(empty()) {}
    ElementState(Attributes attrs) : attrs_(std::make_shared<const Attributes>(std::move(attrs))) {}
    ElementState(std::initializer_list<Attributes::value_type> init)
        : attrs_(std::make_shared<const Attributes>(init))
    {
    }

    [[nodiscard]] const Attributes& attrs() const { return *attrs_; }

    [[nodiscard]] std::optional<Value> get(const std::string& key) const
    {
        auto it = attrs_->find(key);
        if (it == attrs_->end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] double number(const std::string& key, double fallback = 0.0) const
    {
        auto it = attrs_->find(key);
        if (it == attrs_->end() || !std::holds_alternative<double>(it->second)) return fallback;
        return std::get<double>(it->second);
    }

    [[nodiscard]] std::string tag(const std::string& key) const
    {
        auto it = attrs_->find(key);
        if (it == attrs_->end() || !std::holds_alternative<std::string>(it->second)) return {};
        return std::get<std::string>(it->second);
    }

    /// Copy with one attribute replaced or added.
    [[nodiscard]] ElementState with(const std::string& key, Value v) const
    {
        Attributes next = *attrs_;
        next[key] = std::move(v);
        return ElementState(std::move(next));
    }

    friend bool operator==(const ElementState& a, const ElementState& b)
    {
        return a.attrs_ == b.attrs_ || *a.attrs_ == *b.attrs_;
    }

private:
    static std::shared_ptr<const Attributes> empty()
    {
        static const auto e = std::make_shared<const Attributes>();
        return e;
    }

    std::shared_ptr<const Attributes> attrs_;
};

struct ElementSpec {
    ElementId id;
    ElementState state;
};

/// The universe at one time index.
struct Snapshot {
    std::size_t step = 0;
    std::map<ElementId, RegionId> membership;
    std::map<RegionId, Side> region_side;
    std::map<ElementId, ElementState> states;

    [[nodiscard]] std::size_t size() const { return membership.size(); }

    [[nodiscard]] bool has_region(const RegionId& r) const { return region_side.contains(r); }

    [[nodiscard]] const RegionId& region_of(const ElementId& e) const
    {
        auto it = membership.find(e);
        if (it == membership.end()) throw ModelError("unknown element '" + e.value + "'", step);
        return it->second;
    }

    [[nodiscard]] Side side_of(const RegionId& r) const
    {
        auto it = region_side.find(r);
        if (it == region_side.end()) throw ModelError("unknown region '" + r.value + "'", step);
        return it->second;
    }

    [[nodiscard]] RegionSet regions() const
    {
        RegionSet out;
        for (const auto& [r, _] : region_side) out.insert(r);
        return out;
    }

    [[nodiscard]] RegionSet regions(Side s) const
    {
        RegionSet out;
        for (const auto& [r, side] : region_side)
            if (side == s) out.insert(r);
        return out;
    }

    /// Element count of every region, including empty ones.
    [[nodiscard]] std::map<RegionId, std::size_t> region_counts() const
    {
        std::map<RegionId, std::size_t> out;
        for (const auto& [r, _] : region_side) out[r] = 0;
        for (const auto& [_, r] : membership) ++out[r];
        return out;
    }

    [[nodiscard]] ElementSet elements() const
    {
        ElementSet out;
        for (const auto& [e, _] : membership) out.insert(e);
        return out;
    }

    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// Builds the step-0 snapshot, checking that regions partition the elements.
inline Snapshot make_snapshot(const std::vector<ElementSpec>& elements,
                              const std::map<ElementId, RegionId>& membership,
                              const std::map<RegionId, Side>& region_side)
{
    Snapshot s;
    s.region_side = region_side;
    for (const auto& el : elements) {
        if (s.states.contains(el.id)) throw ModelError("duplicate element id '" + el.id.value + "'");
        auto it = membership.find(el.id);
        if (it == membership.end()) throw ModelError("unassigned element '" + el.id.value + "'");
        if (!region_side.contains(it->second))
            throw ModelError("region without side '" + it->second.value + "'");
        s.states.emplace(el.id, el.state);
        s.membership.emplace(el.id, it->second);
    }
    for (const auto& [e, _] : membership)
        if (!s.states.contains(e)) throw ModelError("membership names unknown element '" + e.value + "'");
    return s;
}

inline void require_known_regions(const Snapshot& s, const RegionSet& rs)
{
    for (const auto& r : rs)
        if (!s.has_region(r)) throw ModelError("unknown region '" + r.value + "'", s.step);
}

/// Number of elements whose region lies in `rs`.
inline std::size_t cardinality(const Snapshot& s, const RegionSet& rs)
{
    require_known_regions(s, rs);
    return static_cast<std::size_t>(std::count_if(s.membership.begin(), s.membership.end(),
                                                  [&](const auto& kv) { return rs.contains(kv.second); }));
}

/// Regions outside `existence`: O = U \ E at region granularity.
inline RegionSet complement(const Snapshot& s, const RegionSet& existence)
{
    require_known_regions(s, existence);
    RegionSet out;
    for (const auto& [r, _] : s.region_side)
        if (!existence.contains(r)) out.insert(r);
    return out;
}

// ---------------------------------------------------------------------------
// Structures

enum class Role { input, processing, output, other };

inline const char* to_string(Role r)
{
    switch (r) {
    case Role::input: return "input";
    case Role::processing: return "processing";
    case Role::output: return "output";
    case Role::other: return "other";
    }
    return "other";
}

/// Short structure symbol used in attribution sequences.
inline const char* symbol(Role r)
{
    switch (r) {
    case Role::input: return "C_i";
    case Role::processing: return "C_p";
    case Role::output: return "C_o";
    case Role::other: return "C";
    }
    return "C";
}

inline Role role_from_string(const std::string& s)
{
    if (s == "input") return Role::input;
    if (s == "processing") return Role::processing;
    if (s == "output") return Role::output;
    if (s == "other") return Role::other;
    throw ModelError("unknown structure role '" + s + "'");
}

using Tuple = std::vector<ElementId>;

/// A finite relation over element ids. Each position is a named factor.
struct StructureRelation {
    std::string id;
    Role role = Role::other;
    std::vector<std::string> factors;
    std::set<Tuple> tuples;
    RegionSet scope;

    [[nodiscard]] std::size_t arity() const { return factors.size(); }

    friend bool operator==(const StructureRelation&, const StructureRelation&) = default;
};

/// Default factor labels f0..f{n-1}.
inline std::vector<std::string> positional_factors(std::size_t arity)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arity; ++i) out.push_back("f" + std::to_string(i));
    return out;
}

inline StructureRelation make_relation(std::string id, Role role, std::vector<std::string> factors,
                                       std::set<Tuple> tuples, RegionSet scope = {})
{
    std::set<std::string> seen;
    for (const auto& f : factors)
        if (!seen.insert(f).second) throw ModelError("duplicate factor '" + f + "' in relation '" + id + "'");
    for (const auto& t : tuples)
        if (t.size() != factors.size())
            throw ModelError("tuple arity mismatch in relation '" + id + "'");
    return {std::move(id), role, std::move(factors), std::move(tuples), std::move(scope)};
}

/// The nullary relation holding exactly the empty tuple.
inline StructureRelation unit_relation(std::string id = "unit")
{
    return make_relation(std::move(id), Role::other, {}, {Tuple{}});
}

/// C / C_p: drops the named factors and projects every tuple onto the rest.
inline StructureRelation remove_product(const StructureRelation& c, const std::set<std::string>& removed)
{
    for (const auto& f : removed)
        if (std::find(c.factors.begin(), c.factors.end(), f) == c.factors.end())
            throw ModelError("factor '" + f + "' is not a position of relation '" + c.id + "'");

    std::vector<std::size_t> keep;
    StructureRelation out{c.id, c.role, {}, {}, c.scope};
    for (std::size_t i = 0; i < c.factors.size(); ++i) {
        if (removed.contains(c.factors[i])) continue;
        keep.push_back(i);
        out.factors.push_back(c.factors[i]);
    }
    for (const auto& t : c.tuples) {
        Tuple projected;
        projected.reserve(keep.size());
        for (auto i : keep) projected.push_back(t[i]);
        out.tuples.insert(std::move(projected));
    }
    return out;
}

/// C_E x C_P over disjoint factor sets.
inline StructureRelation extend_product(const StructureRelation& ce, const StructureRelation& cp)
{
    for (const auto& f : cp.factors)
        if (std::find(ce.factors.begin(), ce.factors.end(), f) != ce.factors.end())
            throw ModelError("overlapping factor '" + f + "' in product of '" + ce.id + "' and '" + cp.id + "'");

    StructureRelation out{ce.id, ce.role, ce.factors, {}, ce.scope};
    out.factors.insert(out.factors.end(), cp.factors.begin(), cp.factors.end());
    out.scope.insert(cp.scope.begin(), cp.scope.end());
    for (const auto& a : ce.tuples) {
        for (const auto& b : cp.tuples) {
            Tuple t = a;
            t.insert(t.end(), b.begin(), b.end());
            out.tuples.insert(std::move(t));
        }
    }
    return out;
}

/// Tuples of `candidate` that fall outside `bound`, after aligning factors by name.
/// Empty result means `candidate` is contained in `bound`.
inline std::vector<Tuple> containment_violations(const StructureRelation& bound, const StructureRelation& candidate)
{
    if (bound.factors.size() != candidate.factors.size())
        throw ModelError("containment check between relations of different arity");
    std::vector<std::size_t> perm;
    for (const auto& f : bound.factors) {
        auto it = std::find(candidate.factors.begin(), candidate.factors.end(), f);
        if (it == candidate.factors.end()) throw ModelError("factor '" + f + "' missing from candidate relation");
        perm.push_back(static_cast<std::size_t>(it - candidate.factors.begin()));
    }
    std::vector<Tuple> out;
    for (const auto& t : candidate.tuples) {
        Tuple aligned;
        for (auto i : perm) aligned.push_back(t[i]);
        if (!bound.tuples.contains(aligned)) out.push_back(t);
    }
    return out;
}

/// Tuples whose every element currently sits in one of the relation's scope regions.
/// An empty scope means the relation is evaluated over the whole system side.
inline std::set<Tuple> carrier_at(const StructureRelation& c, const Snapshot& s)
{
    RegionSet scope = c.scope.empty() ? s.regions(Side::system) : c.scope;
    std::set<Tuple> out;
    for (const auto& t : c.tuples) {
        bool inside = std::all_of(t.begin(), t.end(), [&](const ElementId& e) {
            auto it = s.membership.find(e);
            return it != s.membership.end() && scope.contains(it->second);
        });
        if (inside) out.insert(t);
    }
    return out;
}

} // namespace axiom
