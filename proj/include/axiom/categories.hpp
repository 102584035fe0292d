#pragma once

// Finite Time Category, Intelligence Categories realized from traces, time
// functors, mimicry functors between intelligence categories, and law checks.
//
// Composition is always written later ∘ earlier. Morphism component maps are
// finite partial maps on carrier tuples; equality is extensional.

#include "axiom/classifier.hpp"

#include <array>
#include <memory>
#include <sstream>
#include <utility>

namespace axiom {

inline constexpr std::array<Role, 3> kStructureRoles{Role::input, Role::processing, Role::output};

inline std::size_t role_index(Role r)
{
    switch (r) {
    case Role::input: return 0;
    case Role::processing: return 1;
    case Role::output: return 2;
    case Role::other: break;
    }
    throw ModelError("role 'other' has no intelligence component");
}

inline std::string render_tuple(const Tuple& t)
{
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + t[i].value;
    return out + ")";
}

// ---------------------------------------------------------------------------
// Time Category

struct TimeArrow {
    std::size_t from = 0;
    std::size_t to = 0;

    friend bool operator==(const TimeArrow&, const TimeArrow&) = default;
};

/// Objects t_0..t_n; exactly one arrow t_i -> t_j when i <= j, none otherwise.
struct TimeCategory {
    std::size_t n = 0;

    [[nodiscard]] std::size_t object_count() const { return n + 1; }

    [[nodiscard]] std::optional<TimeArrow> hom(std::size_t i, std::size_t j) const
    {
        if (i > n || j > n) throw ModelError("time object out of range");
        if (i > j) return std::nullopt;
        return TimeArrow{i, j};
    }

    [[nodiscard]] TimeArrow identity(std::size_t i) const { return *hom(i, i); }

    [[nodiscard]] TimeArrow compose(const TimeArrow& later, const TimeArrow& earlier) const
    {
        if (earlier.to != later.from) throw ModelError("time arrows are not composable");
        return TimeArrow{earlier.from, later.to};
    }
};

inline TimeCategory time_category(std::size_t n) { return TimeCategory{n}; }

// ---------------------------------------------------------------------------
// Intelligence Category

using Carrier = std::set<Tuple>;
using ComponentMap = std::map<Tuple, Tuple>;

/// (C_i, C_p, C_o) carriers at one time point.
struct IntelligenceObject {
    std::array<Carrier, 3> carriers;

    [[nodiscard]] const Carrier& carrier(Role r) const { return carriers[role_index(r)]; }

    friend bool operator==(const IntelligenceObject&, const IntelligenceObject&) = default;
};

struct IntelligenceMorphism {
    std::size_t source = 0;
    std::size_t target = 0;
    std::array<ComponentMap, 3> components;

    [[nodiscard]] const ComponentMap& component(Role r) const { return components[role_index(r)]; }

    friend bool operator==(const IntelligenceMorphism&, const IntelligenceMorphism&) = default;
};

inline IntelligenceMorphism identity_morphism(const IntelligenceObject& obj, std::size_t index)
{
    IntelligenceMorphism m{index, index, {}};
    for (std::size_t k = 0; k < 3; ++k)
        for (const auto& t : obj.carriers[k]) m.components[k].emplace(t, t);
    return m;
}

/// later ∘ earlier, defined where earlier's image lies in later's domain.
inline IntelligenceMorphism compose(const IntelligenceMorphism& later, const IntelligenceMorphism& earlier)
{
    if (earlier.target != later.source) throw ModelError("morphisms are not composable");
    IntelligenceMorphism m{earlier.source, later.target, {}};
    for (std::size_t k = 0; k < 3; ++k) {
        for (const auto& [x, y] : earlier.components[k]) {
            auto it = later.components[k].find(y);
            if (it != later.components[k].end()) m.components[k].emplace(x, it->second);
        }
    }
    return m;
}

using ArrowKey = std::pair<std::size_t, std::size_t>;

struct IntelligenceCategory {
    std::string name;
    std::vector<IntelligenceObject> objects;
    std::map<ArrowKey, IntelligenceMorphism> morphisms;
};

// ---------------------------------------------------------------------------
// Time functors

/// F: T -> I. Object i is the intelligence object at time t_i.
struct TimeFunctor {
    std::string codomain;
    std::size_t n = 0;
    std::vector<IntelligenceObject> objects;
    std::map<ArrowKey, IntelligenceMorphism> morphisms;

    friend bool operator==(const TimeFunctor&, const TimeFunctor&) = default;
};

inline std::array<const StructureRelation*, 3> role_declarations(const Trace& t)
{
    std::array<const StructureRelation*, 3> out{};
    for (const auto& d : t.declarations) {
        if (d.role == Role::other) continue;
        auto& slot = out[role_index(d.role)];
        if (slot) throw ModelError(std::string("more than one ") + to_string(d.role) + " structure declared");
        slot = &d;
    }
    for (auto r : kStructureRoles)
        if (!out[role_index(r)]) throw ModelError(std::string("missing ") + to_string(r) + " structure declaration");
    return out;
}

/// Objects are role carriers per snapshot; f_ij maps each tuple that stays in
/// scope at every snapshot i..j to itself.
inline TimeFunctor functor_from_trace(const Trace& t, const Window& w)
{
    if (w.begin > w.end || w.end > t.steps()) throw ModelError("window exceeds trace length");
    auto decls = role_declarations(t);

    TimeFunctor f;
    f.codomain = t.label;
    f.n = w.length();
    for (std::size_t i = w.begin; i <= w.end; ++i) {
        IntelligenceObject obj;
        for (std::size_t k = 0; k < 3; ++k) obj.carriers[k] = carrier_at(*decls[k], t.snapshots[i]);
        f.objects.push_back(std::move(obj));
    }
    for (std::size_t i = 0; i <= f.n; ++i) {
        IntelligenceMorphism m = identity_morphism(f.objects[i], i);
        f.morphisms.emplace(ArrowKey{i, i}, m);
        for (std::size_t j = i + 1; j <= f.n; ++j) {
            m.target = j;
            for (std::size_t k = 0; k < 3; ++k)
                std::erase_if(m.components[k], [&](const auto& kv) { return !f.objects[j].carriers[k].contains(kv.first); });
            f.morphisms.emplace(ArrowKey{i, j}, m);
        }
    }
    return f;
}

inline TimeFunctor functor_from_trace(const Trace& t) { return functor_from_trace(t, Window{0, t.steps()}); }

inline IntelligenceCategory category_of(const TimeFunctor& f)
{
    return IntelligenceCategory{f.codomain, f.objects, f.morphisms};
}

// ---------------------------------------------------------------------------
// Law checking

struct LawFailure {
    std::string law; // "identity", "composition", "table", "typing"
    std::vector<std::size_t> indices;
    std::string detail;
};

struct LawReport {
    std::size_t identities_checked = 0;
    std::size_t compositions_checked = 0;
    std::vector<LawFailure> failures;

    [[nodiscard]] bool passed() const { return failures.empty(); }

    [[nodiscard]] const LawFailure* first(const std::string& law) const
    {
        for (const auto& f : failures)
            if (f.law == law) return &f;
        return nullptr;
    }
};

namespace law_detail {

inline std::optional<std::string> typing_error(const IntelligenceMorphism& m, const IntelligenceObject& src,
                                               const IntelligenceObject& dst)
{
    for (std::size_t k = 0; k < 3; ++k) {
        for (const auto& [x, y] : m.components[k]) {
            if (!src.carriers[k].contains(x))
                return std::string(to_string(kStructureRoles[k])) + " map defined outside source carrier at " + render_tuple(x);
            if (!dst.carriers[k].contains(y))
                return std::string(to_string(kStructureRoles[k])) + " map leaves target carrier: " + render_tuple(x) +
                       " -> " + render_tuple(y);
        }
    }
    return std::nullopt;
}

} // namespace law_detail

/// Identity preservation for every t_i and composition preservation for every i <= j <= k.
inline LawReport check_functor_laws(const TimeFunctor& f)
{
    LawReport rep;
    if (f.objects.size() != f.n + 1) rep.failures.push_back({"table", {}, "object table does not cover t_0..t_n"});
    const std::size_t count = std::min(f.objects.size(), f.n + 1);

    for (const auto& [key, m] : f.morphisms) {
        auto [i, j] = key;
        if (i > j || j >= count) {
            rep.failures.push_back({"table", {i, j}, "morphism outside hom(i, j)"});
            continue;
        }
        if (m.source != i || m.target != j) rep.failures.push_back({"typing", {i, j}, "endpoints do not match key"});
        else if (auto err = law_detail::typing_error(m, f.objects[i], f.objects[j]))
            rep.failures.push_back({"typing", {i, j}, *err});
    }

    auto find = [&](std::size_t i, std::size_t j) -> const IntelligenceMorphism* {
        auto it = f.morphisms.find({i, j});
        return it == f.morphisms.end() ? nullptr : &it->second;
    };

    for (std::size_t i = 0; i < count; ++i) {
        ++rep.identities_checked;
        const auto* m = find(i, i);
        if (!m) rep.failures.push_back({"table", {i, i}, "missing identity image"});
        else if (*m != identity_morphism(f.objects[i], i))
            rep.failures.push_back({"identity", {i}, "F(id) is not the identity"});
    }
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i; j < count; ++j) {
            for (std::size_t k = j; k < count; ++k) {
                ++rep.compositions_checked;
                const auto *ij = find(i, j), *jk = find(j, k), *ik = find(i, k);
                if (!ij || !jk || !ik) {
                    rep.failures.push_back({"table", {i, j, k}, "missing morphism image"});
                    continue;
                }
                if (ij->target != jk->source) continue; // reported as typing above
                if (compose(*jk, *ij) != *ik)
                    rep.failures.push_back({"composition", {i, j, k}, "F(t_jk o t_ij) != F(t_jk) o F(t_ij)"});
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Mimicry functors

/// Declarative mapping between two intelligence categories: object pairs plus
/// one tuple map per structure role.
struct MimicryMap {
    std::string source;
    std::string target;
    std::vector<std::pair<std::size_t, std::size_t>> objects;
    std::map<Role, ComponentMap> components;

    friend bool operator==(const MimicryMap&, const MimicryMap&) = default;
};

class MimicryError : public ModelError {
public:
    MimicryError(const std::string& what, std::string counterexample)
        : ModelError(what + ": " + counterexample), counterexample_(std::move(counterexample))
    {
    }

    [[nodiscard]] const std::string& counterexample() const { return counterexample_; }

private:
    std::string counterexample_;
};

/// G: I_A -> I_B.
struct MimicryFunctor {
    std::shared_ptr<const IntelligenceCategory> source;
    std::shared_ptr<const IntelligenceCategory> target;
    std::vector<std::size_t> object_map;
    std::array<ComponentMap, 3> components;
    std::map<ArrowKey, ArrowKey> morphism_map;

    [[nodiscard]] const IntelligenceMorphism& image(const ArrowKey& a) const
    {
        return target->morphisms.at(morphism_map.at(a));
    }
};

inline MimicryFunctor mimicry_functor(std::shared_ptr<const IntelligenceCategory> source,
                                      std::shared_ptr<const IntelligenceCategory> target, const MimicryMap& map)
{
    if (!map.source.empty() && map.source != source->name)
        throw MimicryError("mapping source does not match", map.source + " vs " + source->name);
    if (!map.target.empty() && map.target != target->name)
        throw MimicryError("mapping target does not match", map.target + " vs " + target->name);

    MimicryFunctor g;
    g.source = source;
    g.target = target;

    std::vector<std::optional<std::size_t>> objmap(source->objects.size());
    for (auto [a, b] : map.objects) {
        if (a >= source->objects.size()) throw MimicryError("object pair names unknown source object", std::to_string(a));
        if (b >= target->objects.size()) throw MimicryError("object pair names unknown target object", std::to_string(b));
        if (objmap[a]) throw MimicryError("source object mapped twice", std::to_string(a));
        objmap[a] = b;
    }
    for (std::size_t a = 0; a < objmap.size(); ++a) {
        if (!objmap[a]) throw MimicryError("object map is not total", "source object " + std::to_string(a));
        g.object_map.push_back(*objmap[a]);
    }

    for (auto r : kStructureRoles) {
        auto it = map.components.find(r);
        if (it == map.components.end())
            throw MimicryError("missing component map", std::string("f_") + symbol(r)[2]);
        g.components[role_index(r)] = it->second;
    }

    // f_k : C_k(a) -> C_k(G a) for every object and role.
    for (std::size_t a = 0; a < source->objects.size(); ++a) {
        const auto& src = source->objects[a];
        const auto& dst = target->objects[g.object_map[a]];
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& fk = g.components[k];
            for (const auto& x : src.carriers[k]) {
                std::string where = "object " + std::to_string(a) + ", " + to_string(kStructureRoles[k]) + " tuple " +
                                    render_tuple(x);
                auto it = fk.find(x);
                if (it == fk.end()) throw MimicryError("component map is not total", where);
                if (!dst.carriers[k].contains(it->second))
                    throw MimicryError("image tuple outside target carrier",
                                       where + " -> " + render_tuple(it->second) + " not in target object " +
                                           std::to_string(g.object_map[a]));
            }
        }
    }

    // Morphisms map to the arrow between the images, and every square commutes.
    for (const auto& [key, m] : source->morphisms) {
        ArrowKey img{g.object_map[key.first], g.object_map[key.second]};
        auto tit = target->morphisms.find(img);
        if (tit == target->morphisms.end())
            throw MimicryError("no target morphism for source morphism",
                               std::to_string(key.first) + "->" + std::to_string(key.second));
        g.morphism_map.emplace(key, img);
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& fk = g.components[k];
            for (const auto& [x, y] : m.components[k]) {
                const auto& gm = tit->second.components[k];
                auto fx = fk.find(x), fy = fk.find(y);
                auto gfx = fx == fk.end() ? gm.end() : gm.find(fx->second);
                if (fx == fk.end() || fy == fk.end() || gfx == gm.end() || gfx->second != fy->second)
                    throw MimicryError("structure not preserved along morphism",
                                       std::to_string(key.first) + "->" + std::to_string(key.second) + ", " +
                                           to_string(kStructureRoles[k]) + " tuple " + render_tuple(x));
            }
        }
    }
    return g;
}

inline LawReport check_functor_laws(const MimicryFunctor& g)
{
    LawReport rep;
    const auto& src = *g.source;
    const auto& dst = *g.target;
    auto image = [&](std::size_t a, std::size_t b) -> const IntelligenceMorphism* {
        auto it = g.morphism_map.find({a, b});
        if (it == g.morphism_map.end()) return nullptr;
        auto jt = dst.morphisms.find(it->second);
        return jt == dst.morphisms.end() ? nullptr : &jt->second;
    };

    for (std::size_t a = 0; a < src.objects.size(); ++a) {
        if (!src.morphisms.contains({a, a})) continue;
        ++rep.identities_checked;
        const auto* m = image(a, a);
        if (!m) rep.failures.push_back({"table", {a, a}, "missing identity image"});
        else if (*m != identity_morphism(dst.objects[g.object_map[a]], g.object_map[a]))
            rep.failures.push_back({"identity", {a}, "G(id) is not the identity"});
    }
    for (const auto& [ab, m1] : src.morphisms) {
        for (const auto& [bc, m2] : src.morphisms) {
            if (ab.second != bc.first) continue;
            ArrowKey ac{ab.first, bc.second};
            if (!src.morphisms.contains(ac)) continue;
            ++rep.compositions_checked;
            const auto *gab = image(ab.first, ab.second), *gbc = image(bc.first, bc.second),
                       *gac = image(ac.first, ac.second);
            if (!gab || !gbc || !gac) {
                rep.failures.push_back({"table", {ab.first, ab.second, bc.second}, "missing morphism image"});
                continue;
            }
            if (gab->target != gbc->source || compose(*gbc, *gab) != *gac)
                rep.failures.push_back({"composition", {ab.first, ab.second, bc.second}, "G(g o f) != G(g) o G(f)"});
        }
    }
    return rep;
}

inline MimicryFunctor identity_functor(std::shared_ptr<const IntelligenceCategory> cat)
{
    MimicryFunctor g;
    g.source = cat;
    g.target = cat;
    for (std::size_t a = 0; a < cat->objects.size(); ++a) {
        g.object_map.push_back(a);
        for (std::size_t k = 0; k < 3; ++k)
            for (const auto& t : cat->objects[a].carriers[k]) g.components[k].emplace(t, t);
    }
    for (const auto& [key, _] : cat->morphisms) g.morphism_map.emplace(key, key);
    return g;
}

/// H = G after F, i.e. G ∘ F. The codomain of `first` must be the domain of `second`.
inline TimeFunctor compose_functors(const TimeFunctor& first, const MimicryFunctor& second)
{
    if (first.codomain != second.source->name)
        throw ModelError("functor mismatch: F lands in '" + first.codomain + "' but G starts at '" +
                         second.source->name + "'");
    if (first.objects != second.source->objects || first.morphisms != second.source->morphisms)
        throw ModelError("functor mismatch: F's image is not G's domain category");

    TimeFunctor h;
    h.codomain = second.target->name;
    h.n = first.n;
    for (std::size_t i = 0; i < first.objects.size(); ++i)
        h.objects.push_back(second.target->objects[second.object_map[i]]);
    for (const auto& [key, _] : first.morphisms) {
        IntelligenceMorphism m = second.image(key);
        m.source = key.first;
        m.target = key.second;
        h.morphisms.emplace(key, std::move(m));
    }
    return h;
}

/// second ∘ first for two mimicry functors.
inline MimicryFunctor compose_functors(const MimicryFunctor& first, const MimicryFunctor& second)
{
    if (first.target->name != second.source->name || first.target->objects != second.source->objects)
        throw ModelError("functor mismatch: '" + first.target->name + "' is not '" + second.source->name + "'");

    MimicryFunctor h;
    h.source = first.source;
    h.target = second.target;
    for (auto b : first.object_map) h.object_map.push_back(second.object_map.at(b));
    for (std::size_t k = 0; k < 3; ++k) {
        for (const auto& [x, y] : first.components[k]) {
            auto it = second.components[k].find(y);
            if (it != second.components[k].end()) h.components[k].emplace(x, it->second);
        }
    }
    for (const auto& [key, mid] : first.morphism_map) {
        auto it = second.morphism_map.find(mid);
        if (it != second.morphism_map.end()) h.morphism_map.emplace(key, it->second);
    }
    return h;
}

} // namespace axiom
