#include "axiom/scenarios.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace axiom;
using axiom::testing::move;

namespace {

ScenarioConfig small(ScenarioKind k, std::size_t trials, std::size_t tests, std::uint64_t seed = 5)
{
    auto cfg = default_config(k);
    cfg.trials = trials;
    cfg.test_count = tests;
    cfg.seed = seed;
    return cfg;
}

std::shared_ptr<const IntelligenceCategory> category(const Trace& t)
{
    return std::make_shared<const IntelligenceCategory>(category_of(functor_from_trace(t)));
}

// a walks in -> hidden -> out -> env over three steps; the input relation
// covers {in}, processing {hidden}, output {out}.
Trace walk()
{
    auto s = make_snapshot({{ElementId("a"), {}}, {ElementId("b"), {}}},
                           {{ElementId("a"), RegionId("in")}, {ElementId("b"), RegionId("hidden")}},
                           {{RegionId("in"), Side::system},
                            {RegionId("hidden"), Side::system},
                            {RegionId("out"), Side::system},
                            {RegionId("env"), Side::environment}});
    std::vector<StructureRelation> decls{
        make_relation("ci", Role::input, {"x"}, {{ElementId("a")}, {ElementId("b")}}, {RegionId("in")}),
        make_relation("cp", Role::processing, {"x"}, {{ElementId("a")}, {ElementId("b")}}, {RegionId("hidden")}),
        make_relation("co", Role::output, {"x"}, {{ElementId("a")}, {ElementId("b")}},
                      {RegionId("hidden"), RegionId("out")})};
    return build_trace(s,
                       {{move(TransferKind::internal, {"a"}, "in", "hidden")},
                        {move(TransferKind::internal, {"a"}, "hidden", "out")},
                        {move(TransferKind::external_out, {"a"}, "out", "env")}},
                       {}, decls, "walk");
}

} // namespace

TEST(TimeCategory, HomSets)
{
    auto c = time_category(6);
    EXPECT_EQ(c.object_count(), 7u);
    EXPECT_EQ(c.hom(2, 5), (TimeArrow{2, 5}));
    EXPECT_FALSE(c.hom(5, 2));
    EXPECT_EQ(c.compose(*c.hom(2, 4), *c.hom(0, 2)), (TimeArrow{0, 4}));
    EXPECT_EQ(c.compose(c.identity(3), *c.hom(1, 3)), (TimeArrow{1, 3}));
    EXPECT_THROW((void)c.compose(*c.hom(3, 4), *c.hom(0, 2)), ModelError);
    EXPECT_THROW((void)c.hom(0, 7), ModelError);
    for (std::size_t n = 0; n <= 30; ++n) {
        auto tn = time_category(n);
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j <= n; ++j) ASSERT_EQ(tn.hom(i, j).has_value(), i <= j);
    }
}

TEST(TimeFunctor, PersistenceMaps)
{
    auto t = walk();
    auto f = functor_from_trace(t);
    ASSERT_EQ(f.objects.size(), 4u);
    const Tuple a{ElementId("a")}, b{ElementId("b")};
    EXPECT_EQ(f.objects[0].carrier(Role::input), Carrier{a});
    EXPECT_EQ(f.objects[1].carrier(Role::processing), (Carrier{a, b}));
    EXPECT_EQ(f.objects[2].carrier(Role::processing), Carrier{b});
    EXPECT_EQ(f.objects[2].carrier(Role::output), (Carrier{a, b}));

    // F(id) is the identity
    EXPECT_EQ(f.morphisms.at({1, 1}), identity_morphism(f.objects[1], 1));
    // a leaves the processing carrier at t_2
    EXPECT_EQ(f.morphisms.at({1, 2}).component(Role::processing), (ComponentMap{{b, b}}));
    EXPECT_EQ(f.morphisms.at({0, 2}), compose(f.morphisms.at({1, 2}), f.morphisms.at({0, 1})));
    EXPECT_TRUE(f.morphisms.at({0, 3}).component(Role::input).empty());

    auto laws = check_functor_laws(f);
    EXPECT_TRUE(laws.passed());
    EXPECT_EQ(laws.identities_checked, 4u);
    EXPECT_EQ(laws.compositions_checked, 20u);
}

TEST(TimeFunctor, CorruptedMorphismFailsAtFirstTriple)
{
    auto f = functor_from_trace(walk());
    // f_02 forgets that b persists in the output carrier
    f.morphisms.at({0, 2}).components[role_index(Role::output)].clear();
    auto laws = check_functor_laws(f);
    ASSERT_FALSE(laws.passed());
    const auto* first = laws.first("composition");
    ASSERT_NE(first, nullptr);
    EXPECT_EQ(first->indices, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(TimeFunctor, TypingFailure)
{
    auto f = functor_from_trace(walk());
    f.morphisms.at({1, 2}).components[role_index(Role::processing)][{ElementId("b")}] = {ElementId("a")};
    auto laws = check_functor_laws(f);
    ASSERT_NE(laws.first("typing"), nullptr);
}

TEST(TimeFunctor, SingleSnapshotPassesVacuously)
{
    auto t = walk();
    auto f = functor_from_trace(t, {1, 1});
    EXPECT_EQ(f.n, 0u);
    auto laws = check_functor_laws(f);
    EXPECT_TRUE(laws.passed());
    EXPECT_EQ(laws.identities_checked, 1u);
}

TEST(TimeFunctor, RequiresRoleDeclarations)
{
    auto t = build_trace(axiom::testing::four_elements(), {{}});
    EXPECT_THROW(functor_from_trace(t), ModelError);
}

TEST(TimeFunctor, LawsHoldOnScenarios)
{
    for (auto k : {ScenarioKind::hebbian, ScenarioKind::backprop, ScenarioKind::aplysia, ScenarioKind::sandpile,
                   ScenarioKind::off}) {
        auto cfg = small(k, 6, 3);
        if (k == ScenarioKind::sandpile || k == ScenarioKind::off) cfg.trials = 20;
        auto b = generate(k, cfg);
        auto laws = check_functor_laws(functor_from_trace(b.trace, {0, std::min<std::size_t>(b.trace.steps(), 30)}));
        EXPECT_TRUE(laws.passed()) << to_string(k);
    }
}

TEST(Mimicry, AplysiaToHebbianValidates)
{
    auto ap = generate(ScenarioKind::aplysia, small(ScenarioKind::aplysia, 5, 3)).trace;
    auto hb = generate(ScenarioKind::hebbian, small(ScenarioKind::hebbian, 5, 3)).trace;
    auto map = aplysia_to_hebbian_map(ap, hb);
    auto g = mimicry_functor(category(ap), category(hb), map);
    EXPECT_TRUE(check_functor_laws(g).passed());
    EXPECT_EQ(g.object_map.size(), ap.steps() + 1);
}

TEST(Mimicry, Rejections)
{
    auto ap = generate(ScenarioKind::aplysia, small(ScenarioKind::aplysia, 4, 2)).trace;
    auto hb = generate(ScenarioKind::hebbian, small(ScenarioKind::hebbian, 4, 2)).trace;
    auto src = category(ap), dst = category(hb);
    const auto good = aplysia_to_hebbian_map(ap, hb);

    auto missing = good;
    missing.components.erase(Role::processing);
    try {
        mimicry_functor(src, dst, missing);
        FAIL();
    }
    catch (const MimicryError& e) {
        EXPECT_NE(std::string(e.what()).find("missing component map"), std::string::npos);
        EXPECT_EQ(e.counterexample(), "f_p");
    }

    // input tuples sent to output-layer tuples: wrong carrier
    auto swapped = good;
    swapped.components[Role::input] = good.components.at(Role::output);
    EXPECT_THROW(mimicry_functor(src, dst, swapped), MimicryError);

    auto partial = good;
    partial.components[Role::output].erase(partial.components[Role::output].begin());
    EXPECT_THROW(mimicry_functor(src, dst, partial), MimicryError);

    // two trials swapped in the input map: carriers still match at some
    // times but the persistence squares no longer commute, or a carrier breaks
    auto crossed = good;
    auto& ci = crossed.components[Role::input];
    auto first = ci.begin(), second = std::next(ci.begin());
    std::swap(first->second, second->second);
    try {
        mimicry_functor(src, dst, crossed);
        FAIL();
    }
    catch (const MimicryError& e) {
        EXPECT_FALSE(e.counterexample().empty());
    }

    auto shifted = good;
    for (auto& [a, b] : shifted.objects) b = std::min(b + 1, dst->objects.size() - 1);
    EXPECT_THROW(mimicry_functor(src, dst, shifted), MimicryError);
}

TEST(Mimicry, Composition)
{
    auto ap = generate(ScenarioKind::aplysia, small(ScenarioKind::aplysia, 4, 2)).trace;
    auto hb = generate(ScenarioKind::hebbian, small(ScenarioKind::hebbian, 4, 2)).trace;
    auto src = category(ap), dst = category(hb);
    auto g = mimicry_functor(src, dst, aplysia_to_hebbian_map(ap, hb));

    auto f = functor_from_trace(ap);
    auto h = compose_functors(f, g);
    EXPECT_EQ(h.codomain, "hebbian");
    EXPECT_TRUE(check_functor_laws(h).passed());
    for (std::size_t i = 0; i < h.objects.size(); ++i) EXPECT_EQ(h.objects[i], dst->objects[g.object_map[i]]);

    // identity functor is neutral on both sides
    EXPECT_EQ(compose_functors(f, identity_functor(src)), f);
    auto gi = compose_functors(g, identity_functor(dst));
    EXPECT_EQ(gi.object_map, g.object_map);
    EXPECT_EQ(gi.components, g.components);
    EXPECT_EQ(gi.morphism_map, g.morphism_map);
    EXPECT_TRUE(check_functor_laws(identity_functor(src)).passed());

    EXPECT_THROW(compose_functors(functor_from_trace(hb), g), ModelError);
}
