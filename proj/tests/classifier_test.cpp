#include "axiom/oracle.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace axiom;
using axiom::testing::move;
using axiom::testing::random_trace;

namespace {

// hidden-pool, memory, in, outbox (system); world, sink (environment)
Snapshot pipeline()
{
    std::vector<ElementSpec> el;
    std::map<ElementId, RegionId> m;
    auto add = [&](const char* id, const char* region) {
        el.push_back({ElementId(id), {}});
        m[ElementId(id)] = RegionId(region);
    };
    add("tok", "world");
    add("tok2", "world");
    add("h", "hidden-pool");
    add("resp", "outbox");
    return make_snapshot(el, m,
                         {{RegionId("hidden-pool"), Side::system},
                          {RegionId("memory"), Side::system},
                          {RegionId("in"), Side::system},
                          {RegionId("outbox"), Side::system},
                          {RegionId("world"), Side::environment},
                          {RegionId("sink"), Side::environment}});
}

bool witness_is_sound(const Trace& t, const Witness& w)
{
    const auto& a = t.snapshots[w.step];
    const auto& b = t.snapshots[w.step + 1];
    auto delta = [&](const RegionSet& rs) {
        return static_cast<long>(cardinality(b, rs)) - static_cast<long>(cardinality(a, rs));
    };
    if (delta(w.grown) <= 0 || delta(w.shrunk) >= 0 || w.movers.empty()) return false;
    for (const auto& e : w.movers)
        if (!w.shrunk.contains(a.region_of(e)) || !w.grown.contains(b.region_of(e))) return false;
    Side grown_side = w.condition == Condition::input || w.condition == Condition::processing ? Side::system
                                                                                            : Side::environment;
    Side shrunk_side = w.condition == Condition::output || w.condition == Condition::processing ? Side::system
                                                                                              : Side::environment;
    for (const auto& r : w.grown)
        if (a.side_of(r) != grown_side) return false;
    for (const auto& r : w.shrunk)
        if (a.side_of(r) != shrunk_side) return false;
    return true;
}

} // namespace

TEST(WitnessInput, SingleToken)
{
    auto t = build_trace(pipeline(), {{move(TransferKind::external_in, {"tok"}, "world", "in")}, {}});
    auto w = witness_input(t, 0);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->grown, RegionSet{RegionId("in")});
    EXPECT_EQ(w->movers, ElementSet{ElementId("tok")});
    EXPECT_FALSE(witness_input(t, 1));
    EXPECT_THROW(witness_input(t, 2), ModelError);
}

TEST(WitnessInput, InternalOnlyStepIsNotInput)
{
    auto t = build_trace(pipeline(), {{move(TransferKind::internal, {"h"}, "hidden-pool", "memory")}});
    EXPECT_FALSE(witness_input(t, 0));
    EXPECT_FALSE(witness_output(t, 0));
}

TEST(WitnessOutput, EmitsResponse)
{
    auto t = build_trace(pipeline(), {{move(TransferKind::external_out, {"resp"}, "outbox", "sink")}, {}});
    auto w = witness_output(t, 0);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->shrunk, RegionSet{RegionId("outbox")});
    EXPECT_EQ(w->grown, RegionSet{RegionId("sink")});
    EXPECT_FALSE(witness_output(t, 1));
}

TEST(WitnessOutput, SimultaneousInAndOut)
{
    auto t = build_trace(pipeline(), {{move(TransferKind::external_in, {"tok"}, "world", "in"),
                                       move(TransferKind::external_out, {"resp"}, "outbox", "sink")}});
    auto in = witness_input(t, 0);
    auto out = witness_output(t, 0);
    ASSERT_TRUE(in);
    ASSERT_TRUE(out);
    for (const auto& e : in->movers) EXPECT_FALSE(out->movers.contains(e));
}

TEST(WitnessProcessing, BothDirections)
{
    auto t = build_trace(pipeline(), {{move(TransferKind::internal, {"h"}, "hidden-pool", "memory")},
                                      {move(TransferKind::internal, {"h"}, "memory", "hidden-pool")},
                                      {move(TransferKind::external_in, {"tok"}, "world", "in")}});
    auto w = witness_processing(t, 0);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->grown, RegionSet{RegionId("memory")});
    EXPECT_EQ(w->shrunk, RegionSet{RegionId("hidden-pool")});

    auto back = witness_processing(t, 1);
    ASSERT_TRUE(back);
    EXPECT_EQ(back->grown, RegionSet{RegionId("hidden-pool")});

    EXPECT_FALSE(witness_processing(t, 2));
}

TEST(WitnessProcessing, StateOnlyEventIsNotProcessing)
{
    TransferEvent ev = move(TransferKind::internal, {"h"}, "hidden-pool", "hidden-pool");
    ev.state_updates[ElementId("h")] = ElementState{{"w", 1.0}};
    auto t = build_trace(pipeline(), {{ev}});
    EXPECT_FALSE(witness_processing(t, 0));
}

TEST(WitnessInput, NetZeroRegionNeedsSubset)
{
    // tok enters "in" while h leaves "in" for "memory": "in" is unchanged, but
    // {in, memory} grows and the witness set must include memory.
    auto start = pipeline();
    start.membership[ElementId("h")] = RegionId("in");
    auto t = build_trace(start, {{move(TransferKind::external_in, {"tok"}, "world", "in"),
                                  move(TransferKind::internal, {"h"}, "in", "memory")}});
    auto w = witness_input(t, 0);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->grown, (RegionSet{RegionId("in"), RegionId("memory")}));
    EXPECT_TRUE(witness_is_sound(t, *w));
    auto oracle = brute_force_classify(t, {0, 1});
    EXPECT_EQ(oracle.input.size(), 1u);
}

TEST(Classify, InputProcessingOutputSequence)
{
    auto t = build_trace(pipeline(), {{move(TransferKind::external_in, {"tok"}, "world", "in")},
                                      {move(TransferKind::internal, {"tok"}, "in", "memory")},
                                      {move(TransferKind::external_out, {"resp"}, "outbox", "sink")}});
    auto rep = classify(t, full_window(t));
    EXPECT_TRUE(rep.verdict());
    EXPECT_EQ(witness_steps(rep.input), std::vector<std::size_t>{0});
    EXPECT_EQ(witness_steps(rep.processing), std::vector<std::size_t>{1});
    EXPECT_EQ(witness_steps(rep.output), std::vector<std::size_t>{2});

    // enumeration over every subset of regions, step by step
    auto brute = brute_force_classify(t, full_window(t));
    EXPECT_TRUE(brute.verdict());
    EXPECT_TRUE(compare_reports(rep, brute).agrees());

    EXPECT_FALSE(classify(t, {0, 2}).verdict());
    EXPECT_THROW(classify(t, {1, 1}), ModelError);
    EXPECT_THROW(classify(t, {0, 4}), ModelError);
}

TEST(Classify, NoEvents)
{
    auto t = build_trace(pipeline(), {{}, {}, {}});
    auto rep = classify(t, full_window(t));
    EXPECT_FALSE(rep.verdict());
    EXPECT_FALSE(rep.has_input() || rep.has_processing() || rep.has_output());
    EXPECT_FALSE(brute_force_classify(t, full_window(t)).verdict());
}

TEST(Classify, AttributionReadsTags)
{
    std::vector<StructureRelation> decls{make_relation("ci", Role::input, {"x"}, {}),
                                         make_relation("cp", Role::processing, {"x"}, {})};
    auto t = build_trace(pipeline(),
                         {{move(TransferKind::external_in, {"tok"}, "world", "in", "ci")},
                          {move(TransferKind::internal, {"tok"}, "in", "memory", "cp")},
                          {}},
                         {}, decls);
    auto rep = classify(t);
    ASSERT_EQ(rep.attribution.size(), 3u);
    EXPECT_EQ(rep.attribution[0].roles, std::vector<Role>{Role::input});
    EXPECT_EQ(rep.attribution[1].roles, std::vector<Role>{Role::processing});
    EXPECT_TRUE(rep.attribution[2].roles.empty());
}

TEST(Classify, WitnessesAreSound)
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto t = random_trace(seed);
        auto rep = classify(t);
        for (const auto* ws : {&rep.input, &rep.processing, &rep.output})
            for (const auto& w : *ws) ASSERT_TRUE(witness_is_sound(t, w)) << "seed " << seed << " step " << w.step;
        // no shared mover between input and output at the same step
        for (const auto& in : rep.input)
            for (const auto& out : rep.output)
                if (in.step == out.step) {
                    for (const auto& e : in.movers) ASSERT_FALSE(out.movers.contains(e));
                }
    }
}

TEST(Classify, WindowMonotonicity)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto t = random_trace(seed);
        const std::size_t n = t.steps();
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t e = b + 1; e <= n; ++e) {
                if (!classify(t, {b, e}).verdict()) continue;
                for (std::size_t bb = 0; bb <= b; ++bb)
                    for (std::size_t ee = e; ee <= n; ++ee) ASSERT_TRUE(classify(t, {bb, ee}).verdict());
            }
    }
}

TEST(Oracle, AgreesOnRandomTraces)
{
    for (std::uint64_t seed = 1000; seed < 1400; ++seed) {
        auto t = random_trace(seed);
        auto fast = classify(t);
        auto brute = brute_force_classify(t, full_window(t));
        auto cmp = compare_reports(fast, brute);
        ASSERT_TRUE(cmp.agrees()) << "seed " << seed;
        for (const auto* ws : {&brute.input, &brute.processing, &brute.output})
            for (const auto& w : *ws) ASSERT_TRUE(witness_is_sound(t, w));
    }
}

TEST(Oracle, SizeGuard)
{
    auto t = random_trace(3, 8, 6);
    std::vector<ElementSpec> many;
    std::map<ElementId, RegionId> m;
    for (int i = 0; i < 13; ++i) {
        many.push_back({ElementId("x" + std::to_string(i)), {}});
        m[many.back().id] = RegionId("r");
    }
    auto big = build_trace(make_snapshot(many, m, {{RegionId("r"), Side::system}}), {{}});
    EXPECT_THROW(brute_force_classify(big, full_window(big)), ModelError);

    auto long_trace = build_trace(axiom::testing::four_elements(), std::vector<StepEvents>(9));
    EXPECT_THROW(brute_force_classify(long_trace, full_window(long_trace)), ModelError);
    EXPECT_NO_THROW(brute_force_classify(long_trace, {0, 8}));
}

TEST(Activity, Values)
{
    auto quiet = build_trace(pipeline(), std::vector<StepEvents>(4));
    EXPECT_EQ(activity(quiet, full_window(quiet)).step_activity, 0.0);

    std::vector<StepEvents> busy;
    for (int i = 0; i < 2; ++i) {
        busy.push_back({move(TransferKind::external_in, {"tok"}, "world", "in")});
        busy.push_back({move(TransferKind::external_out, {"tok"}, "in", "world")});
    }
    auto saturated = build_trace(pipeline(), busy);
    EXPECT_EQ(activity(saturated, full_window(saturated)).step_activity, 1.0);

    std::vector<StepEvents> half;
    for (int i = 0; i < 5; ++i) {
        if (i % 2 == 0) half.push_back({move(TransferKind::external_in, {"tok", "tok2"}, "world", "in")});
        else half.push_back({move(TransferKind::external_out, {"tok", "tok2"}, "in", "world")});
        half.push_back({});
    }
    auto ht = build_trace(pipeline(), half);
    auto score = activity(ht, full_window(ht), ActivityMode::element);
    EXPECT_EQ(score.step_activity, 0.5);
    EXPECT_EQ(score.element_rate, 1.0);
    EXPECT_EQ(score.value(), 1.0);
    EXPECT_THROW(activity(ht, {3, 3}), ModelError);
}

TEST(Activity, ZeroActivityMeansNoBoundaryWitness)
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto t = random_trace(seed);
        for (std::size_t b = 0; b < t.steps(); ++b) {
            Window w{b, b + 1};
            if (activity(t, w).step_activity == 0.0) {
                auto rep = classify(t, w);
                ASSERT_FALSE(rep.has_input());
                ASSERT_FALSE(rep.has_output());
                ASSERT_FALSE(rep.verdict());
            }
        }
    }
}
