#include "axiom/evolution.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace axiom;
using axiom::testing::four_elements;
using axiom::testing::move;

namespace {

// in, outbox (system); env, sink (environment)
Snapshot inbox_outbox()
{
    return make_snapshot({{ElementId("a"), {}}, {ElementId("b"), {}}, {ElementId("c"), {}}, {ElementId("d"), {}}},
                         {{ElementId("a"), RegionId("outbox")},
                          {ElementId("b"), RegionId("env")},
                          {ElementId("c"), RegionId("env")},
                          {ElementId("d"), RegionId("in")}},
                         {{RegionId("in"), Side::system},
                          {RegionId("outbox"), Side::system},
                          {RegionId("env"), Side::environment},
                          {RegionId("sink"), Side::environment}});
}

} // namespace

TEST(ApplyStep, ExternalInGrowsExistence)
{
    auto s = four_elements();
    auto next = apply_step(s, {move(TransferKind::external_in, {"b"}, "env", "in")});
    EXPECT_EQ(next.step, 1u);
    EXPECT_EQ(cardinality(next, {RegionId("in")}), 2u);
    EXPECT_EQ(cardinality(next, {RegionId("env")}), 2u);
    EXPECT_EQ(next.size(), s.size());
}

TEST(ApplyStep, SimultaneousInAndOutRefinesBySubset)
{
    auto s = inbox_outbox();
    auto next = apply_step(s, {move(TransferKind::external_in, {"b"}, "env", "in"),
                               move(TransferKind::external_out, {"a"}, "outbox", "sink")});
    auto sys = s.regions(Side::system);
    EXPECT_EQ(cardinality(next, sys), cardinality(s, sys));
    EXPECT_EQ(cardinality(next, {RegionId("in")}), 2u);
    EXPECT_EQ(cardinality(next, {RegionId("outbox")}), 0u);
}

TEST(ApplyStep, BoundaryDoubleMove)
{
    // a enters and leaves in the same step
    auto s = make_snapshot({{ElementId("a"), {}}}, {{ElementId("a"), RegionId("env")}},
                           {{RegionId("in"), Side::system}, {RegionId("env"), Side::environment}});
    try {
        apply_step(s, {move(TransferKind::external_in, {"a"}, "env", "in"),
                       move(TransferKind::external_out, {"a"}, "in", "env")});
        FAIL();
    }
    catch (const ModelError& e) {
        EXPECT_NE(std::string(e.what()).find("boundary double-move"), std::string::npos);
    }
}

TEST(ApplyStep, Errors)
{
    auto s = four_elements();
    EXPECT_THROW(apply_step(s, {move(TransferKind::external_in, {"zz"}, "env", "in")}), ModelError);
    // side mismatch: internal move out of the environment
    EXPECT_THROW(apply_step(s, {move(TransferKind::internal, {"b"}, "env", "in")}), ModelError);
    EXPECT_THROW(apply_step(s, {move(TransferKind::external_out, {"b"}, "env", "in")}), ModelError);
    // element not in from_region
    EXPECT_THROW(apply_step(s, {move(TransferKind::external_out, {"b"}, "in", "env")}), ModelError);
    EXPECT_THROW(apply_step(s, {move(TransferKind::external_in, {"b"}, "env", "mars")}), ModelError);
    EXPECT_THROW(apply_step(s, {TransferEvent{TransferKind::internal, {}, RegionId("in"), RegionId("in"), {}, {}}}),
                 ModelError);
}

TEST(ApplyStep, StateUpdateWithoutMembershipChange)
{
    auto s = four_elements();
    TransferEvent ev = move(TransferKind::internal, {"a"}, "in", "in");
    ev.state_updates[ElementId("a")] = ElementState{{"w", 0.25}};
    auto next = apply_step(s, {ev});
    EXPECT_EQ(next.membership, s.membership);
    EXPECT_EQ(next.states.at(ElementId("a")).number("w"), 0.25);
}

TEST(BuildTrace, Lengths)
{
    EXPECT_EQ(build_trace(four_elements(), {}).snapshots.size(), 1u);
    auto t = build_trace(four_elements(), {{move(TransferKind::external_in, {"b"}, "env", "in")},
                                           {},
                                           {move(TransferKind::external_out, {"a"}, "in", "env")}});
    EXPECT_EQ(t.snapshots.size(), 4u);
    for (std::size_t i = 0; i < t.snapshots.size(); ++i) EXPECT_EQ(t.snapshots[i].step, i);
}

TEST(BuildTrace, ReportsFailingStep)
{
    try {
        build_trace(four_elements(), {{}, {move(TransferKind::external_in, {"b"}, "nowhere", "in")}});
        FAIL();
    }
    catch (const ModelError& e) {
        ASSERT_TRUE(e.step().has_value());
        EXPECT_EQ(*e.step(), 1u);
    }
    EXPECT_THROW(build_trace(four_elements(), {{move(TransferKind::external_in, {"b"}, "env", "in", "undeclared")}}),
                 ModelError);
    EXPECT_THROW(build_trace(four_elements(), {{}}, {Phase{"p", 0, 5, 0}}), ModelError);
}

TEST(VerifyConservation, GeneratedTracesAreClean)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) EXPECT_TRUE(verify_conservation(axiom::testing::random_trace(seed)).empty());
    EXPECT_TRUE(verify_conservation(build_trace(four_elements(), {})).empty());
}

TEST(VerifyConservation, DroppedElementIsReported)
{
    auto t = build_trace(four_elements(), {{}, {}, {}, {}});
    t.snapshots[3].membership.erase(ElementId("c"));
    t.snapshots[3].states.erase(ElementId("c"));
    t.snapshots[4] = t.snapshots[3];
    auto v = verify_conservation(t);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0], (ConservationViolation{2, 4, 3}));
}

TEST(Replay, RebuildReproducesSnapshots)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto t = axiom::testing::random_trace(seed);
        auto again = build_trace(t.initial(), t.events, t.phases, t.declarations, t.label);
        ASSERT_EQ(again, t);
    }
}

TEST(Replay, EventSidesAreCoherent)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto t = axiom::testing::random_trace(seed);
        for (std::size_t i = 0; i < t.steps(); ++i)
            for (const auto& ev : t.events[i]) EXPECT_NO_THROW(check_event_sides(t.snapshots[i], ev));
    }
}
