#pragma once

// Deterministic trace generators for the modelled systems: a bank of Hebbian
// networks, a backpropagation network, the Aplysia gill-withdrawal reflex, a
// wind-blown sand pile, and a powered-off machine.
//
// Every trial is a fixed cycle of steps whose events cite the structure that
// drives them. Learning is frozen during test phases in every scenario.

#include "axiom/categories.hpp"
#include "axiom/learning.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace axiom {

enum class ScenarioKind { hebbian, backprop, aplysia, sandpile, off };

inline const char* to_string(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::hebbian: return "hebbian";
    case ScenarioKind::backprop: return "backprop";
    case ScenarioKind::aplysia: return "aplysia";
    case ScenarioKind::sandpile: return "sandpile";
    case ScenarioKind::off: return "off";
    }
    return "off";
}

inline ScenarioKind scenario_from_string(const std::string& s)
{
    for (auto k : {ScenarioKind::hebbian, ScenarioKind::backprop, ScenarioKind::aplysia, ScenarioKind::sandpile,
                   ScenarioKind::off})
        if (s == to_string(k)) return k;
    throw ModelError("unknown scenario '" + s + "'");
}

struct ScenarioConfig {
    std::uint64_t seed = 0;
    std::size_t pattern_size = 4;
    std::size_t class_count = 3;
    std::size_t trials = 60;     // learning trials; total steps for sandpile and off
    std::size_t test_count = 30;
    double learning_rate = 0.1;
    double threshold = 0.5;
    double habituation_decrement = 0.05;

    // Task and circuit details not covered by the fields above.
    double noise = 0.1;
    std::size_t hidden_units = 8;
    double initial_strength = 1.0;
    double weak_stimulus = 1.0;
    double strong_stimulus = 3.0;
    double strong_probability = 0.2;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline ScenarioConfig default_config(ScenarioKind k)
{
    ScenarioConfig c;
    if (k == ScenarioKind::backprop) c.learning_rate = 0.3;
    if (k == ScenarioKind::sandpile || k == ScenarioKind::off) c.trials = 240;
    return c;
}

inline void validate(const ScenarioConfig& c)
{
    if (c.pattern_size == 0) throw ModelError("pattern_size must be positive");
    if (c.class_count < 2) throw ModelError("class_count must be at least 2");
    if (c.class_count > c.pattern_size * c.pattern_size) throw ModelError("class_count exceeds pixel count");
    if (!(c.learning_rate > 0.0)) throw ModelError("learning_rate must be positive");
    if (!(c.threshold > 0.0)) throw ModelError("threshold must be positive");
    if (!(c.habituation_decrement >= 0.0)) throw ModelError("habituation_decrement must be non-negative");
    if (!(c.noise >= 0.0 && c.noise < 0.5)) throw ModelError("noise must lie in [0, 0.5)");
    if (c.hidden_units == 0) throw ModelError("hidden_units must be positive");
    if (!(c.initial_strength >= 0.0)) throw ModelError("initial_strength must be non-negative");
    if (!(c.weak_stimulus > 0.0) || !(c.strong_stimulus > 0.0)) throw ModelError("stimuli must be positive");
    if (!(c.strong_probability >= 0.0 && c.strong_probability <= 1.0))
        throw ModelError("strong_probability must lie in [0, 1]");
}

struct TrialRecord {
    std::string phase;
    std::size_t index = 0;
    long label = -1;       // -1 when the scenario has no labels
    long prediction = -1;  // -1 when no meaningful response was produced
    bool correct = false;
    double response = 0.0; // reflex response magnitude (Aplysia)
    bool responded = false;
};

struct ScenarioBundle {
    ScenarioKind kind = ScenarioKind::off;
    ScenarioConfig config;
    Trace trace;
    std::vector<TrialRecord> trials;
    std::map<std::string, std::vector<Role>> expected_cycles;

    [[nodiscard]] double test_accuracy() const
    {
        std::size_t n = 0, ok = 0;
        for (const auto& t : trials) {
            if (t.phase != "test") continue;
            ++n;
            ok += t.correct ? 1 : 0;
        }
        return n ? static_cast<double>(ok) / static_cast<double>(n) : 0.0;
    }
};

namespace scenario_detail {

inline std::string indexed(const char* prefix, std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s-%04zu", prefix, i);
    return buf;
}

inline std::string attr(const char* prefix, std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%03zu", prefix, i);
    return buf;
}

inline std::string attr(const char* prefix, std::size_t i, std::size_t j)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s%03zu_%03zu", prefix, i, j);
    return buf;
}

/// Accumulates elements, regions, declarations, and per-step events.
class Builder {
public:
    void region(const std::string& id, Side side) { sides_[RegionId(id)] = side; }

    ElementId element(const std::string& id, const std::string& region, ElementState st = {})
    {
        ElementId e(id);
        elements_.push_back({e, std::move(st)});
        membership_[e] = RegionId(region);
        return e;
    }

    void declare(StructureRelation r) { decls_.push_back(std::move(r)); }

    /// Appends a step and returns its index.
    std::size_t step()
    {
        schedule_.emplace_back();
        return schedule_.size() - 1;
    }

    void event(TransferKind kind, ElementSet moved, const std::string& from, const std::string& to,
               const std::string& via, std::map<ElementId, ElementState> updates = {})
    {
        schedule_.back().push_back(
            TransferEvent{kind, std::move(moved), RegionId(from), RegionId(to), via, std::move(updates)});
    }

    void phase(const std::string& label, std::size_t begin, std::size_t cycle)
    {
        phases_.push_back({label, begin, schedule_.size(), cycle});
    }

    [[nodiscard]] std::size_t steps() const { return schedule_.size(); }

    Trace build(const std::string& label)
    {
        return build_trace(make_snapshot(elements_, membership_, sides_), std::move(schedule_), std::move(phases_),
                           std::move(decls_), label);
    }

private:
    std::vector<ElementSpec> elements_;
    std::map<ElementId, RegionId> membership_;
    std::map<RegionId, Side> sides_;
    std::vector<StructureRelation> decls_;
    std::vector<StepEvents> schedule_;
    std::vector<Phase> phases_;
};

inline ElementState pattern_state(const learning::Pattern& p, const char* phase)
{
    ElementState::Attributes a;
    a["label"] = static_cast<double>(p.label);
    a["phase"] = std::string(phase);
    for (std::size_t i = 0; i < p.x.size(); ++i) a[attr("x", i)] = p.x[i];
    return a;
}

inline std::set<Tuple> paired(const ElementId& port, const std::vector<ElementId>& tokens)
{
    std::set<Tuple> out;
    for (const auto& t : tokens) out.insert({port, t});
    return out;
}

/// Layout shared by both network scenarios: data tokens wait in the world,
/// response tokens wait in a pool inside the system and leave to the sink.
struct NetworkLayout {
    ElementId input_port, hidden_port, output_port;
    std::vector<ElementId> data, responses;
};

inline NetworkLayout network_layout(Builder& b, const learning::Dataset& d)
{
    b.region("world", Side::environment);
    b.region("sink", Side::environment);
    b.region("input", Side::system);
    b.region("hidden", Side::system);
    b.region("output", Side::system);
    b.region("response-pool", Side::system);
    b.region("weights", Side::system);

    NetworkLayout l;
    l.input_port = b.element("port-input", "input");
    l.hidden_port = b.element("port-hidden", "hidden");
    l.output_port = b.element("port-output", "output");
    std::size_t i = 0;
    for (const auto& p : d.train) {
        l.data.push_back(b.element(indexed("data", i), "world", pattern_state(p, "learning")));
        l.responses.push_back(b.element(indexed("resp", i), "response-pool", ElementState{{"role", std::string("response")}}));
        ++i;
    }
    for (const auto& p : d.test) {
        l.data.push_back(b.element(indexed("data", i), "world", pattern_state(p, "test")));
        l.responses.push_back(b.element(indexed("resp", i), "response-pool", ElementState{{"role", std::string("response")}}));
        ++i;
    }
    return l;
}

inline ElementState response_state(const char* phase, bool meaningful, long label, long prediction)
{
    ElementState::Attributes a{{"role", std::string("response")},
                               {"phase", std::string(phase)},
                               {"meaningful", std::string(meaningful ? "true" : "false")}};
    if (meaningful) {
        a["label"] = static_cast<double>(label);
        a["prediction"] = static_cast<double>(prediction);
        a["correct"] = std::string(label == prediction ? "true" : "false");
    }
    return a;
}

} // namespace scenario_detail

/// Parallel Hebbian networks, one per class. Learning and test trials are both
/// [input, processing, output]; the learning-phase response carries no meaning.
inline ScenarioBundle hebbian_scenario(const ScenarioConfig& cfg)
{
    using namespace scenario_detail;
    validate(cfg);
    learning::Rng rng(cfg.seed);
    const auto data = learning::make_dataset(rng, cfg.pattern_size, cfg.class_count, cfg.trials, cfg.test_count, cfg.noise);
    const std::size_t dims = cfg.pattern_size * cfg.pattern_size;

    Builder b;
    auto l = network_layout(b, data);
    std::vector<ElementId> nets;
    for (std::size_t k = 0; k < cfg.class_count; ++k) {
        ElementState::Attributes a{{"class", static_cast<double>(k)}};
        for (std::size_t i = 0; i < dims; ++i) a[attr("w", i)] = 0.0;
        nets.push_back(b.element(indexed("net", k), "weights", a));
    }
    b.declare(make_relation("input-layer", Role::input, {"port", "signal"}, paired(l.input_port, l.data), {RegionId("input")}));
    b.declare(make_relation("hidden-layer", Role::processing, {"port", "signal"}, paired(l.hidden_port, l.data),
                            {RegionId("hidden")}));
    b.declare(make_relation("output-layer", Role::output, {"port", "signal"}, paired(l.output_port, l.responses),
                            {RegionId("output")}));
    {
        std::set<Tuple> nt;
        for (const auto& n : nets) nt.insert({n});
        b.declare(make_relation("parallel-networks", Role::other, {"network"}, nt, {RegionId("weights")}));
    }

    ScenarioBundle out;
    out.kind = ScenarioKind::hebbian;
    out.config = cfg;
    out.expected_cycles = {{"learning", {Role::input, Role::processing, Role::output}},
                           {"test", {Role::input, Role::processing, Role::output}}};

    learning::HebbianBank bank(cfg.class_count, dims, cfg.learning_rate);
    auto run_trial = [&](std::size_t i, const learning::Pattern& p, bool learn) {
        const char* phase = learn ? "learning" : "test";
        b.step();
        b.event(TransferKind::external_in, {l.data[i]}, "world", "input", "input-layer");

        b.step();
        b.event(TransferKind::internal, {l.data[i]}, "input", "hidden", "hidden-layer");
        TrialRecord rec{phase, i, static_cast<long>(p.label)};
        if (learn) {
            bank.learn(p.x, p.label);
            ElementState::Attributes a{{"class", static_cast<double>(p.label)}};
            for (std::size_t j = 0; j < dims; ++j) a[attr("w", j)] = bank.weights()[p.label][j];
            b.event(TransferKind::internal, {nets[p.label]}, "weights", "weights", "hidden-layer", {{nets[p.label], a}});
            b.event(TransferKind::internal, {l.responses[i]}, "response-pool", "output", "hidden-layer",
                    {{l.responses[i], response_state(phase, false, rec.label, -1)}});
        }
        else {
            rec.prediction = static_cast<long>(bank.predict(p.x));
            rec.correct = rec.prediction == rec.label;
            rec.responded = true;
            b.event(TransferKind::internal, {l.responses[i]}, "response-pool", "output", "hidden-layer",
                    {{l.responses[i], response_state(phase, true, rec.label, rec.prediction)}});
        }

        b.step();
        b.event(TransferKind::external_out, {l.responses[i]}, "output", "sink", "output-layer");
        out.trials.push_back(rec);
    };

    std::size_t i = 0;
    for (const auto& p : data.train) run_trial(i++, p, true);
    b.phase("learning", 0, 3);
    const std::size_t test_begin = b.steps();
    for (const auto& p : data.test) run_trial(i++, p, false);
    b.phase("test", test_begin, 3);

    out.trace = b.build("hebbian");
    return out;
}

/// One tanh/softmax network trained by backpropagation. A learning trial is
/// [input, processing, output -> loss, loss -> output, weight update]; the loss
/// apparatus sits inside the system, so only test trials emit to the sink.
inline ScenarioBundle backprop_scenario(const ScenarioConfig& cfg)
{
    using namespace scenario_detail;
    validate(cfg);
    learning::Rng rng(cfg.seed);
    const auto data = learning::make_dataset(rng, cfg.pattern_size, cfg.class_count, cfg.trials, cfg.test_count, cfg.noise);
    const std::size_t dims = cfg.pattern_size * cfg.pattern_size;
    learning::Mlp net(rng, dims, cfg.hidden_units, cfg.class_count);

    Builder b;
    auto l = network_layout(b, data);
    b.region("loss", Side::system);
    ElementId loss_port = b.element("port-loss", "loss");

    auto hidden_state = [&] {
        ElementState::Attributes a;
        for (std::size_t h = 0; h < cfg.hidden_units; ++h) {
            for (std::size_t i = 0; i < dims; ++i) a[attr("w", h, i)] = net.hidden_weights()[h][i];
            a[attr("b", h)] = net.hidden_bias()[h];
        }
        return ElementState(a);
    };
    auto output_state = [&] {
        ElementState::Attributes a;
        for (std::size_t c = 0; c < cfg.class_count; ++c) {
            for (std::size_t h = 0; h < cfg.hidden_units; ++h) a[attr("w", c, h)] = net.output_weights()[c][h];
            a[attr("b", c)] = net.output_bias()[c];
        }
        return ElementState(a);
    };
    ElementId layer_hidden = b.element("layer-hidden", "weights", hidden_state());
    ElementId layer_output = b.element("layer-output", "weights", output_state());

    {
        auto in = paired(l.input_port, l.data);
        auto back = paired(loss_port, l.responses);
        in.insert(back.begin(), back.end());
        b.declare(make_relation("input-structure", Role::input, {"port", "signal"}, in,
                                {RegionId("input"), RegionId("loss")}));
    }
    b.declare(make_relation("hidden-layers", Role::processing, {"port", "signal"}, paired(l.hidden_port, l.data),
                            {RegionId("hidden")}));
    b.declare(make_relation("output-layer", Role::output, {"port", "signal"}, paired(l.output_port, l.responses),
                            {RegionId("output")}));
    b.declare(make_relation("parameters", Role::other, {"layer"}, {{layer_hidden}, {layer_output}}, {RegionId("weights")}));

    ScenarioBundle out;
    out.kind = ScenarioKind::backprop;
    out.config = cfg;
    out.expected_cycles = {{"learning", {Role::input, Role::processing, Role::output, Role::input, Role::processing}},
                           {"test", {Role::input, Role::processing, Role::output}}};

    auto forward_state = [&](const learning::Mlp::Forward& f, const char* phase, long label) {
        auto pred = static_cast<long>(std::max_element(f.probs.begin(), f.probs.end()) - f.probs.begin());
        ElementState::Attributes a = response_state(phase, true, label, pred).attrs();
        for (std::size_t c = 0; c < f.probs.size(); ++c) a[attr("p", c)] = f.probs[c];
        return std::pair{ElementState(a), pred};
    };

    std::size_t i = 0;
    for (const auto& p : data.train) {
        const auto label = static_cast<long>(p.label);
        b.step();
        b.event(TransferKind::external_in, {l.data[i]}, "world", "input", "input-structure");

        const auto f = net.forward(p.x);
        auto [st, pred] = forward_state(f, "learning", label);
        b.step();
        b.event(TransferKind::internal, {l.data[i]}, "input", "hidden", "hidden-layers");
        b.event(TransferKind::internal, {l.responses[i]}, "response-pool", "output", "hidden-layers", {{l.responses[i], st}});

        b.step();
        b.event(TransferKind::internal, {l.responses[i]}, "output", "loss", "output-layer");

        const double loss = net.train(p.x, p.label, cfg.learning_rate);
        b.step();
        b.event(TransferKind::internal, {l.responses[i]}, "loss", "output", "input-structure",
                {{l.responses[i], st.with("loss", loss)}});

        b.step();
        b.event(TransferKind::internal, {layer_hidden, layer_output}, "weights", "weights", "hidden-layers",
                {{layer_hidden, hidden_state()}, {layer_output, output_state()}});

        out.trials.push_back({"learning", i, label, pred, pred == label});
        ++i;
    }
    b.phase("learning", 0, 5);

    const std::size_t test_begin = b.steps();
    for (const auto& p : data.test) {
        const auto label = static_cast<long>(p.label);
        b.step();
        b.event(TransferKind::external_in, {l.data[i]}, "world", "input", "input-structure");

        auto [st, pred] = forward_state(net.forward(p.x), "test", label);
        b.step();
        b.event(TransferKind::internal, {l.data[i]}, "input", "hidden", "hidden-layers");
        b.event(TransferKind::internal, {l.responses[i]}, "response-pool", "output", "hidden-layers", {{l.responses[i], st}});

        b.step();
        b.event(TransferKind::external_out, {l.responses[i]}, "output", "sink", "output-layer");

        TrialRecord rec{"test", i, label, pred, pred == label};
        rec.responded = true;
        out.trials.push_back(rec);
        ++i;
    }
    b.phase("test", test_begin, 3);

    out.trace = b.build("backprop");
    return out;
}

/// Sensory receptor -> interneuron -> motor neuron -> gill. The gill responds
/// when strength * magnitude >= threshold. During learning, a strong stimulus
/// reinforces the synapse (g += eta * m when the reflex fired); any other
/// stimulus habituates it (g -= delta, floored at 0). The decision always uses
/// the strength from before the trial's update.
inline ScenarioBundle aplysia_scenario(const ScenarioConfig& cfg)
{
    using namespace scenario_detail;
    validate(cfg);
    learning::Rng rng(cfg.seed);

    Builder b;
    b.region("water", Side::environment);
    b.region("surroundings", Side::environment);
    b.region("sensory", Side::system);
    b.region("interneuron", Side::system);
    b.region("motor", Side::system);
    b.region("synapse", Side::system);
    b.region("gill-pool", Side::system);

    ElementId receptor = b.element("receptor", "sensory");
    ElementId interneuron = b.element("interneuron-cell", "interneuron");
    ElementId motor = b.element("motor-neuron", "motor", ElementState{{"activity", std::string("rest")}});
    double g = cfg.initial_strength;
    ElementId synapse = b.element("synapse", "synapse", ElementState{{"strength", g}});

    const std::size_t total = cfg.trials + cfg.test_count;
    std::vector<ElementId> stimuli, gills;
    std::vector<double> magnitude;
    for (std::size_t i = 0; i < total; ++i) {
        const bool strong = rng.bernoulli(cfg.strong_probability);
        magnitude.push_back(strong ? cfg.strong_stimulus : cfg.weak_stimulus);
        stimuli.push_back(b.element(indexed("stim", i), "water",
                                    ElementState{{"magnitude", magnitude.back()},
                                                 {"phase", std::string(i < cfg.trials ? "learning" : "test")}}));
        gills.push_back(b.element(indexed("gill", i), "gill-pool", ElementState{{"role", std::string("response")}}));
    }
    b.declare(make_relation("sensory-receptors", Role::input, {"cell", "signal"}, paired(receptor, stimuli),
                            {RegionId("sensory")}));
    b.declare(make_relation("neural-propagation", Role::processing, {"cell", "signal"}, paired(interneuron, stimuli),
                            {RegionId("interneuron")}));
    b.declare(make_relation("gill-response", Role::output, {"cell", "signal"}, paired(motor, gills), {RegionId("motor")}));
    b.declare(make_relation("synaptic-strength", Role::other, {"synapse"}, {{synapse}}, {RegionId("synapse")}));

    ScenarioBundle out;
    out.kind = ScenarioKind::aplysia;
    out.config = cfg;
    out.expected_cycles = {{"learning", {Role::input, Role::processing, Role::output}},
                           {"test", {Role::input, Role::processing, Role::output}}};

    auto run_trial = [&](std::size_t i, bool learn) {
        const char* phase = learn ? "learning" : "test";
        const double m = magnitude[i];
        const double drive = g * m;
        const bool fire = drive >= cfg.threshold;

        b.step();
        b.event(TransferKind::external_in, {stimuli[i]}, "water", "sensory", "sensory-receptors");

        b.step();
        b.event(TransferKind::internal, {stimuli[i]}, "sensory", "interneuron", "neural-propagation");
        if (learn) {
            if (m >= cfg.strong_stimulus) g += fire ? cfg.learning_rate * m : 0.0;
            else g = std::max(0.0, g - cfg.habituation_decrement);
            b.event(TransferKind::internal, {synapse}, "synapse", "synapse", "neural-propagation",
                    {{synapse, ElementState{{"strength", g}}}});
        }
        if (fire)
            b.event(TransferKind::internal, {gills[i]}, "gill-pool", "motor", "neural-propagation",
                    {{gills[i], ElementState{{"role", std::string("response")}, {"magnitude", drive}, {"phase", std::string(phase)}}}});

        b.step();
        if (fire) b.event(TransferKind::external_out, {gills[i]}, "motor", "surroundings", "gill-response");
        else
            b.event(TransferKind::internal, {motor}, "motor", "motor", "gill-response",
                    {{motor, ElementState{{"activity", std::string("withheld")}}}});

        TrialRecord rec{phase, i};
        rec.response = fire ? drive : 0.0;
        rec.responded = fire;
        out.trials.push_back(rec);
    };

    for (std::size_t i = 0; i < cfg.trials; ++i) run_trial(i, true);
    b.phase("learning", 0, 3);
    const std::size_t test_begin = b.steps();
    for (std::size_t i = cfg.trials; i < total; ++i) run_trial(i, false);
    b.phase("test", test_begin, 3);

    out.trace = b.build("aplysia");
    return out;
}

/// Wind carries grains onto the crest, grains slide from crest to base, and
/// grains leave the base onto the ground. Runs `cfg.trials` steps; the first
/// three steps are one blow, one slide, and one shed, then events are random.
inline ScenarioBundle sandpile_scenario(const ScenarioConfig& cfg)
{
    using namespace scenario_detail;
    validate(cfg);
    if (cfg.trials == 0) throw ModelError("sandpile needs at least one step");
    learning::Rng rng(cfg.seed);

    Builder b;
    b.region("air", Side::environment);
    b.region("ground", Side::environment);
    b.region("crest", Side::system);
    b.region("base", Side::system);

    const std::size_t n = cfg.trials;
    std::vector<ElementId> air, crest, base, everything;
    for (std::size_t i = 0; i < n; ++i) air.push_back(b.element(indexed("wind", i), "air", ElementState{{"kind", std::string("wind")}}));
    for (std::size_t i = 0; i < n + 2; ++i) {
        auto& where = i % 2 ? base : crest;
        where.push_back(b.element(indexed("grain", i), i % 2 ? "base" : "crest", ElementState{{"kind", std::string("grain")}}));
    }
    everything = air;
    everything.insert(everything.end(), crest.begin(), crest.end());
    everything.insert(everything.end(), base.begin(), base.end());
    std::set<Tuple> unary;
    for (const auto& e : everything) unary.insert({e});
    b.declare(make_relation("windward-face", Role::input, {"grain"}, unary, {RegionId("crest")}));
    b.declare(make_relation("pile-body", Role::processing, {"grain"}, unary, {RegionId("crest"), RegionId("base")}));
    b.declare(make_relation("slip-face", Role::output, {"grain"}, unary, {RegionId("base")}));

    auto take = [&](std::vector<ElementId>& from) {
        std::size_t k = rng.below(from.size());
        ElementId e = from[k];
        from.erase(from.begin() + static_cast<long>(k));
        return e;
    };

    for (std::size_t i = 0; i < n; ++i) {
        b.step();
        const bool warmup = i < 3;
        const bool blow = (warmup ? i == 0 : rng.bernoulli(0.6)) && !air.empty();
        const bool slide = (warmup ? i == 1 : rng.bernoulli(0.7)) && !crest.empty();
        const bool shed = (warmup ? i == 2 : rng.bernoulli(0.4)) && !base.empty();
        std::optional<ElementId> blown, slid, shed_grain;
        if (blow) {
            blown = take(air);
            b.event(TransferKind::external_in, {*blown}, "air", "crest", "windward-face");
        }
        if (slide) {
            slid = take(crest);
            b.event(TransferKind::internal, {*slid}, "crest", "base", "pile-body");
        }
        if (shed) {
            shed_grain = take(base);
            b.event(TransferKind::external_out, {*shed_grain}, "base", "ground", "slip-face");
        }
        if (blown) crest.push_back(*blown);
        if (slid) base.push_back(*slid);
    }
    b.phase("evolution", 0, 0);

    ScenarioBundle out;
    out.kind = ScenarioKind::sandpile;
    out.config = cfg;
    out.trace = b.build("sandpile");
    return out;
}

/// The Hebbian machine with every structure declared but no events at all.
inline ScenarioBundle powered_off_scenario(std::size_t steps, const ScenarioConfig& cfg = default_config(ScenarioKind::off))
{
    using namespace scenario_detail;
    if (steps == 0) throw ModelError("powered-off scenario needs at least one step");
    validate(cfg);
    learning::Rng rng(cfg.seed);
    const auto data = learning::make_dataset(rng, cfg.pattern_size, cfg.class_count, 1, 1, cfg.noise);

    Builder b;
    auto l = network_layout(b, data);
    b.declare(make_relation("input-layer", Role::input, {"port", "signal"}, paired(l.input_port, l.data), {RegionId("input")}));
    b.declare(make_relation("hidden-layer", Role::processing, {"port", "signal"}, paired(l.hidden_port, l.data),
                            {RegionId("hidden")}));
    b.declare(make_relation("output-layer", Role::output, {"port", "signal"}, paired(l.output_port, l.responses),
                            {RegionId("output")}));
    for (std::size_t i = 0; i < steps; ++i) b.step();
    b.phase("idle", 0, 0);

    ScenarioBundle out;
    out.kind = ScenarioKind::off;
    out.config = cfg;
    out.config.trials = steps;
    out.trace = b.build("off");
    return out;
}

inline ScenarioBundle generate(ScenarioKind kind, const ScenarioConfig& cfg)
{
    switch (kind) {
    case ScenarioKind::hebbian: return hebbian_scenario(cfg);
    case ScenarioKind::backprop: return backprop_scenario(cfg);
    case ScenarioKind::aplysia: return aplysia_scenario(cfg);
    case ScenarioKind::sandpile: return sandpile_scenario(cfg);
    case ScenarioKind::off: return powered_off_scenario(cfg.trials, cfg);
    }
    throw ModelError("unknown scenario");
}

/// Attribution roles per cycle position over a phase. Throws if a step cites
/// anything other than exactly one role.
inline std::vector<std::vector<Role>> phase_cycles(const Trace& t, const Phase& p)
{
    if (p.cycle == 0) throw ModelError("phase '" + p.label + "' is not cyclic");
    std::vector<std::vector<Role>> out;
    for (std::size_t s = p.begin; s < p.end; s += p.cycle) {
        std::vector<Role> cyc;
        for (std::size_t i = s; i < std::min(s + p.cycle, p.end); ++i) {
            auto roles = step_roles(t, i);
            if (roles.size() != 1) throw ModelError("step does not cite exactly one structure", i);
            cyc.push_back(roles.front());
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

inline std::string render_roles(const std::vector<Role>& roles)
{
    std::string out = "[";
    for (std::size_t i = 0; i < roles.size(); ++i) out += std::string(i ? "," : "") + symbol(roles[i]);
    return out + "]";
}

/// Structure-preserving map from an Aplysia trace to a Hebbian trace with the
/// same trial layout: receptor -> input layer, interneuron -> hidden layer,
/// motor neuron -> output layer, trial i -> trial i, t_k -> t_k.
inline MimicryMap aplysia_to_hebbian_map(const Trace& aplysia, const Trace& hebbian)
{
    if (aplysia.label != "aplysia" || hebbian.label != "hebbian")
        throw ModelError("expected an aplysia source and a hebbian target");
    if (aplysia.steps() > hebbian.steps()) throw ModelError("target trace is shorter than the source trace");

    auto src = role_declarations(aplysia);
    auto dst = role_declarations(hebbian);
    MimicryMap m;
    m.source = aplysia.label;
    m.target = hebbian.label;
    for (std::size_t i = 0; i <= aplysia.steps(); ++i) m.objects.emplace_back(i, i);
    for (auto r : kStructureRoles) {
        const auto& s = *src[role_index(r)];
        const auto& d = *dst[role_index(r)];
        std::vector<Tuple> ds(d.tuples.begin(), d.tuples.end());
        std::size_t k = 0;
        auto& comp = m.components[r];
        for (const auto& t : s.tuples) {
            if (k >= ds.size()) throw ModelError("target has fewer trials than the source");
            comp.emplace(t, ds[k++]);
        }
    }
    return m;
}

} // namespace axiom
