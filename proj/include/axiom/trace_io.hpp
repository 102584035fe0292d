#pragma once

// Line-oriented trace files, flat key=value scenario configs, and mimicry map
// files.
//
// Trace file, version 1: line 1 is a JSON header (label, step count, regions,
// elements with their initial region and state, declarations, phases); each
// following line is one step: {"events":[...],"step":i}. Object keys are
// sorted and rosters are sorted by id, so equal traces serialize to equal bytes.

#include "axiom/categories.hpp"
#include "axiom/scenarios.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

namespace axiom {

inline constexpr int kTraceFormatVersion = 1;
inline constexpr int kMimicryFormatVersion = 1;

class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }

    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace io_detail {

using nlohmann::json;

inline json to_json(const ElementState& s)
{
    json j = json::object();
    for (const auto& [k, v] : s.attrs()) {
        if (const auto* d = std::get_if<double>(&v)) j[k] = *d;
        else j[k] = std::get<std::string>(v);
    }
    return j;
}

inline ElementState state_from_json(const json& j)
{
    if (!j.is_object()) throw std::invalid_argument("state must be an object");
    ElementState::Attributes a;
    for (const auto& [k, v] : j.items()) {
        if (v.is_number()) a[k] = v.get<double>();
        else if (v.is_string()) a[k] = v.get<std::string>();
        else throw std::invalid_argument("state attribute '" + k + "' must be a number or a string");
    }
    return ElementState(std::move(a));
}

inline json to_json(const Tuple& t)
{
    json j = json::array();
    for (const auto& e : t) j.push_back(e.value);
    return j;
}

inline Tuple tuple_from_json(const json& j)
{
    Tuple t;
    for (const auto& e : j) t.emplace_back(e.get<std::string>());
    return t;
}

inline json to_json(const StructureRelation& r)
{
    json tuples = json::array();
    for (const auto& t : r.tuples) tuples.push_back(to_json(t));
    json scope = json::array();
    for (const auto& s : r.scope) scope.push_back(s.value);
    return {{"id", r.id}, {"role", to_string(r.role)}, {"factors", r.factors}, {"scope", scope}, {"tuples", tuples}};
}

inline StructureRelation relation_from_json(const json& j)
{
    std::set<Tuple> tuples;
    for (const auto& t : j.at("tuples")) tuples.insert(tuple_from_json(t));
    RegionSet scope;
    for (const auto& s : j.at("scope")) scope.emplace(s.get<std::string>());
    return make_relation(j.at("id").get<std::string>(), role_from_string(j.at("role").get<std::string>()),
                         j.at("factors").get<std::vector<std::string>>(), std::move(tuples), std::move(scope));
}

inline json to_json(const TransferEvent& ev)
{
    json moved = json::array();
    for (const auto& e : ev.moved) moved.push_back(e.value);
    json updates = json::object();
    for (const auto& [e, st] : ev.state_updates) updates[e.value] = to_json(st);
    return {{"kind", to_string(ev.kind)},
            {"moved", moved},
            {"from", ev.from.value},
            {"to", ev.to.value},
            {"via", ev.via ? json(*ev.via) : json(nullptr)},
            {"updates", updates}};
}

inline TransferEvent event_from_json(const json& j)
{
    TransferEvent ev;
    ev.kind = transfer_kind_from_string(j.at("kind").get<std::string>());
    for (const auto& e : j.at("moved")) ev.moved.emplace(e.get<std::string>());
    ev.from = RegionId(j.at("from").get<std::string>());
    ev.to = RegionId(j.at("to").get<std::string>());
    if (!j.at("via").is_null()) ev.via = j.at("via").get<std::string>();
    for (const auto& [k, v] : j.at("updates").items()) ev.state_updates.emplace(ElementId(k), state_from_json(v));
    return ev;
}

inline json header(const Trace& t)
{
    const auto& s0 = t.initial();
    json regions = json::array();
    for (const auto& [r, side] : s0.region_side) regions.push_back({{"id", r.value}, {"side", to_string(side)}});
    json elements = json::array();
    for (const auto& [e, r] : s0.membership)
        elements.push_back({{"id", e.value}, {"region", r.value}, {"state", to_json(s0.states.at(e))}});
    json decls = json::array();
    for (const auto& d : t.declarations) decls.push_back(to_json(d));
    json phases = json::array();
    for (const auto& p : t.phases)
        phases.push_back({{"label", p.label}, {"begin", p.begin}, {"end", p.end}, {"cycle", p.cycle}});
    return {{"format", "axiom-trace"}, {"version", kTraceFormatVersion}, {"label", t.label},
            {"steps", t.steps()},      {"regions", regions},             {"elements", elements},
            {"declarations", decls},   {"phases", phases}};
}

} // namespace io_detail

inline void write_trace(const Trace& t, std::ostream& os)
{
    using io_detail::json;
    os << io_detail::header(t).dump() << '\n';
    for (std::size_t i = 0; i < t.steps(); ++i) {
        json evs = json::array();
        for (const auto& ev : t.events[i]) evs.push_back(io_detail::to_json(ev));
        os << json{{"step", i}, {"events", evs}}.dump() << '\n';
    }
}

inline std::string serialize_trace(const Trace& t)
{
    std::ostringstream os;
    write_trace(t, os);
    return os.str();
}

inline void write_trace(const Trace& t, const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    write_trace(t, os);
    if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

/// Parses and replays a trace. Malformed lines raise FormatError; a schedule
/// that breaks a trace invariant raises ModelError naming the step.
inline Trace read_trace(std::istream& is)
{
    using io_detail::json;
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(is, line)) throw FormatError("missing header", lineno);

    json h;
    try {
        h = json::parse(line);
    }
    catch (const json::exception& e) {
        throw FormatError(std::string("malformed header: ") + e.what(), lineno);
    }

    Snapshot initial;
    std::vector<StructureRelation> decls;
    std::vector<Phase> phases;
    std::string label;
    std::size_t steps = 0;
    try {
        if (h.value("format", "") != "axiom-trace") throw FormatError("not a trace file", lineno);
        const int version = h.at("version").get<int>();
        if (version != kTraceFormatVersion)
            throw FormatError("unsupported trace format version " + std::to_string(version), lineno);
        label = h.at("label").get<std::string>();
        steps = h.at("steps").get<std::size_t>();

        std::map<RegionId, Side> sides;
        for (const auto& r : h.at("regions")) sides.emplace(r.at("id").get<std::string>(), side_from_string(r.at("side").get<std::string>()));
        std::vector<ElementSpec> elements;
        std::map<ElementId, RegionId> membership;
        for (const auto& e : h.at("elements")) {
            ElementId id(e.at("id").get<std::string>());
            elements.push_back({id, io_detail::state_from_json(e.at("state"))});
            membership.emplace(id, e.at("region").get<std::string>());
        }
        initial = make_snapshot(elements, membership, sides);
        for (const auto& d : h.at("declarations")) decls.push_back(io_detail::relation_from_json(d));
        for (const auto& p : h.at("phases"))
            phases.push_back({p.at("label").get<std::string>(), p.at("begin").get<std::size_t>(),
                              p.at("end").get<std::size_t>(), p.at("cycle").get<std::size_t>()});
    }
    catch (const FormatError&) {
        throw;
    }
    catch (const std::exception& e) {
        throw FormatError(std::string("malformed header: ") + e.what(), lineno);
    }

    std::vector<StepEvents> schedule;
    for (std::size_t i = 0; i < steps; ++i) {
        ++lineno;
        if (!std::getline(is, line)) throw FormatError("missing step line for step " + std::to_string(i), lineno);
        try {
            json j = json::parse(line);
            if (j.at("step").get<std::size_t>() != i) throw FormatError("step lines out of order", lineno);
            StepEvents evs;
            for (const auto& ev : j.at("events")) evs.push_back(io_detail::event_from_json(ev));
            schedule.push_back(std::move(evs));
        }
        catch (const FormatError&) {
            throw;
        }
        catch (const std::exception& e) {
            throw FormatError(std::string("malformed step line: ") + e.what(), lineno);
        }
    }
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty()) throw FormatError("trailing content after the last step", lineno);
    }
    return build_trace(std::move(initial), std::move(schedule), std::move(phases), std::move(decls), std::move(label));
}

inline Trace read_trace(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
    return read_trace(is);
}

inline Trace parse_trace(const std::string& text)
{
    std::istringstream is(text);
    return read_trace(is);
}

// ---------------------------------------------------------------------------
// Scenario configs: one `key = value` per line, '#' starts a comment.

inline ScenarioConfig parse_config(std::istream& is, ScenarioConfig cfg = {})
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("expected key = value", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            std::size_t used = 0;
            auto as_size = [&] {
                if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
                auto v = std::stoull(value, &used);
                return static_cast<std::size_t>(v);
            };
            auto as_double = [&] { return std::stod(value, &used); };
            if (key == "seed") cfg.seed = as_size();
            else if (key == "pattern_size") cfg.pattern_size = as_size();
            else if (key == "class_count") cfg.class_count = as_size();
            else if (key == "trials") cfg.trials = as_size();
            else if (key == "test_count") cfg.test_count = as_size();
            else if (key == "learning_rate") cfg.learning_rate = as_double();
            else if (key == "threshold") cfg.threshold = as_double();
            else if (key == "habituation_decrement") cfg.habituation_decrement = as_double();
            else if (key == "noise") cfg.noise = as_double();
            else if (key == "hidden_units") cfg.hidden_units = as_size();
            else if (key == "initial_strength") cfg.initial_strength = as_double();
            else if (key == "weak_stimulus") cfg.weak_stimulus = as_double();
            else if (key == "strong_stimulus") cfg.strong_stimulus = as_double();
            else if (key == "strong_probability") cfg.strong_probability = as_double();
            else throw FormatError("unknown config key '" + key + "'", lineno);
            if (used != value.size()) throw std::invalid_argument("trailing characters");
        }
        catch (const FormatError&) {
            throw;
        }
        catch (const std::exception&) {
            throw FormatError("bad value for '" + key + "': '" + value + "'", lineno);
        }
    }
    return cfg;
}

inline std::string format_config(const ScenarioConfig& c)
{
    std::ostringstream os;
    os.precision(17);
    os << "seed = " << c.seed << "\npattern_size = " << c.pattern_size << "\nclass_count = " << c.class_count
       << "\ntrials = " << c.trials << "\ntest_count = " << c.test_count << "\nlearning_rate = " << c.learning_rate
       << "\nthreshold = " << c.threshold << "\nhabituation_decrement = " << c.habituation_decrement
       << "\nnoise = " << c.noise << "\nhidden_units = " << c.hidden_units
       << "\ninitial_strength = " << c.initial_strength << "\nweak_stimulus = " << c.weak_stimulus
       << "\nstrong_stimulus = " << c.strong_stimulus << "\nstrong_probability = " << c.strong_probability << '\n';
    return os.str();
}

/// Trace plus generator metadata, for whole-bundle determinism checks.
inline std::string serialize_bundle(const ScenarioBundle& b)
{
    using io_detail::json;
    json trials = json::array();
    for (const auto& t : b.trials)
        trials.push_back({{"phase", t.phase}, {"index", t.index}, {"label", t.label}, {"prediction", t.prediction},
                          {"correct", t.correct}, {"response", t.response}, {"responded", t.responded}});
    json cycles = json::object();
    for (const auto& [phase, roles] : b.expected_cycles) {
        json r = json::array();
        for (auto role : roles) r.push_back(symbol(role));
        cycles[phase] = r;
    }
    json meta{{"scenario", to_string(b.kind)}, {"config", format_config(b.config)}, {"trials", trials}, {"cycles", cycles}};
    return meta.dump() + '\n' + serialize_trace(b.trace);
}

// ---------------------------------------------------------------------------
// Mimicry maps

inline std::string serialize_mimicry_map(const MimicryMap& m)
{
    using io_detail::json;
    json objects = json::array();
    for (auto [a, b] : m.objects) objects.push_back(json::array({a, b}));
    json comps = json::object();
    for (const auto& [role, map] : m.components) {
        json pairs = json::array();
        for (const auto& [x, y] : map) pairs.push_back(json::array({io_detail::to_json(x), io_detail::to_json(y)}));
        comps[to_string(role)] = pairs;
    }
    return json{{"format", "axiom-mimicry"}, {"version", kMimicryFormatVersion}, {"source", m.source},
                {"target", m.target},        {"objects", objects},              {"components", comps}}
               .dump(1) +
           '\n';
}

inline MimicryMap parse_mimicry_map(const std::string& text)
{
    using io_detail::json;
    try {
        json j = json::parse(text);
        if (j.value("format", "") != "axiom-mimicry") throw FormatError("not a mimicry map", 1);
        if (j.at("version").get<int>() != kMimicryFormatVersion) throw FormatError("unsupported mimicry map version", 1);
        MimicryMap m;
        m.source = j.at("source").get<std::string>();
        m.target = j.at("target").get<std::string>();
        for (const auto& p : j.at("objects")) m.objects.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
        for (const auto& [role, pairs] : j.at("components").items()) {
            auto& comp = m.components[role_from_string(role)];
            for (const auto& p : pairs) comp.emplace(io_detail::tuple_from_json(p.at(0)), io_detail::tuple_from_json(p.at(1)));
        }
        return m;
    }
    catch (const FormatError&) {
        throw;
    }
    catch (const std::exception& e) {
        throw FormatError(std::string("malformed mimicry map: ") + e.what(), 1);
    }
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os || !(os << text)) throw std::runtime_error("cannot write '" + path.string() + "'");
}

} // namespace axiom
