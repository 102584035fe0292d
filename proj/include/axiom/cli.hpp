#pragma once

// Command-line front end.
//
// Exit codes: 0 success or verdict true, 1 verdict false or a law/oracle
// violation, 2 usage error, 3 malformed or unusable input.

#include "axiom/report.hpp"
#include "axiom/trace_io.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace axiom {

enum ExitCode : int { kExitOk = 0, kExitNegative = 1, kExitUsage = 2, kExitBadInput = 3 };

namespace cli_detail {

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Window parse_window(const std::string& text, const Trace& t)
{
    if (text.empty()) return full_window(t);
    auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("window must be A:B");
    try {
        std::size_t used = 0;
        const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
        if (a.empty() || b.empty() || a[0] == '-' || b[0] == '-') throw std::invalid_argument("bad bound");
        Window w{std::stoull(a, &used), 0};
        if (used != a.size()) throw std::invalid_argument("bad bound");
        w.end = std::stoull(b, &used);
        if (used != b.size()) throw std::invalid_argument("bad bound");
        return w;
    }
    catch (const std::invalid_argument&) {
        throw UsageError("window must be A:B with non-negative integers");
    }
    catch (const std::out_of_range&) {
        throw UsageError("window bound out of range");
    }
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out)
{
    if (out_path.empty()) out << text;
    else write_file(out_path, text);
}

} // namespace cli_detail

/// Runs one command. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    using namespace cli_detail;

    CLI::App app{"Executable semantics for structural intelligence: generate, classify, and check traces.\n"
                 "Windows are half-open step ranges A:B (steps A..B-1); omit for the whole trace.",
                 "axiom"};
    app.require_subcommand(1);

    std::string scenario, out_path, config_path, trace_path, window_text, mode = "step", format = "md";
    std::string source_path, target_path, map_path;
    std::uint64_t seed = 0;
    std::size_t trials = 0, test_count = 0, limit = 30;

    auto* run = app.add_subcommand("run", "Generate a scenario trace");
    run->add_option("--scenario", scenario, "hebbian|backprop|aplysia|sandpile|off")
        ->required()
        ->check(CLI::IsMember({"hebbian", "backprop", "aplysia", "sandpile", "off"}));
    run->add_option("--seed", seed, "Random seed");
    run->add_option("--out", out_path, "Trace file to write")->required();
    run->add_option("--config", config_path, "key = value scenario config");
    run->add_option("--trials", trials, "Learning trials (steps for sandpile/off)");
    run->add_option("--test-count", test_count, "Test trials");

    auto* classify_cmd = app.add_subcommand("classify", "Decide I(C_i, C_p, C_o) over a window");
    classify_cmd->add_option("--trace", trace_path)->required();
    classify_cmd->add_option("--window", window_text, "A:B (half-open)");

    auto* activity_cmd = app.add_subcommand("activity", "Measure boundary interaction over a window");
    activity_cmd->add_option("--trace", trace_path)->required();
    activity_cmd->add_option("--window", window_text, "A:B (half-open)");
    activity_cmd->add_option("--mode", mode, "step|element")->check(CLI::IsMember({"step", "element"}));

    auto* functor_cmd = app.add_subcommand("functor-check", "Check the time functor's laws");
    functor_cmd->add_option("--trace", trace_path)->required();
    functor_cmd->add_option("--window", window_text, "A:B; defaults to the first --limit steps");
    functor_cmd->add_option("--limit", limit, "Steps checked when no window is given (default 30)");

    auto* mimic_cmd = app.add_subcommand("mimic-check", "Validate a mimicry functor between two traces");
    mimic_cmd->add_option("--source", source_path)->required();
    mimic_cmd->add_option("--target", target_path)->required();
    mimic_cmd->add_option("--map", map_path)->required();

    auto* mimic_map_cmd = app.add_subcommand("mimic-map", "Write the Aplysia -> Hebbian mapping for two traces");
    mimic_map_cmd->add_option("--source", source_path)->required();
    mimic_map_cmd->add_option("--target", target_path)->required();
    mimic_map_cmd->add_option("--out", out_path)->required();

    auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare classify with exhaustive enumeration");
    oracle_cmd->add_option("--trace", trace_path)->required();
    oracle_cmd->add_option("--window", window_text, "A:B (half-open)");

    auto* report_cmd = app.add_subcommand("report", "Render structure/transition tables and the classification");
    report_cmd->add_option("--trace", trace_path)->required();
    report_cmd->add_option("--format", format, "md")->check(CLI::IsMember({"md"}));
    report_cmd->add_option("--out", out_path, "Write the report here instead of stdout");

    std::vector<std::string> argv_store{"axiom"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*run) {
            const auto kind = scenario_from_string(scenario);
            ScenarioConfig cfg = default_config(kind);
            if (!config_path.empty()) {
                std::istringstream is(read_file(config_path));
                cfg = parse_config(is, cfg);
            }
            if (run->count("--seed")) cfg.seed = seed;
            if (run->count("--trials")) cfg.trials = trials;
            if (run->count("--test-count")) cfg.test_count = test_count;
            auto bundle = generate(kind, cfg);
            write_trace(bundle.trace, std::filesystem::path(out_path));
            out << "wrote " << out_path << ": " << to_string(kind) << ", " << bundle.trace.steps() << " steps, "
                << bundle.trace.initial().size() << " elements";
            if (kind == ScenarioKind::hebbian || kind == ScenarioKind::backprop)
                out << ", test accuracy " << bundle.test_accuracy();
            out << "\n";
            return kExitOk;
        }

        if (*mimic_cmd || *mimic_map_cmd) {
            const Trace src = read_trace(std::filesystem::path(source_path));
            const Trace dst = read_trace(std::filesystem::path(target_path));
            if (*mimic_map_cmd) {
                write_file(out_path, serialize_mimicry_map(aplysia_to_hebbian_map(src, dst)));
                out << "wrote " << out_path << "\n";
                return kExitOk;
            }
            const MimicryMap map = parse_mimicry_map(read_file(map_path));
            auto src_cat = std::make_shared<const IntelligenceCategory>(category_of(functor_from_trace(src)));
            auto dst_cat = std::make_shared<const IntelligenceCategory>(category_of(functor_from_trace(dst)));
            try {
                auto g = mimicry_functor(src_cat, dst_cat, map);
                auto laws = check_functor_laws(g);
                out << render_laws(src.label + " -> " + dst.label, laws).body;
                return laws.passed() ? kExitOk : kExitNegative;
            }
            catch (const MimicryError& e) {
                out << "# Mimicry check: " << src.label << " -> " << dst.label << "\n\nrejected: " << e.what() << "\n";
                return kExitNegative;
            }
        }

        const Trace t = read_trace(std::filesystem::path(trace_path));

        if (*functor_cmd) {
            Window w = window_text.empty() ? Window{0, std::min(t.steps(), limit)} : parse_window(window_text, t);
            if (w.begin > w.end || w.end > t.steps()) throw UsageError("window exceeds trace length");
            auto f = functor_from_trace(t, w);
            auto laws = check_functor_laws(f);
            out << render_laws(t.label + " steps " + std::to_string(w.begin) + ":" + std::to_string(w.end) + " of " +
                                   std::to_string(t.steps()),
                               laws)
                       .body;
            return laws.passed() ? kExitOk : kExitNegative;
        }

        const Window w = parse_window(window_text, t);
        if (w.begin >= w.end || w.end > t.steps()) throw UsageError("window must be non-empty and within the trace");

        if (*classify_cmd) {
            auto rep = classify(t, w);
            out << render_classification(t, rep).body;
            return rep.verdict() ? kExitOk : kExitNegative;
        }
        if (*activity_cmd) {
            out << render_activity(t, activity(t, w, mode == "step" ? ActivityMode::step : ActivityMode::element)).body;
            return kExitOk;
        }
        if (*oracle_cmd) {
            auto fast = classify(t, w);
            auto brute = brute_force_classify(t, w);
            out << render_oracle(t, fast, brute).body;
            return compare_reports(fast, brute).agrees() ? kExitOk : kExitNegative;
        }
        if (*report_cmd) {
            auto rep = classify(t, w);
            emit(render_table(t).body + "\n" + render_classification(t, rep).body, out_path, out);
            return kExitOk;
        }
    }
    catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitUsage;
}

} // namespace axiom
