#pragma once

// Markdown rendering of classification, activity, law, oracle, and structure
// table reports. Output depends only on the inputs.

#include "axiom/categories.hpp"
#include "axiom/oracle.hpp"

#include <iomanip>
#include <sstream>
#include <string>

namespace axiom {

enum class ReportKind { classification, activity, law, oracle, table };

struct ReportDocument {
    ReportKind kind = ReportKind::table;
    std::string body;
};

namespace report_detail {

inline std::string join(const RegionSet& rs)
{
    std::string out;
    for (const auto& r : rs) out += (out.empty() ? "" : ",") + r.value;
    return out.empty() ? "-" : out;
}

inline std::string join(const ElementSet& es)
{
    std::string out;
    for (const auto& e : es) out += (out.empty() ? "" : ",") + e.value;
    return out.empty() ? "-" : out;
}

inline std::string roles_cell(const std::vector<Role>& roles)
{
    if (roles.empty()) return "-";
    std::string out;
    for (auto r : roles) out += (out.empty() ? "" : "+") + std::string(symbol(r));
    return out;
}

inline std::string structures_cell(const Trace& t, std::size_t step)
{
    std::vector<std::string> ids;
    for (const auto& ev : t.events[step])
        if (ev.via && std::find(ids.begin(), ids.end(), *ev.via) == ids.end()) ids.push_back(*ev.via);
    std::string out;
    for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
    return out.empty() ? "-" : out;
}

inline std::string window(const Window& w) { return std::to_string(w.begin) + ":" + std::to_string(w.end); }

} // namespace report_detail

inline ReportDocument render_classification(const Trace& t, const IntelligenceReport& r)
{
    using namespace report_detail;
    std::ostringstream os;
    os << "# Classification: " << (t.label.empty() ? "trace" : t.label) << "\n\n";
    os << "window: " << window(r.window) << "\n\n";
    os << "| condition | possessed | witnesses | first step |\n|---|---|---|---|\n";
    auto row = [&](const char* name, const std::vector<Witness>& ws) {
        os << "| " << name << " | " << (ws.empty() ? "no" : "yes") << " | " << ws.size() << " | "
           << (ws.empty() ? std::string("-") : std::to_string(ws.front().step)) << " |\n";
    };
    row("input (C_i)", r.input);
    row("processing (C_p)", r.processing);
    row("output (C_o)", r.output);
    os << "\nverdict: " << (r.verdict() ? "intelligence" : "not intelligence") << "\n";

    os << "\n| step | condition | grown | shrunk | movers |\n|---|---|---|---|---|\n";
    std::vector<Witness> all = r.input;
    all.insert(all.end(), r.processing.begin(), r.processing.end());
    all.insert(all.end(), r.output.begin(), r.output.end());
    std::stable_sort(all.begin(), all.end(), [](const Witness& a, const Witness& b) { return a.step < b.step; });
    for (const auto& w : all)
        os << "| " << w.step << " | " << to_string(w.condition) << " | " << join(w.grown) << " | " << join(w.shrunk)
           << " | " << join(w.movers) << " |\n";
    return {ReportKind::classification, os.str()};
}

inline ReportDocument render_activity(const Trace& t, const ActivityScore& a)
{
    std::ostringstream os;
    os << std::setprecision(6);
    os << "# Activity: " << (t.label.empty() ? "trace" : t.label) << "\n\n";
    os << "window: " << report_detail::window(a.window) << "\n";
    os << "mode: " << (a.mode == ActivityMode::step ? "step" : "element") << "\n";
    os << "step_activity: " << a.step_activity << "\n";
    os << "element_rate: " << a.element_rate << "\n";
    os << "value: " << a.value() << "\n";
    return {ReportKind::activity, os.str()};
}

inline ReportDocument render_laws(const std::string& title, const LawReport& r)
{
    std::ostringstream os;
    os << "# Functor laws: " << title << "\n\n";
    os << "| law | checked | result |\n|---|---|---|\n";
    auto status = [&](const char* law) { return r.first(law) ? "FAIL" : "pass"; };
    os << "| identity preservation | " << r.identities_checked << " | " << status("identity") << " |\n";
    os << "| composition preservation | " << r.compositions_checked << " | " << status("composition") << " |\n";
    os << "| table totality | - | " << status("table") << " |\n";
    os << "| component typing | - | " << status("typing") << " |\n";
    os << "\nresult: " << (r.passed() ? "all laws hold" : "violations found") << "\n";
    if (!r.passed()) {
        os << "\n| law | indices | detail |\n|---|---|---|\n";
        for (const auto& f : r.failures) {
            std::string idx;
            for (auto i : f.indices) idx += (idx.empty() ? "" : ",") + std::to_string(i);
            os << "| " << f.law << " | (" << idx << ") | " << f.detail << " |\n";
        }
    }
    return {ReportKind::law, os.str()};
}

inline ReportDocument render_oracle(const Trace& t, const IntelligenceReport& fast, const IntelligenceReport& brute)
{
    auto cmp = compare_reports(fast, brute);
    auto steps = [](const std::vector<Witness>& ws) {
        std::string out;
        for (const auto& w : ws) out += (out.empty() ? "" : ",") + std::to_string(w.step);
        return out.empty() ? std::string("-") : out;
    };
    std::ostringstream os;
    os << "# Oracle comparison: " << (t.label.empty() ? "trace" : t.label) << "\n\n";
    os << "window: " << report_detail::window(fast.window) << "\n\n";
    os << "| condition | classify steps | enumeration steps | agree |\n|---|---|---|---|\n";
    os << "| input | " << steps(fast.input) << " | " << steps(brute.input) << " | " << (cmp.input_steps_agree ? "yes" : "no") << " |\n";
    os << "| processing | " << steps(fast.processing) << " | " << steps(brute.processing) << " | "
       << (cmp.processing_steps_agree ? "yes" : "no") << " |\n";
    os << "| output | " << steps(fast.output) << " | " << steps(brute.output) << " | " << (cmp.output_steps_agree ? "yes" : "no") << " |\n";
    os << "| verdict | " << (fast.verdict() ? "true" : "false") << " | " << (brute.verdict() ? "true" : "false") << " | "
       << (cmp.verdict_agrees ? "yes" : "no") << " |\n";
    os << "\nresult: " << (cmp.agrees() ? "agree" : "DISAGREE") << "\n";
    return {ReportKind::oracle, os.str()};
}

/// Declared structures, then each phase's first cycle of transitions with the
/// structure that drives each step.
inline ReportDocument render_table(const Trace& t)
{
    using namespace report_detail;
    std::ostringstream os;
    os << "# Structures and transitions: " << (t.label.empty() ? "trace" : t.label) << "\n\n";
    os << "## Structures\n\n| structure | role | factors | scope | tuples |\n|---|---|---|---|---|\n";
    for (const auto& d : t.declarations) {
        std::string factors;
        for (const auto& f : d.factors) factors += (factors.empty() ? "" : " x ") + f;
        os << "| " << d.id << " | " << symbol(d.role) << " (" << to_string(d.role) << ") | "
           << (factors.empty() ? "-" : factors) << " | " << join(d.scope) << " | " << d.tuples.size() << " |\n";
    }
    for (const auto& p : t.phases) {
        os << "\n## Phase: " << p.label << " (steps " << p.begin << ":" << p.end << ")\n\n";
        if (p.cycle == 0 || p.begin == p.end) {
            std::map<std::string, std::size_t> counts;
            for (std::size_t i = p.begin; i < p.end; ++i)
                for (auto r : step_roles(t, i)) ++counts[symbol(r)];
            os << "| structure | steps |\n|---|---|\n";
            for (const auto& [sym, n] : counts) os << "| " << sym << " | " << n << " |\n";
            continue;
        }
        os << "| transition | structure | via |\n|---|---|---|\n";
        for (std::size_t k = 0; k < p.cycle && p.begin + k < p.end; ++k) {
            const std::size_t step = p.begin + k;
            auto roles = roles_cell(step_roles(t, step));
            os << "| I_{i+" << k << "} -> I_{i+" << (k + 1) << "} | " << roles << " | " << structures_cell(t, step) << " |\n";
        }
        os << "\ncycles: " << (p.end - p.begin) / p.cycle << " of length " << p.cycle << "\n";
    }
    return {ReportKind::table, os.str()};
}

} // namespace axiom
