// sscs-sim: simulates supply-chain attack scenarios against a declarative
// cluster fixture, checks them against the capability analyzer, and emits
// threat-model reports.
//
// Subcommands:
//   run           execute scenarios (built-in or from files) under a policy
//   analyze       capability closure and witness paths from an initial set
//   threat-model  threat entries for the components present in a fixture
//   list-builtins the four built-in scenarios

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sscs/analyzer.hpp"
#include "sscs/fixture.hpp"
#include "sscs/policy.hpp"
#include "sscs/report.hpp"
#include "sscs/scenario.hpp"

namespace {

struct OutputOptions {
    std::string format = "text";
    std::string out_path;
};

void write_output(const OutputOptions& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path);
    if (!out) throw std::runtime_error("cannot write output file: " + opts.out_path);
    out << text;
}

sscs::PolicySet load_policy_or_empty(const std::string& path) {
    if (path.empty()) return {};
    return sscs::load_policy_file(path);
}

int cmd_run(const std::string& fixture_path, const std::vector<std::string>& scenario_paths,
            bool builtin, const std::string& policy_path, const std::string& expect,
            bool parallel, const OutputOptions& opts) {
    sscs::ClusterState fixture = sscs::load_fixture_file(fixture_path);
    sscs::PolicySet policy = load_policy_or_empty(policy_path);

    std::vector<sscs::Scenario> scenarios;
    if (builtin) scenarios = sscs::builtin_scenarios();
    for (const std::string& path : scenario_paths)
        scenarios.push_back(sscs::load_scenario_file(path));
    if (scenarios.empty())
        throw std::runtime_error("nothing to run: pass --builtin or --scenario");

    sscs::RunReport report = sscs::build_run_report(fixture, scenarios, policy, parallel);

    if (opts.format == "json")
        write_output(opts, sscs::report_to_json(report).dump(2) + "\n");
    else
        write_output(opts, sscs::render_report_text(report));

    if (expect.empty()) return 0;
    for (const sscs::ScenarioReport& s : report.scenarios) {
        bool ok = expect == "achieved" ? s.outcome == sscs::ScenarioOutcome::Achieved
                                       : s.outcome == sscs::ScenarioOutcome::Blocked;
        if (!ok) {
            std::cerr << "expectation failed: " << s.id << " is " << to_string(s.outcome)
                      << ", expected " << expect << "\n";
            return 1;
        }
    }
    return 0;
}

int cmd_analyze(const std::string& fixture_path, const std::vector<std::string>& initial_names,
                const std::string& policy_path, const OutputOptions& opts) {
    sscs::ClusterState fixture = sscs::load_fixture_file(fixture_path);
    sscs::PolicySet policy = load_policy_or_empty(policy_path);

    sscs::CapabilitySet initial;
    for (const std::string& name : initial_names)
        initial.insert(sscs::parse_capability(name));
    sscs::EscalationGraph graph = sscs::analyze(fixture, initial, policy);

    if (opts.format == "json") {
        sscs::json j;
        j["initial"] = sscs::json::array();
        for (const sscs::Capability& c : graph.initial) j["initial"].push_back(c.str());
        j["closure"] = sscs::json::array();
        for (const sscs::Capability& c : graph.reached) j["closure"].push_back(c.str());
        j["witnesses"] = sscs::json::object();
        for (const auto& [cap, path] : graph.witness) j["witnesses"][cap.str()] = path;
        write_output(opts, j.dump(2) + "\n");
        return 0;
    }

    std::ostringstream out;
    out << "initial:";
    for (const sscs::Capability& c : graph.initial) out << " " << c.str();
    out << "\nreachable:";
    for (const sscs::Capability& c : graph.reached) out << " " << c.str();
    out << "\n";
    for (const auto& [cap, path] : graph.witness) {
        out << "witness " << cap.str() << ":";
        for (const std::string& rule : path) out << " " << rule;
        out << "\n";
    }
    write_output(opts, out.str());
    return 0;
}

int cmd_threat_model(const std::string& fixture_path, const OutputOptions& opts) {
    sscs::ClusterState fixture = sscs::load_fixture_file(fixture_path);
    std::vector<sscs::ThreatEntry> threats = sscs::threat_model(fixture);
    if (opts.format == "json") {
        sscs::json j = sscs::json::array();
        for (const sscs::ThreatEntry& t : threats)
            j.push_back(sscs::json{{"system", to_string(t.system)},
                                   {"potential_flaw", t.potential_flaw},
                                   {"threat_description", t.threat_description},
                                   {"mitigation", t.mitigation}});
        write_output(opts, j.dump(2) + "\n");
        return 0;
    }
    write_output(opts, sscs::render_threats_text(threats));
    return 0;
}

int cmd_list_builtins(const OutputOptions& opts) {
    std::ostringstream out;
    for (const sscs::Scenario& s : sscs::builtin_scenarios()) {
        out << s.id << ": " << s.title << "\n";
        out << "  prerequisite: " << s.prerequisite.subject << " ("
            << to_string(s.prerequisite.level) << ")\n";
        out << "  goal:";
        for (const sscs::GoalAtom& atom : s.goal.atoms) {
            out << " " << to_string(atom.kind);
            if (!atom.topic.empty()) out << "(" << atom.topic << ")";
            if (!atom.path.empty()) out << "(" << atom.path << " -> " << atom.file << ")";
            if (!atom.service.empty()) out << "(" << atom.service << ")";
        }
        out << "\n";
    }
    write_output(opts, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"supply-chain attack scenario simulator"};
    app.require_subcommand(1);

    OutputOptions opts;
    std::string fixture_path;
    std::string policy_path;
    std::string expect;
    std::vector<std::string> scenario_paths;
    std::vector<std::string> initial_caps;
    bool builtin = false;
    bool parallel = false;

    CLI::App* run = app.add_subcommand("run", "run scenarios and report verdicts");
    run->add_option("--fixture", fixture_path, "fixture file")->required();
    run->add_option("--scenario", scenario_paths, "scenario file (repeatable)");
    run->add_flag("--builtin", builtin, "run the four built-in scenarios");
    run->add_option("--policy", policy_path, "policy file (default: no mitigation)");
    run->add_option("--expect", expect, "fail unless every verdict matches")
        ->check(CLI::IsMember({"achieved", "blocked"}));
    run->add_flag("--parallel", parallel, "run scenarios on independent fixture copies");
    run->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    run->add_option("--out", opts.out_path, "write the report to a file");

    CLI::App* analyze = app.add_subcommand("analyze", "capability closure and witness paths");
    analyze->add_option("--fixture", fixture_path, "fixture file")->required();
    analyze->add_option("--initial", initial_caps,
                        "initial capability, e.g. CrudIn(developer) (repeatable)");
    analyze->add_option("--policy", policy_path, "policy file");
    analyze->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    analyze->add_option("--out", opts.out_path, "write the report to a file");

    CLI::App* threat = app.add_subcommand("threat-model", "threat entries for a fixture");
    threat->add_option("--fixture", fixture_path, "fixture file")->required();
    threat->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    threat->add_option("--out", opts.out_path, "write the report to a file");

    CLI::App* list = app.add_subcommand("list-builtins", "list the built-in scenarios");
    list->add_option("--out", opts.out_path, "write the listing to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(fixture_path, scenario_paths, builtin, policy_path, expect, parallel,
                           opts);
        if (analyze->parsed()) return cmd_analyze(fixture_path, initial_caps, policy_path, opts);
        if (threat->parsed()) return cmd_threat_model(fixture_path, opts);
        if (list->parsed()) return cmd_list_builtins(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
