#pragma once

// Report assembly: threat-model entries per fixture component, per-scenario
// verdicts with traces, analyzer closures with witnesses, and
// analyzer/simulator agreement flags. Reports render as text tables or as a
// single JSON document that parses back into the same structures.

#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sscs/analyzer.hpp"
#include "sscs/fixture.hpp"
#include "sscs/scenario.hpp"

namespace sscs {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Threat model
// ---------------------------------------------------------------------------

enum class SystemComponent { Git, Jenkins, Docker, K8s, Strimzi, CustomApp };

inline std::string to_string(SystemComponent c) {
    switch (c) {
        case SystemComponent::Git: return "Git";
        case SystemComponent::Jenkins: return "Jenkins";
        case SystemComponent::Docker: return "Docker";
        case SystemComponent::K8s: return "K8s";
        case SystemComponent::Strimzi: return "Strimzi";
        case SystemComponent::CustomApp: return "Custom App";
    }
    return "?";
}

struct ThreatEntry {
    SystemComponent system = SystemComponent::K8s;
    std::string potential_flaw;
    std::string threat_description;
    std::string mitigation;

    friend bool operator==(const ThreatEntry&, const ThreatEntry&) = default;
};

inline const std::vector<ThreatEntry>& threat_catalog() {
    static const std::vector<ThreatEntry> catalog = {
        {SystemComponent::Git, "Account Compromise", "Potential privileged account compromise",
         "Enable 2 factor auth"},
        {SystemComponent::Jenkins, "Control over CI/CD",
         "Account can be used to alter build configs", "Enable 2 factor auth"},
        {SystemComponent::Docker, "Docker Pull", "Potential infected container",
         "Implement vuln scanning for containers"},
        {SystemComponent::K8s, "DDOS", "Front end apps externally exposed",
         "Proper security checks (ex. check in place to prevent multiple auth)"},
        {SystemComponent::Strimzi, "Network Policy", "Default pods can access listeners",
         "Configure proper network policy"},
        {SystemComponent::CustomApp, "Non sanitized fields", "Potential for malicious input",
         "Patch to allow sanitized"},
    };
    return catalog;
}

// One entry per component kind present in the fixture, deduplicated by kind.
inline bool component_present(const ClusterState& fixture, SystemComponent c) {
    switch (c) {
        case SystemComponent::Git: return fixture.source_repo.present();
        case SystemComponent::Jenkins: return fixture.ci_server.present();
        case SystemComponent::Docker: return fixture.registry.present();
        case SystemComponent::K8s: return true;  // the cluster itself
        case SystemComponent::Strimzi: return fixture.broker.present();
        case SystemComponent::CustomApp:
            // A front-end application distinct from the broker's own service.
            for (const Service& s : fixture.services)
                if (s.qualified_name() != fixture.broker.service_ref) return true;
            return false;
    }
    return false;
}

inline std::vector<ThreatEntry> threat_model(const ClusterState& fixture) {
    std::vector<ThreatEntry> out;
    for (const ThreatEntry& entry : threat_catalog())
        if (component_present(fixture, entry.system)) out.push_back(entry);
    return out;
}

// Components a scenario attacks; its threat entries become report-relevant
// when the scenario is achieved.
inline std::vector<SystemComponent> scenario_components(const std::string& scenario_id) {
    if (scenario_id == "retrieve-topic-data") return {SystemComponent::Strimzi};
    if (scenario_id == "cicd-backdoor") return {SystemComponent::Jenkins};
    if (scenario_id == "expose-cluster-ip") return {SystemComponent::K8s};
    if (scenario_id == "hostpath-breakout")
        return {SystemComponent::K8s, SystemComponent::Docker};
    return {};
}

// ---------------------------------------------------------------------------
// Run report
// ---------------------------------------------------------------------------

struct ScenarioReport {
    std::string id;
    std::string title;
    ScenarioOutcome outcome = ScenarioOutcome::Failed;
    int step_index = -1;
    std::string detail;
    std::vector<TraceEntry> trace;

    friend bool operator==(const ScenarioReport&, const ScenarioReport&) = default;
};

struct AnalysisReport {
    std::string scenario_id;
    std::vector<std::string> initial;
    std::vector<std::string> closure;
    std::map<std::string, std::vector<std::string>> witnesses;
    std::optional<bool> agrees;  // empty when the scenario has no capability mapping

    friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

struct RunReport {
    std::string fixture_digest;
    std::string policy_digest;
    std::vector<ScenarioReport> scenarios;
    std::vector<AnalysisReport> analysis;
    std::vector<ThreatEntry> threats;  // entries relevant to achieved goals

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

inline RunReport build_run_report(const ClusterState& fixture,
                                  const std::vector<Scenario>& scenarios,
                                  const PolicySet& policy, bool parallel = false) {
    RunReport report;
    report.fixture_digest = fixture_digest(fixture);
    report.policy_digest = policy_digest(policy);

    std::vector<ScenarioVerdict> verdicts(scenarios.size());
    if (parallel) {
        std::vector<std::future<ScenarioVerdict>> futures;
        futures.reserve(scenarios.size());
        for (const Scenario& s : scenarios)
            futures.push_back(std::async(std::launch::async, [&fixture, &s, &policy] {
                ClusterState copy = fixture;  // independent deep copy per run
                return run_scenario(copy, s, policy);
            }));
        for (size_t i = 0; i < futures.size(); ++i) verdicts[i] = futures[i].get();
    } else {
        for (size_t i = 0; i < scenarios.size(); ++i)
            verdicts[i] = run_scenario(fixture, scenarios[i], policy);
    }

    std::set<SystemComponent> achieved_components;
    for (size_t i = 0; i < scenarios.size(); ++i) {
        const Scenario& s = scenarios[i];
        const ScenarioVerdict& v = verdicts[i];
        report.scenarios.push_back(
            ScenarioReport{s.id, s.title, v.outcome, v.step_index, v.detail, v.trace});

        AnalysisReport analysis;
        analysis.scenario_id = s.id;
        CapabilitySet initial =
            map_credential(fixture, Credential{s.prerequisite.subject, s.prerequisite.level});
        EscalationGraph graph = analyze(fixture, initial, policy);
        for (const Capability& c : initial) analysis.initial.push_back(c.str());
        for (const Capability& c : graph.reached) analysis.closure.push_back(c.str());
        for (const auto& [cap, path] : graph.witness) analysis.witnesses[cap.str()] = path;
        if (std::optional<CapabilitySet> goal_caps = map_goal(s)) {
            bool reachable_goal =
                std::all_of(goal_caps->begin(), goal_caps->end(),
                            [&](const Capability& c) { return graph.contains(c); });
            analysis.agrees = (v.achieved() == reachable_goal);
        }
        report.analysis.push_back(std::move(analysis));

        if (v.achieved())
            for (SystemComponent c : scenario_components(s.id)) achieved_components.insert(c);
    }

    for (const ThreatEntry& entry : threat_catalog())
        if (achieved_components.count(entry.system) && component_present(fixture, entry.system))
            report.threats.push_back(entry);
    return report;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace report_detail {

// Generic bridge between the YAML node model and JSON, reusing the scenario
// action field mappings for trace entries.
inline json yaml_to_json(const yaml::Node& node) {
    switch (node.kind()) {
        case yaml::Node::Kind::Scalar: return json(node.as_string());
        case yaml::Node::Kind::Sequence: {
            json arr = json::array();
            for (const yaml::Node& item : node.items()) arr.push_back(yaml_to_json(item));
            return arr;
        }
        case yaml::Node::Kind::Mapping: {
            json obj = json::object();
            for (const auto& [k, v] : node.entries()) obj[k] = yaml_to_json(v);
            return obj;
        }
    }
    return json();
}

inline yaml::Node json_to_yaml(const json& j) {
    if (j.is_string()) return yaml::Node::scalar(j.get<std::string>());
    if (j.is_array()) {
        yaml::Node seq = yaml::Node::sequence();
        for (const json& item : j) seq.push_back(json_to_yaml(item));
        return seq;
    }
    if (j.is_object()) {
        yaml::Node map = yaml::Node::mapping();
        for (auto it = j.begin(); it != j.end(); ++it) map.set(it.key(), json_to_yaml(*it));
        return map;
    }
    throw std::runtime_error("report json: unsupported value type");
}

inline json observation_to_json(const Observation& obs) {
    struct Visitor {
        json operator()(const std::monostate&) { return json(nullptr); }
        json operator()(const RecordsObservation& o) {
            return json{{"type", "records"}, {"records", o.records}};
        }
        json operator()(const FileContentsObservation& o) {
            return json{{"type", "file-contents"}, {"contents", o.contents}};
        }
        json operator()(const CredentialObservation& o) {
            return json{{"type", "credential"},
                        {"subject", o.credential.subject},
                        {"level", to_string(o.credential.level)}};
        }
        json operator()(const EndpointObservation& o) {
            json e{{"type", "endpoint"},
                   {"cluster_ip", o.endpoint.cluster_ip},
                   {"port", o.endpoint.port}};
            if (o.endpoint.exposure.node_port) e["node_port"] = *o.endpoint.exposure.node_port;
            return e;
        }
        json operator()(const ImageRefObservation& o) {
            return json{{"type", "image"}, {"name", o.image.name}, {"tag", o.image.tag}};
        }
    };
    return std::visit(Visitor{}, obs);
}

inline Observation observation_from_json(const json& j) {
    if (j.is_null()) return std::monostate{};
    std::string type = j.at("type").get<std::string>();
    if (type == "records")
        return RecordsObservation{j.at("records").get<std::vector<std::string>>()};
    if (type == "file-contents")
        return FileContentsObservation{j.at("contents").get<std::string>()};
    if (type == "credential") {
        auto level = credential_level_from_string(j.at("level").get<std::string>());
        if (!level) throw std::runtime_error("report json: bad credential level");
        return CredentialObservation{Credential{j.at("subject").get<std::string>(), *level}};
    }
    if (type == "endpoint") {
        Endpoint e;
        e.cluster_ip = j.at("cluster_ip").get<std::string>();
        e.port = j.at("port").get<int>();
        if (j.contains("node_port")) e.exposure.node_port = j.at("node_port").get<int>();
        return EndpointObservation{e};
    }
    if (type == "image")
        return ImageRefObservation{
            ImageRef{j.at("name").get<std::string>(), j.at("tag").get<std::string>()}};
    throw std::runtime_error("report json: unknown observation type " + type);
}

inline json trace_entry_to_json(const TraceEntry& entry) {
    json j;
    j["action"] = yaml_to_json(scenario_detail::emit_action(entry.action));
    j["status"] = to_string(entry.result.status);
    j["detail"] = entry.result.detail;
    j["observation"] = observation_to_json(entry.result.observation);
    return j;
}

inline TraceEntry trace_entry_from_json(const json& j) {
    TraceEntry entry;
    entry.action = scenario_detail::parse_action(json_to_yaml(j.at("action")));
    std::string status = j.at("status").get<std::string>();
    for (ActionStatus s : {ActionStatus::Applied, ActionStatus::DeniedRBAC,
                           ActionStatus::BlockedPolicy, ActionStatus::FailedPrecondition})
        if (to_string(s) == status) entry.result.status = s;
    entry.result.detail = j.at("detail").get<std::string>();
    entry.result.observation = observation_from_json(j.at("observation"));
    return entry;
}

inline std::optional<ScenarioOutcome> outcome_from_string(const std::string& s) {
    for (ScenarioOutcome o : {ScenarioOutcome::Achieved, ScenarioOutcome::Blocked,
                              ScenarioOutcome::Denied, ScenarioOutcome::Failed})
        if (to_string(o) == s) return o;
    return std::nullopt;
}

inline std::optional<SystemComponent> component_from_string(const std::string& s) {
    for (SystemComponent c : {SystemComponent::Git, SystemComponent::Jenkins,
                              SystemComponent::Docker, SystemComponent::K8s,
                              SystemComponent::Strimzi, SystemComponent::CustomApp})
        if (to_string(c) == s) return c;
    return std::nullopt;
}

}  // namespace report_detail

inline json report_to_json(const RunReport& report) {
    using namespace report_detail;
    json j;
    j["fixture_digest"] = report.fixture_digest;
    j["policy_digest"] = report.policy_digest;
    j["scenarios"] = json::array();
    for (const ScenarioReport& s : report.scenarios) {
        json sj;
        sj["id"] = s.id;
        sj["title"] = s.title;
        sj["outcome"] = to_string(s.outcome);
        sj["step_index"] = s.step_index;
        sj["detail"] = s.detail;
        sj["trace"] = json::array();
        for (const TraceEntry& entry : s.trace) sj["trace"].push_back(trace_entry_to_json(entry));
        j["scenarios"].push_back(sj);
    }
    j["analysis"] = json::array();
    for (const AnalysisReport& a : report.analysis) {
        json aj;
        aj["scenario_id"] = a.scenario_id;
        aj["initial"] = a.initial;
        aj["closure"] = a.closure;
        aj["witnesses"] = json::object();
        for (const auto& [cap, path] : a.witnesses) aj["witnesses"][cap] = path;
        aj["agrees"] = a.agrees ? json(*a.agrees) : json(nullptr);
        j["analysis"].push_back(aj);
    }
    j["threats"] = json::array();
    for (const ThreatEntry& t : report.threats) {
        j["threats"].push_back(json{{"system", to_string(t.system)},
                                    {"potential_flaw", t.potential_flaw},
                                    {"threat_description", t.threat_description},
                                    {"mitigation", t.mitigation}});
    }
    return j;
}

inline RunReport report_from_json(const json& j) {
    using namespace report_detail;
    RunReport report;
    report.fixture_digest = j.at("fixture_digest").get<std::string>();
    report.policy_digest = j.at("policy_digest").get<std::string>();
    for (const json& sj : j.at("scenarios")) {
        ScenarioReport s;
        s.id = sj.at("id").get<std::string>();
        s.title = sj.at("title").get<std::string>();
        auto outcome = outcome_from_string(sj.at("outcome").get<std::string>());
        if (!outcome) throw std::runtime_error("report json: bad outcome");
        s.outcome = *outcome;
        s.step_index = sj.at("step_index").get<int>();
        s.detail = sj.at("detail").get<std::string>();
        for (const json& entry : sj.at("trace")) s.trace.push_back(trace_entry_from_json(entry));
        report.scenarios.push_back(std::move(s));
    }
    for (const json& aj : j.at("analysis")) {
        AnalysisReport a;
        a.scenario_id = aj.at("scenario_id").get<std::string>();
        a.initial = aj.at("initial").get<std::vector<std::string>>();
        a.closure = aj.at("closure").get<std::vector<std::string>>();
        for (auto it = aj.at("witnesses").begin(); it != aj.at("witnesses").end(); ++it)
            a.witnesses[it.key()] = it.value().get<std::vector<std::string>>();
        if (!aj.at("agrees").is_null()) a.agrees = aj.at("agrees").get<bool>();
        report.analysis.push_back(std::move(a));
    }
    for (const json& tj : j.at("threats")) {
        auto system = component_from_string(tj.at("system").get<std::string>());
        if (!system) throw std::runtime_error("report json: bad system component");
        report.threats.push_back(ThreatEntry{*system,
                                             tj.at("potential_flaw").get<std::string>(),
                                             tj.at("threat_description").get<std::string>(),
                                             tj.at("mitigation").get<std::string>()});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

namespace report_detail {

inline std::string pad(const std::string& s, size_t width) {
    return s.size() >= width ? s + "  " : s + std::string(width - s.size(), ' ');
}

}  // namespace report_detail

inline std::string render_threats_text(const std::vector<ThreatEntry>& threats) {
    using report_detail::pad;
    std::ostringstream out;
    size_t w_sys = 12, w_flaw = 22, w_threat = 46;
    out << pad("System", w_sys) << pad("Potential Flaw", w_flaw)
        << pad("Threat Description", w_threat) << "Mitigation\n";
    out << std::string(w_sys + w_flaw + w_threat + 30, '-') << "\n";
    for (const ThreatEntry& t : threats)
        out << pad(to_string(t.system), w_sys) << pad(t.potential_flaw, w_flaw)
            << pad(t.threat_description, w_threat) << t.mitigation << "\n";
    return out.str();
}

inline std::string render_report_text(const RunReport& report) {
    using report_detail::pad;
    std::ostringstream out;
    out << "fixture digest: " << report.fixture_digest << "\n";
    out << "policy digest:  " << report.policy_digest << "\n\n";

    out << pad("Scenario", 22) << pad("Outcome", 10) << pad("At step", 9) << "Detail\n";
    out << std::string(70, '-') << "\n";
    for (const ScenarioReport& s : report.scenarios) {
        std::string at = s.step_index < 0 ? "-" : std::to_string(s.step_index);
        out << pad(s.id, 22) << pad(to_string(s.outcome), 10) << pad(at, 9) << s.detail << "\n";
    }
    out << "\n";

    for (const ScenarioReport& s : report.scenarios) {
        out << s.id << " trace:\n";
        for (size_t i = 0; i < s.trace.size(); ++i) {
            const TraceEntry& entry = s.trace[i];
            out << "  " << i << ". " << action_kind_name(entry.action.value) << " -> "
                << to_string(entry.result.status);
            if (!entry.result.detail.empty()) out << " (" << entry.result.detail << ")";
            out << "\n";
        }
    }
    out << "\n";

    for (const AnalysisReport& a : report.analysis) {
        out << a.scenario_id << " analysis:\n";
        out << "  initial:";
        for (const std::string& c : a.initial) out << " " << c;
        out << "\n  closure:";
        for (const std::string& c : a.closure) out << " " << c;
        out << "\n";
        for (const auto& [cap, path] : a.witnesses) {
            out << "  witness " << cap << ":";
            for (const std::string& rule : path) out << " " << rule;
            out << "\n";
        }
        if (a.agrees) out << "  analyzer agrees: " << (*a.agrees ? "true" : "false") << "\n";
    }

    if (!report.threats.empty()) {
        out << "\nThreats relevant to achieved goals:\n";
        out << render_threats_text(report.threats);
    }
    return out.str();
}

}  // namespace sscs
