#pragma once

// Abstract capability-reachability analysis. Attacker abilities are modeled
// as capability atoms; transition rules (transcribed from the engine's
// action semantics at the capability level) are instantiated against a
// fixture and the active policy, then closed to a fixed point. Witness paths
// record a minimal rule chain per reached capability. The analysis is an
// independent oracle for scenario outcomes.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sscs/model.hpp"
#include "sscs/policy.hpp"
#include "sscs/scenario.hpp"

namespace sscs {

// ---------------------------------------------------------------------------
// Capabilities
// ---------------------------------------------------------------------------

enum class CapabilityKind {
    DeployInNamespace,  // create pods in a namespace the actor is not homed in
    JenkinsEditAccess,
    IngressCreateOn,    // add ingress objects to a service ("ns/name")
    CrudIn,             // create pods in a namespace as a same-namespace or
                        // non-service-account principal
    InClusterNetwork,
    ShellInPod,         // shell inside an attacker-controlled pod in a namespace
    NodeRoot,
    ClusterAdmin,
    TopicRead,
    BackdooredImage,    // payload routes baked into a job's output image
    ExternalExposure,   // attacker-added external exposure of a service
    CrossNamespaceDelete,
};

struct Capability {
    CapabilityKind kind = CapabilityKind::ClusterAdmin;
    std::string param;  // namespace, "ns/service", node, topic, or job name

    static Capability of(CapabilityKind kind, std::string param = "") {
        return Capability{kind, std::move(param)};
    }

    std::string str() const;

    friend bool operator==(const Capability&, const Capability&) = default;
    friend auto operator<=>(const Capability&, const Capability&) = default;
};

inline std::string capability_kind_name(CapabilityKind k) {
    switch (k) {
        case CapabilityKind::DeployInNamespace: return "DeployInNamespace";
        case CapabilityKind::JenkinsEditAccess: return "JenkinsEditAccess";
        case CapabilityKind::IngressCreateOn: return "IngressCreateOn";
        case CapabilityKind::CrudIn: return "CrudIn";
        case CapabilityKind::InClusterNetwork: return "InClusterNetwork";
        case CapabilityKind::ShellInPod: return "ShellInPod";
        case CapabilityKind::NodeRoot: return "NodeRoot";
        case CapabilityKind::ClusterAdmin: return "ClusterAdmin";
        case CapabilityKind::TopicRead: return "TopicRead";
        case CapabilityKind::BackdooredImage: return "BackdooredImage";
        case CapabilityKind::ExternalExposure: return "ExternalExposure";
        case CapabilityKind::CrossNamespaceDelete: return "CrossNamespaceDelete";
    }
    return "?";
}

inline bool capability_kind_has_param(CapabilityKind k) {
    switch (k) {
        case CapabilityKind::JenkinsEditAccess:
        case CapabilityKind::InClusterNetwork:
        case CapabilityKind::ClusterAdmin:
        case CapabilityKind::CrossNamespaceDelete: return false;
        default: return true;
    }
}

inline std::string Capability::str() const {
    if (!capability_kind_has_param(kind)) return capability_kind_name(kind);
    return capability_kind_name(kind) + "(" + param + ")";
}

inline std::vector<std::string> capability_kind_names() {
    std::vector<std::string> out;
    for (CapabilityKind k :
         {CapabilityKind::DeployInNamespace, CapabilityKind::JenkinsEditAccess,
          CapabilityKind::IngressCreateOn, CapabilityKind::CrudIn,
          CapabilityKind::InClusterNetwork, CapabilityKind::ShellInPod, CapabilityKind::NodeRoot,
          CapabilityKind::ClusterAdmin, CapabilityKind::TopicRead,
          CapabilityKind::BackdooredImage, CapabilityKind::ExternalExposure,
          CapabilityKind::CrossNamespaceDelete})
        out.push_back(capability_kind_name(k));
    return out;
}

// Parses "Kind" or "Kind(param)". Throws ConfigError naming valid kinds.
inline Capability parse_capability(const std::string& text) {
    std::string name = text;
    std::string param;
    size_t open = text.find('(');
    if (open != std::string::npos) {
        if (text.back() != ')') throw ConfigError("malformed capability \"" + text + "\"");
        name = text.substr(0, open);
        param = text.substr(open + 1, text.size() - open - 2);
    }
    for (CapabilityKind k :
         {CapabilityKind::DeployInNamespace, CapabilityKind::JenkinsEditAccess,
          CapabilityKind::IngressCreateOn, CapabilityKind::CrudIn,
          CapabilityKind::InClusterNetwork, CapabilityKind::ShellInPod, CapabilityKind::NodeRoot,
          CapabilityKind::ClusterAdmin, CapabilityKind::TopicRead,
          CapabilityKind::BackdooredImage, CapabilityKind::ExternalExposure,
          CapabilityKind::CrossNamespaceDelete}) {
        if (capability_kind_name(k) != name) continue;
        if (capability_kind_has_param(k) && param.empty())
            throw ConfigError("capability " + name + " requires a parameter");
        if (!capability_kind_has_param(k) && !param.empty())
            throw ConfigError("capability " + name + " takes no parameter");
        return Capability{k, param};
    }
    std::string valid;
    for (const std::string& n : capability_kind_names()) {
        if (!valid.empty()) valid += ", ";
        valid += n;
    }
    throw ConfigError("unknown capability \"" + name + "\" (valid names: " + valid + ")");
}

using CapabilitySet = std::set<Capability>;

// ---------------------------------------------------------------------------
// Transition rules
// ---------------------------------------------------------------------------

struct TransitionRule {
    std::string id;
    CapabilitySet requires_;
    Capability yields;

    friend bool operator==(const TransitionRule&, const TransitionRule&) = default;
};

struct EscalationGraph {
    CapabilitySet initial;
    CapabilitySet reached;  // closure, includes initial
    std::vector<TransitionRule> rules;  // active (guard-passing) instantiated rules
    // Minimal rule chain deriving each non-initial reached capability; ties
    // broken by lexicographic rule-id sequence.
    std::map<Capability, std::vector<std::string>> witness;

    bool contains(const Capability& c) const { return reached.count(c) != 0; }
};

namespace analyzer_detail {

// Instantiates the transition rule set against a fixture and policy. Rules
// whose guard fails under the policy or fixture are omitted. Guards are
// actor-free: actor-sensitive policy aspects are encoded in which initial
// capabilities the credential mapping assigns.
inline std::vector<TransitionRule> instantiate_rules(const ClusterState& fixture,
                                                     const PolicySet& policy) {
    std::vector<TransitionRule> rules;
    auto add = [&](std::string id, CapabilitySet requires_, Capability yields) {
        rules.push_back(TransitionRule{std::move(id), std::move(requires_), std::move(yields)});
    };

    bool ns_scoped = policy.has_kind(PolicyKind::NamespaceScopedServiceAccounts);
    bool jenkins_restricted = policy.has_kind(PolicyKind::JenkinsBuildEditRestriction);
    bool hostpath_restricted = policy.has_kind(PolicyKind::HostPathRestriction);
    auto ingress_protected = [&](const std::string& qualified) {
        for (const PolicyRule& r : policy.rules)
            if (r.kind == PolicyKind::IngressObjectRestriction &&
                policy_detail::contains(r.protected_services, qualified))
                return true;
        return false;
    };

    for (const std::string& ns : fixture.namespaces) {
        Capability shell = Capability::of(CapabilityKind::ShellInPod, ns);
        // Same-namespace (or policy-exempt) deploys are never blocked by the
        // namespace-scoping rule; cross-namespace deploys are.
        add("deploy-own-pod:" + ns, {Capability::of(CapabilityKind::CrudIn, ns)}, shell);
        if (!ns_scoped)
            add("deploy-foreign-pod:" + ns,
                {Capability::of(CapabilityKind::DeployInNamespace, ns)}, shell);

        add("pod-network:" + ns, {shell}, Capability::of(CapabilityKind::InClusterNetwork));

        if (!hostpath_restricted) {
            // Escaping needs a shell in a pod the actor could have deployed
            // with a root hostPath volume. Under admin-only mode the edge is
            // equally dead: an actor who still needs it is not cluster-admin.
            for (const Node& node : fixture.nodes) {
                Capability root = Capability::of(CapabilityKind::NodeRoot, node.name);
                add("hostpath-escape:" + ns + ":" + node.name,
                    {shell, Capability::of(CapabilityKind::CrudIn, ns)}, root);
                if (!ns_scoped)
                    add("hostpath-escape-foreign:" + ns + ":" + node.name,
                        {shell, Capability::of(CapabilityKind::DeployInNamespace, ns)}, root);
            }
        }

        add("admin-crud:" + ns, {Capability::of(CapabilityKind::ClusterAdmin)},
            Capability::of(CapabilityKind::CrudIn, ns));
    }

    for (const Node& node : fixture.nodes)
        add("node-kubeconfig:" + node.name,
            {Capability::of(CapabilityKind::NodeRoot, node.name)},
            Capability::of(CapabilityKind::ClusterAdmin));

    add("admin-delete", {Capability::of(CapabilityKind::ClusterAdmin)},
        Capability::of(CapabilityKind::CrossNamespaceDelete));

    for (const Service& svc : fixture.services) {
        std::string qualified = svc.qualified_name();
        Capability exposure = Capability::of(CapabilityKind::ExternalExposure, qualified);
        if (svc.exposure.internal_only() && !ingress_protected(qualified)) {
            add("expose-service:" + qualified,
                {Capability::of(CapabilityKind::IngressCreateOn, qualified)}, exposure);
            add("admin-expose:" + qualified, {Capability::of(CapabilityKind::ClusterAdmin)},
                exposure);
        }
    }

    if (fixture.broker.present()) {
        for (const auto& [topic, records] : fixture.broker.topics) {
            Capability read = Capability::of(CapabilityKind::TopicRead, topic);
            add("topic-read-internal:" + topic,
                {Capability::of(CapabilityKind::InClusterNetwork)}, read);
            add("topic-read-exposed:" + topic,
                {Capability::of(CapabilityKind::ExternalExposure, fixture.broker.service_ref)},
                read);
        }
    }

    if (!jenkins_restricted)
        for (const auto& [job_name, job] : fixture.ci_server.jobs)
            add("backdoor-build:" + job_name,
                {Capability::of(CapabilityKind::JenkinsEditAccess)},
                Capability::of(CapabilityKind::BackdooredImage, job_name));

    return rules;
}

struct Witness {
    std::vector<std::string> path;
    bool known = false;

    // Shorter paths win; equal lengths break ties lexicographically.
    bool improves(const std::vector<std::string>& candidate) const {
        if (!known) return true;
        if (candidate.size() != path.size()) return candidate.size() < path.size();
        return candidate < path;
    }
};

}  // namespace analyzer_detail

// Fixed-point closure of the instantiated rule set from the initial
// capabilities. Terminates: the capability universe is finite and the
// closure grows monotonically.
inline EscalationGraph analyze(const ClusterState& fixture, const CapabilitySet& initial,
                               const PolicySet& policy) {
    using analyzer_detail::Witness;
    EscalationGraph graph;
    graph.initial = initial;
    graph.reached = initial;
    graph.rules = analyzer_detail::instantiate_rules(fixture, policy);
    std::sort(graph.rules.begin(), graph.rules.end(),
              [](const TransitionRule& a, const TransitionRule& b) { return a.id < b.id; });

    std::map<Capability, Witness> best;
    for (const Capability& c : initial) best[c] = Witness{{}, true};

    bool changed = true;
    while (changed) {
        changed = false;
        for (const TransitionRule& rule : graph.rules) {
            bool ready = true;
            for (const Capability& req : rule.requires_)
                if (!graph.reached.count(req)) ready = false;
            if (!ready) continue;

            // Candidate witness: requirement witnesses merged in requires
            // order (deduplicated), then this rule.
            std::vector<std::string> candidate;
            std::set<std::string> seen;
            for (const Capability& req : rule.requires_)
                for (const std::string& id : best[req].path)
                    if (seen.insert(id).second) candidate.push_back(id);
            if (seen.count(rule.id)) continue;  // rule already part of the chain
            candidate.push_back(rule.id);

            Witness& w = best[rule.yields];
            if (w.improves(candidate)) {
                w.path = candidate;
                w.known = true;
                graph.reached.insert(rule.yields);
                changed = true;
            }
        }
    }

    for (const Capability& c : graph.reached)
        if (!initial.count(c)) graph.witness[c] = best[c].path;
    return graph;
}

// ---------------------------------------------------------------------------
// Credential-to-capability mapping
// ---------------------------------------------------------------------------

// Initial capabilities a credential carries against a fixture. The mapping is
// policy-free; policy effects live in the rule guards. Actor-sensitive policy
// semantics are reflected in the capability split: CrudIn covers deploys the
// namespace-scoping rule never blocks (same-namespace service accounts and
// non-service-account principals), DeployInNamespace covers the cross-
// namespace grants it does block.
inline CapabilitySet map_credential(const ClusterState& fixture, const Credential& cred) {
    CapabilitySet caps;
    if (cred.level == CredentialLevel::ClusterAdmin) {
        caps.insert(Capability::of(CapabilityKind::ClusterAdmin));
        return caps;
    }
    Session probe = Session::start(cred);
    const ServiceAccount* sa = cred.level == CredentialLevel::ServiceAccount
                                   ? fixture.find_service_account(cred.subject)
                                   : nullptr;
    for (const std::string& ns : fixture.namespaces) {
        if (authorize(fixture, probe, Verb::Create, ResourceKind::Pod, ns) != Authz::Allow)
            continue;
        bool scoped_rule_applies = sa && sa->namespace_ != ns;
        caps.insert(Capability::of(
            scoped_rule_applies ? CapabilityKind::DeployInNamespace : CapabilityKind::CrudIn,
            ns));
    }
    for (const Service& svc : fixture.services) {
        if (authorize(fixture, probe, Verb::Update, ResourceKind::Service, svc.namespace_) ==
                Authz::Allow ||
            authorize(fixture, probe, Verb::Create, ResourceKind::Service, svc.namespace_) ==
                Authz::Allow)
            caps.insert(Capability::of(CapabilityKind::IngressCreateOn, svc.qualified_name()));
    }
    if (cred.level == CredentialLevel::JenkinsUser && fixture.ci_server.find_user(cred.subject))
        caps.insert(Capability::of(CapabilityKind::JenkinsEditAccess));
    return caps;
}

// ---------------------------------------------------------------------------
// Simulator agreement
// ---------------------------------------------------------------------------

// Capabilities a scenario goal maps to, or nullopt when the goal has no
// capability reading (the scenario is then unsupported by the analyzer).
inline std::optional<CapabilitySet> map_goal(const Scenario& scenario) {
    CapabilitySet caps;
    for (const GoalAtom& atom : scenario.goal.atoms) {
        switch (atom.kind) {
            case GoalKind::TopicDataRead:
                caps.insert(Capability::of(CapabilityKind::TopicRead, atom.topic));
                break;
            case GoalKind::ExternallyReachable:
                caps.insert(Capability::of(CapabilityKind::ExternalExposure, atom.service));
                break;
            case GoalKind::ClusterAdminObtained:
                caps.insert(Capability::of(CapabilityKind::ClusterAdmin));
                break;
            case GoalKind::CrossNamespacePodDeleted:
                caps.insert(Capability::of(CapabilityKind::CrossNamespaceDelete));
                break;
            case GoalKind::PayloadRouteServed: {
                // The payload capability is per build job; recover the job
                // from the scenario's build step.
                std::string job;
                for (const Action& step : scenario.steps)
                    if (const auto* run = std::get_if<RunBuild>(&step.value)) job = run->job;
                if (job.empty()) return std::nullopt;
                caps.insert(Capability::of(CapabilityKind::BackdooredImage, job));
                break;
            }
        }
    }
    return caps;
}

// True iff the simulator verdict and the capability analysis agree on the
// scenario outcome under the given policy. Throws ConfigError for scenarios
// without a capability mapping.
inline bool agrees_with_simulator(const ClusterState& fixture, const Scenario& scenario,
                                  const PolicySet& policy) {
    std::optional<CapabilitySet> goal_caps = map_goal(scenario);
    if (!goal_caps)
        throw ConfigError("scenario " + scenario.id + " is not capability-mappable");

    ScenarioVerdict verdict = run_scenario(fixture, scenario, policy);

    CapabilitySet initial = map_credential(
        fixture, Credential{scenario.prerequisite.subject, scenario.prerequisite.level});
    EscalationGraph graph = analyze(fixture, initial, policy);
    bool reachable_goal = std::all_of(goal_caps->begin(), goal_caps->end(),
                                      [&](const Capability& c) { return graph.contains(c); });
    return verdict.achieved() == reachable_goal;
}

}  // namespace sscs
