#pragma once

// Scenarios: a prerequisite credential, an ordered action list, and a goal
// predicate. The runner executes steps through the action engine, stopping
// at the first non-applied result; the goal is evaluated once, after the
// final step. The four built-in attacks ship both as code and as files.

#include <string>
#include <vector>

#include "sscs/engine.hpp"
#include "sscs/fixture.hpp"
#include "sscs/model.hpp"
#include "sscs/policy.hpp"
#include "sscs/yaml.hpp"

namespace sscs {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Goals
// ---------------------------------------------------------------------------

enum class GoalKind {
    TopicDataRead,
    PayloadRouteServed,
    ExternallyReachable,
    ClusterAdminObtained,
    CrossNamespacePodDeleted,
};

inline std::string to_string(GoalKind k) {
    switch (k) {
        case GoalKind::TopicDataRead: return "topic-data-read";
        case GoalKind::PayloadRouteServed: return "payload-route-served";
        case GoalKind::ExternallyReachable: return "externally-reachable";
        case GoalKind::ClusterAdminObtained: return "cluster-admin-obtained";
        case GoalKind::CrossNamespacePodDeleted: return "cross-namespace-pod-deleted";
    }
    return "?";
}

inline std::optional<GoalKind> goal_kind_from_string(const std::string& s) {
    for (GoalKind k : {GoalKind::TopicDataRead, GoalKind::PayloadRouteServed,
                       GoalKind::ExternallyReachable, GoalKind::ClusterAdminObtained,
                       GoalKind::CrossNamespacePodDeleted})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

struct GoalAtom {
    GoalKind kind = GoalKind::ClusterAdminObtained;
    std::string topic;    // TopicDataRead
    std::string path;     // PayloadRouteServed
    std::string file;     // PayloadRouteServed
    std::string service;  // ExternallyReachable, "namespace/name"

    friend bool operator==(const GoalAtom&, const GoalAtom&) = default;
};

// Conjunction of atoms; every atom must hold on the final state and trace.
struct GoalPredicate {
    std::vector<GoalAtom> atoms;

    friend bool operator==(const GoalPredicate&, const GoalPredicate&) = default;
};

// ---------------------------------------------------------------------------
// Scenario and verdict
// ---------------------------------------------------------------------------

struct PrerequisiteCredential {
    std::string subject;
    CredentialLevel level = CredentialLevel::ServiceAccount;

    friend bool operator==(const PrerequisiteCredential&, const PrerequisiteCredential&) = default;
};

struct Scenario {
    std::string id;
    std::string title;
    PrerequisiteCredential prerequisite;
    std::vector<Action> steps;
    GoalPredicate goal;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class ScenarioOutcome { Achieved, Blocked, Denied, Failed };

inline std::string to_string(ScenarioOutcome o) {
    switch (o) {
        case ScenarioOutcome::Achieved: return "achieved";
        case ScenarioOutcome::Blocked: return "blocked";
        case ScenarioOutcome::Denied: return "denied";
        case ScenarioOutcome::Failed: return "failed";
    }
    return "?";
}

struct TraceEntry {
    Action action;
    ActionResult result;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct ScenarioVerdict {
    ScenarioOutcome outcome = ScenarioOutcome::Failed;
    // Index of the first non-applied step for Blocked/Denied/Failed; equals
    // the step count when every step applied but the goal did not hold.
    int step_index = -1;
    std::string detail;  // blocking policy id, denial context, or failure reason
    std::vector<TraceEntry> trace;
    ClusterState final_state;
    Session final_session;

    bool achieved() const { return outcome == ScenarioOutcome::Achieved; }
};

// ---------------------------------------------------------------------------
// Prerequisite resolution
// ---------------------------------------------------------------------------

inline Session resolve_prerequisite(const ClusterState& fixture,
                                    const PrerequisiteCredential& pre) {
    switch (pre.level) {
        case CredentialLevel::ServiceAccount:
            if (!fixture.find_service_account(pre.subject))
                throw ConfigError("prerequisite service account " + pre.subject +
                                  " not in fixture");
            break;
        case CredentialLevel::JenkinsUser:
            if (!fixture.ci_server.find_user(pre.subject))
                throw ConfigError("prerequisite CI user " + pre.subject + " not in fixture");
            break;
        case CredentialLevel::User:
            if (!is_known_principal(fixture, Credential{pre.subject, CredentialLevel::User}))
                throw ConfigError("prerequisite user " + pre.subject + " not in fixture");
            break;
        case CredentialLevel::ClusterAdmin:
        case CredentialLevel::NodeRoot:
            break;  // possession of the credential is the authority
    }
    return Session::start(Credential{pre.subject, pre.level});
}

// ---------------------------------------------------------------------------
// Goal evaluation
// ---------------------------------------------------------------------------

namespace scenario_detail {

inline bool consumed_topic(const std::vector<TraceEntry>& trace, const std::string& topic) {
    for (const TraceEntry& entry : trace) {
        const auto* consume = std::get_if<ConsumeTopic>(&entry.action.value);
        if (!consume || consume->topic != topic || !entry.result.applied()) continue;
        const auto* records = std::get_if<RecordsObservation>(&entry.result.observation);
        if (records && !records->records.empty()) return true;
    }
    return false;
}

inline bool payload_route_served(const ClusterState& state,
                                 const std::vector<TraceEntry>& trace, const std::string& path,
                                 const std::string& file) {
    for (const TraceEntry& entry : trace) {
        const auto* trigger = std::get_if<TriggerPayloadRoute>(&entry.action.value);
        if (!trigger || trigger->url_path != path || !entry.result.applied()) continue;
        const auto* contents = std::get_if<FileContentsObservation>(&entry.result.observation);
        if (!contents) continue;
        const Service* svc = state.find_service(trigger->namespace_, trigger->service);
        if (!svc) continue;
        for (const Pod* pod : state.pods_backing(*svc)) {
            const Image* image = state.registry.find(pod->image);
            if (!image) continue;
            auto route = image->payload_routes.find(path);
            if (route != image->payload_routes.end() && route->second == file) return true;
        }
    }
    return false;
}

inline bool cross_namespace_pod_deleted(const ClusterState& final_state,
                                        const ClusterState& fixture,
                                        const PrerequisiteCredential& pre,
                                        const std::vector<TraceEntry>& trace) {
    Session initial = Session::start(Credential{pre.subject, pre.level});
    for (const TraceEntry& entry : trace) {
        const auto* del = std::get_if<DeletePod>(&entry.action.value);
        if (!del || !entry.result.applied()) continue;
        // The deletion landed somewhere the starting credential could not
        // reach on its own.
        Authz authz =
            authorize(fixture, initial, Verb::Delete, ResourceKind::Pod, del->namespace_);
        if (authz != Authz::Allow && !final_state.find_pod(del->namespace_, del->pod))
            return true;
    }
    return false;
}

inline bool goal_holds(const GoalPredicate& goal, const ClusterState& fixture,
                       const PrerequisiteCredential& pre, const ClusterState& final_state,
                       const Session& final_session, const std::vector<TraceEntry>& trace) {
    for (const GoalAtom& atom : goal.atoms) {
        switch (atom.kind) {
            case GoalKind::TopicDataRead:
                if (!consumed_topic(trace, atom.topic)) return false;
                break;
            case GoalKind::PayloadRouteServed:
                if (!payload_route_served(final_state, trace, atom.path, atom.file))
                    return false;
                break;
            case GoalKind::ExternallyReachable: {
                const Service* svc = final_state.find_service_qualified(atom.service);
                if (!svc || !reachable(final_state, Location::external(), *svc)) return false;
                break;
            }
            case GoalKind::ClusterAdminObtained:
                if (!final_session.has_cluster_admin()) return false;
                break;
            case GoalKind::CrossNamespacePodDeleted:
                if (!cross_namespace_pod_deleted(final_state, fixture, pre, trace)) return false;
                break;
        }
    }
    return true;
}

}  // namespace scenario_detail

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

inline ScenarioVerdict run_scenario(const ClusterState& fixture, const Scenario& scenario,
                                    const PolicySet& policy) {
    if (scenario.steps.empty()) throw ConfigError("scenario " + scenario.id + " has no steps");
    ScenarioVerdict verdict;
    verdict.final_state = fixture;
    verdict.final_session = resolve_prerequisite(fixture, scenario.prerequisite);

    for (size_t i = 0; i < scenario.steps.size(); ++i) {
        const Action& action = scenario.steps[i];
        ActionResult result =
            apply_action(verdict.final_state, verdict.final_session, action, policy);
        verdict.trace.push_back(TraceEntry{action, result});
        if (result.applied()) continue;
        verdict.step_index = static_cast<int>(i);
        verdict.detail = result.detail;
        switch (result.status) {
            case ActionStatus::BlockedPolicy: verdict.outcome = ScenarioOutcome::Blocked; break;
            case ActionStatus::DeniedRBAC: verdict.outcome = ScenarioOutcome::Denied; break;
            default: verdict.outcome = ScenarioOutcome::Failed; break;
        }
        return verdict;
    }

    if (scenario_detail::goal_holds(scenario.goal, fixture, scenario.prerequisite,
                                    verdict.final_state, verdict.final_session, verdict.trace)) {
        verdict.outcome = ScenarioOutcome::Achieved;
        verdict.step_index = -1;
    } else {
        verdict.outcome = ScenarioOutcome::Failed;
        verdict.step_index = static_cast<int>(scenario.steps.size());
        verdict.detail = "goal not satisfied";
    }
    return verdict;
}

// ---------------------------------------------------------------------------
// Built-in scenarios
// ---------------------------------------------------------------------------

// Entity names of the canonical fixture the built-ins target.
namespace canonical {
inline constexpr const char* kBrokerNamespace = "kafka";
inline constexpr const char* kBrokerService = "strimzi-service";
inline constexpr const char* kBrokerTopic = "orders";
inline constexpr const char* kAppNamespace = "apps";
inline constexpr const char* kAppPod = "py-app";
inline constexpr const char* kAppService = "py-app-service";
inline constexpr const char* kBuildJob = "py-app-build";
inline constexpr const char* kAppImage = "py-producer-consumer";
inline constexpr const char* kDevNamespace = "developer";
inline constexpr const char* kDeployerAccount = "dev-sa";
inline constexpr const char* kCrudAccount = "crud-sa";
inline constexpr const char* kNetAccount = "net-sa";
inline constexpr const char* kCiAttacker = "ci-dev";
inline constexpr const char* kCiAdmin = "jenkins-admin";
inline constexpr const char* kToolboxImage = "toolbox";
}  // namespace canonical

inline Scenario builtin_retrieve_topic_data() {
    using namespace canonical;
    Scenario s;
    s.id = "retrieve-topic-data";
    s.title = "Retrieve information in topic";
    s.prerequisite = {kDeployerAccount, CredentialLevel::ServiceAccount};

    PodManifest siphon;
    siphon.name = "siphon-app";
    siphon.namespace_ = kBrokerNamespace;
    siphon.service_account = "default";
    siphon.app_label = "siphon";
    siphon.image = {kAppImage, "1.0"};

    s.steps = {
        {Authenticate{kDeployerAccount}, "confirm kubeconfig matches the target cluster"},
        {KubectlApply{siphon}, "kubectl apply -f siphon-app.yaml"},
        {KubectlExec{"siphon-app", kBrokerNamespace},
         "drive the deployed app from its front-end"},
        {Connect{kBrokerService, kBrokerNamespace},
         "kubectl get services -n kafka; dial the broker cluster IP"},
        {ConsumeTopic{kBrokerService, kBrokerNamespace, kBrokerTopic},
         "read every record the broker holds for the topic"},
    };
    s.goal.atoms = {GoalAtom{GoalKind::TopicDataRead, kBrokerTopic, "", "", ""}};
    return s;
}

inline Scenario builtin_cicd_backdoor() {
    using namespace canonical;
    Scenario s;
    s.id = "cicd-backdoor";
    s.title = "Manipulate CI build to install a backdoor";
    s.prerequisite = {kCiAttacker, CredentialLevel::JenkinsUser};

    EditBuildStep edit;
    edit.job = kBuildJob;
    edit.step_index = 1;
    edit.script = "inject-route /hack requirements.txt";
    edit.payload_route = "/hack";
    edit.payload_file = "requirements.txt";

    PodManifest deploy;
    deploy.name = kAppPod;
    deploy.namespace_ = kAppNamespace;
    deploy.service_account = "default";
    deploy.app_label = "py-app";
    deploy.image = {kAppImage, "latest"};

    s.steps = {
        {JenkinsLogin{kCiAttacker}, "log in to the CI server"},
        {edit, "edit the package step to append a disclosure route"},
        {RunBuild{kBuildJob}, "run the build job; the image picks up the payload"},
        {Authenticate{kCiAttacker}, "confirm kubeconfig matches the target cluster"},
        {PullImage{kAppImage, "latest"}, "docker pull of the freshly built image"},
        {DeployImage{deploy}, "kubectl apply -f py-app.yaml with the new image"},
        {TriggerPayloadRoute{kAppService, kAppNamespace, "/hack"},
         "browse to the app URL under /hack"},
    };
    s.goal.atoms = {GoalAtom{GoalKind::PayloadRouteServed, "", "/hack", "requirements.txt", ""}};
    return s;
}

inline Scenario builtin_expose_cluster_ip() {
    using namespace canonical;
    Scenario s;
    s.id = "expose-cluster-ip";
    s.title = "Expose internal cluster IP to external traffic";
    s.prerequisite = {kNetAccount, CredentialLevel::ServiceAccount};
    s.steps = {
        {Authenticate{kNetAccount}, "confirm kubeconfig matches the target cluster"},
        {AddNodePort{kBrokerService, kBrokerNamespace, 30500},
         "patch the service with a node-port ingress object"},
        {Connect{kBrokerService, kBrokerNamespace},
         "contact the newly exposed address from outside the cluster"},
    };
    s.goal.atoms = {GoalAtom{GoalKind::ExternallyReachable, "", "", "",
                             std::string(kBrokerNamespace) + "/" + kBrokerService}};
    return s;
}

inline Scenario builtin_hostpath_breakout() {
    using namespace canonical;
    Scenario s;
    s.id = "hostpath-breakout";
    s.title = "Host path namespace breakout";
    s.prerequisite = {kCrudAccount, CredentialLevel::ServiceAccount};

    PodManifest attack_pod;
    attack_pod.name = "attack-pod";
    attack_pod.namespace_ = kDevNamespace;
    attack_pod.service_account = "default";
    attack_pod.app_label = "attack";
    attack_pod.image = {kToolboxImage, "1.0"};
    attack_pod.volumes = {Volume{Volume::Kind::HostPath, "/", "/host"}};

    s.steps = {
        {Authenticate{kCrudAccount}, "confirm kubeconfig matches the target cluster"},
        {KubectlApply{attack_pod}, "kubectl apply -f attack-pod.yaml"},
        {KubectlExec{"attack-pod", kDevNamespace},
         "kubectl -n developer exec -it attack-pod bash"},
        {ChrootEscape{}, "chroot /host bash"},
        {ReadNodeKubeconfig{}, "read the node kubeconfig from the host filesystem"},
        {Authenticate{"kube-admin-node-1"},
         "kubectl --kubeconfig <node kubeconfig> get pods -A"},
        {DeletePod{kAppPod, kAppNamespace}, "kubectl delete pod py-app -n apps"},
    };
    s.goal.atoms = {GoalAtom{GoalKind::ClusterAdminObtained, "", "", "", ""},
                    GoalAtom{GoalKind::CrossNamespacePodDeleted, "", "", "", ""}};
    return s;
}

inline std::vector<Scenario> builtin_scenarios() {
    return {builtin_retrieve_topic_data(), builtin_cicd_backdoor(), builtin_expose_cluster_ip(),
            builtin_hostpath_breakout()};
}

// ---------------------------------------------------------------------------
// Scenario file format
// ---------------------------------------------------------------------------

namespace scenario_detail {

inline PodManifest parse_manifest(const yaml::Node& node) {
    PodManifest m;
    m.name = node.at("name").as_string();
    m.namespace_ = node.at("namespace").as_string();
    m.service_account = node.at("service_account").as_string();
    m.app_label = node.at("app").as_string();
    m.image = fixture_detail::parse_image_ref(node.at("image"));
    if (const yaml::Node* vols = node.find("volumes"))
        for (const yaml::Node& v : vols->items())
            m.volumes.push_back(fixture_detail::parse_volume(v));
    if (const yaml::Node* n = node.find("node")) m.node = n->as_string();
    return m;
}

inline yaml::Node emit_manifest(const PodManifest& m) {
    yaml::Node node = yaml::Node::mapping();
    node.set("name", yaml::scalar(m.name));
    node.set("namespace", yaml::scalar(m.namespace_));
    node.set("service_account", yaml::scalar(m.service_account));
    node.set("app", yaml::scalar(m.app_label));
    node.set("image", yaml::scalar(m.image.str()));
    yaml::Node vols = yaml::Node::sequence();
    for (const Volume& v : m.volumes) vols.push_back(fixture_detail::emit_volume(v));
    node.set("volumes", vols);
    if (!m.node.empty()) node.set("node", yaml::scalar(m.node));
    return node;
}

inline Action parse_action(const yaml::Node& node) {
    std::string kind = node.at("action").as_string();
    Action action;
    if (const yaml::Node* note = node.find("note")) action.note = note->as_string();

    if (kind == "authenticate") {
        action.value = Authenticate{node.at("subject").as_string()};
    } else if (kind == "kubectl-apply") {
        action.value = KubectlApply{parse_manifest(node.at("pod"))};
    } else if (kind == "kubectl-exec") {
        action.value =
            KubectlExec{node.at("pod").as_string(), node.at("namespace").as_string()};
    } else if (kind == "chroot-escape") {
        action.value = ChrootEscape{};
    } else if (kind == "read-node-kubeconfig") {
        action.value = ReadNodeKubeconfig{};
    } else if (kind == "add-node-port") {
        action.value = AddNodePort{node.at("service").as_string(),
                                   node.at("namespace").as_string(),
                                   static_cast<int>(node.at("node_port").as_int())};
    } else if (kind == "connect") {
        action.value =
            Connect{node.at("service").as_string(), node.at("namespace").as_string()};
    } else if (kind == "consume-topic") {
        action.value = ConsumeTopic{node.at("service").as_string(),
                                    node.at("namespace").as_string(),
                                    node.at("topic").as_string()};
    } else if (kind == "produce-topic") {
        action.value = ProduceTopic{node.at("service").as_string(),
                                    node.at("namespace").as_string(),
                                    node.at("topic").as_string(),
                                    node.at("record").as_string()};
    } else if (kind == "jenkins-login") {
        action.value = JenkinsLogin{node.at("user").as_string()};
    } else if (kind == "edit-build-step") {
        EditBuildStep edit;
        edit.job = node.at("job").as_string();
        edit.step_index = static_cast<int>(node.at("step_index").as_int());
        edit.script = node.at("script").as_string();
        if (const yaml::Node* r = node.find("payload_route")) edit.payload_route = r->as_string();
        if (const yaml::Node* f = node.find("payload_file")) edit.payload_file = f->as_string();
        action.value = edit;
    } else if (kind == "run-build") {
        action.value = RunBuild{node.at("job").as_string()};
    } else if (kind == "pull-image") {
        action.value = PullImage{node.at("image").as_string(), node.at("tag").as_string()};
    } else if (kind == "deploy-image") {
        action.value = DeployImage{parse_manifest(node.at("pod"))};
    } else if (kind == "trigger-payload-route") {
        action.value = TriggerPayloadRoute{node.at("service").as_string(),
                                           node.at("namespace").as_string(),
                                           node.at("path").as_string()};
    } else if (kind == "delete-pod") {
        action.value =
            DeletePod{node.at("pod").as_string(), node.at("namespace").as_string()};
    } else {
        std::string valid;
        for (const std::string& name : action_kind_names()) {
            if (!valid.empty()) valid += ", ";
            valid += name;
        }
        throw yaml::ParseError("unknown action kind \"" + kind + "\" (valid kinds: " + valid + ")",
                               node.line());
    }
    return action;
}

inline yaml::Node emit_action(const Action& action) {
    yaml::Node node = yaml::Node::mapping();
    node.set("action", yaml::scalar(action_kind_name(action.value)));

    struct Visitor {
        yaml::Node& node;
        void operator()(const Authenticate& a) { node.set("subject", yaml::scalar(a.subject)); }
        void operator()(const KubectlApply& a) { node.set("pod", emit_manifest(a.manifest)); }
        void operator()(const KubectlExec& a) {
            node.set("pod", yaml::scalar(a.pod));
            node.set("namespace", yaml::scalar(a.namespace_));
        }
        void operator()(const ChrootEscape&) {}
        void operator()(const ReadNodeKubeconfig&) {}
        void operator()(const AddNodePort& a) {
            node.set("service", yaml::scalar(a.service));
            node.set("namespace", yaml::scalar(a.namespace_));
            node.set("node_port", yaml::scalar(a.node_port));
        }
        void operator()(const Connect& a) {
            node.set("service", yaml::scalar(a.service));
            node.set("namespace", yaml::scalar(a.namespace_));
        }
        void operator()(const ConsumeTopic& a) {
            node.set("service", yaml::scalar(a.service));
            node.set("namespace", yaml::scalar(a.namespace_));
            node.set("topic", yaml::scalar(a.topic));
        }
        void operator()(const ProduceTopic& a) {
            node.set("service", yaml::scalar(a.service));
            node.set("namespace", yaml::scalar(a.namespace_));
            node.set("topic", yaml::scalar(a.topic));
            node.set("record", yaml::scalar(a.record));
        }
        void operator()(const JenkinsLogin& a) { node.set("user", yaml::scalar(a.user)); }
        void operator()(const EditBuildStep& a) {
            node.set("job", yaml::scalar(a.job));
            node.set("step_index", yaml::scalar(a.step_index));
            node.set("script", yaml::scalar(a.script));
            if (a.payload_route) node.set("payload_route", yaml::scalar(*a.payload_route));
            if (a.payload_file) node.set("payload_file", yaml::scalar(*a.payload_file));
        }
        void operator()(const RunBuild& a) { node.set("job", yaml::scalar(a.job)); }
        void operator()(const PullImage& a) {
            node.set("image", yaml::scalar(a.image));
            node.set("tag", yaml::scalar(a.tag));
        }
        void operator()(const DeployImage& a) { node.set("pod", emit_manifest(a.manifest)); }
        void operator()(const TriggerPayloadRoute& a) {
            node.set("service", yaml::scalar(a.service));
            node.set("namespace", yaml::scalar(a.namespace_));
            node.set("path", yaml::scalar(a.url_path));
        }
        void operator()(const DeletePod& a) {
            node.set("pod", yaml::scalar(a.pod));
            node.set("namespace", yaml::scalar(a.namespace_));
        }
    };
    std::visit(Visitor{node}, action.value);
    if (!action.note.empty()) node.set("note", yaml::scalar(action.note));
    return node;
}

inline GoalAtom parse_goal_atom(const yaml::Node& node) {
    GoalAtom atom;
    std::string kind = node.at("kind").as_string();
    auto parsed = goal_kind_from_string(kind);
    if (!parsed)
        throw yaml::ParseError(
            "unknown goal kind \"" + kind +
                "\" (valid kinds: topic-data-read, payload-route-served, externally-reachable, "
                "cluster-admin-obtained, cross-namespace-pod-deleted)",
            node.line());
    atom.kind = *parsed;
    switch (atom.kind) {
        case GoalKind::TopicDataRead: atom.topic = node.at("topic").as_string(); break;
        case GoalKind::PayloadRouteServed:
            atom.path = node.at("path").as_string();
            atom.file = node.at("file").as_string();
            break;
        case GoalKind::ExternallyReachable: atom.service = node.at("service").as_string(); break;
        case GoalKind::ClusterAdminObtained:
        case GoalKind::CrossNamespacePodDeleted: break;
    }
    return atom;
}

inline yaml::Node emit_goal_atom(const GoalAtom& atom) {
    yaml::Node node = yaml::Node::mapping();
    node.set("kind", yaml::scalar(to_string(atom.kind)));
    switch (atom.kind) {
        case GoalKind::TopicDataRead: node.set("topic", yaml::scalar(atom.topic)); break;
        case GoalKind::PayloadRouteServed:
            node.set("path", yaml::scalar(atom.path));
            node.set("file", yaml::scalar(atom.file));
            break;
        case GoalKind::ExternallyReachable:
            node.set("service", yaml::scalar(atom.service));
            break;
        case GoalKind::ClusterAdminObtained:
        case GoalKind::CrossNamespacePodDeleted: break;
    }
    return node;
}

}  // namespace scenario_detail

inline Scenario load_scenario(const std::string& text) {
    yaml::Node doc = yaml::parse(text);
    Scenario s;
    s.id = doc.at("id").as_string();
    s.title = doc.at("title").as_string();
    const yaml::Node& pre = doc.at("prerequisite");
    s.prerequisite.subject = pre.at("subject").as_string();
    std::string level = pre.at("level").as_string();
    auto parsed_level = credential_level_from_string(level);
    if (!parsed_level)
        throw yaml::ParseError("unknown credential level \"" + level + "\"", pre.line());
    s.prerequisite.level = *parsed_level;
    for (const yaml::Node& step : doc.at("steps").items())
        s.steps.push_back(scenario_detail::parse_action(step));
    if (s.steps.empty()) throw yaml::ParseError("scenario has no steps", doc.line());
    for (const yaml::Node& atom : doc.at("goal").items())
        s.goal.atoms.push_back(scenario_detail::parse_goal_atom(atom));
    if (s.goal.atoms.empty()) throw yaml::ParseError("scenario goal is empty", doc.line());
    return s;
}

inline Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

inline std::string serialize_scenario(const Scenario& s) {
    yaml::Node doc = yaml::Node::mapping();
    doc.set("id", yaml::scalar(s.id));
    doc.set("title", yaml::scalar(s.title));
    yaml::Node pre = yaml::Node::mapping();
    pre.set("subject", yaml::scalar(s.prerequisite.subject));
    pre.set("level", yaml::scalar(to_string(s.prerequisite.level)));
    doc.set("prerequisite", pre);
    yaml::Node steps = yaml::Node::sequence();
    for (const Action& a : s.steps) steps.push_back(scenario_detail::emit_action(a));
    doc.set("steps", steps);
    yaml::Node goal = yaml::Node::sequence();
    for (const GoalAtom& atom : s.goal.atoms)
        goal.push_back(scenario_detail::emit_goal_atom(atom));
    doc.set("goal", goal);
    return yaml::emit(doc);
}

}  // namespace sscs
