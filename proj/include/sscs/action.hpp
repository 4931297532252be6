#pragma once

// The attacker/operator step alphabet and its result type. Every step is a
// typed value; the engine in engine.hpp gives each kind its transition
// semantics. Serialization to/from the scenario file format lives in
// scenario.hpp.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sscs/model.hpp"

namespace sscs {

// Pod manifest carried by deploy-style actions. An empty node name means the
// scheduler places the pod on the first fixture node.
struct PodManifest {
    std::string name;
    std::string namespace_;
    std::string service_account;
    std::string app_label;
    ImageRef image;
    std::vector<Volume> volumes;
    std::string node;

    bool has_host_path() const {
        return std::any_of(volumes.begin(), volumes.end(),
                           [](const Volume& v) { return v.kind == Volume::Kind::HostPath; });
    }

    friend bool operator==(const PodManifest&, const PodManifest&) = default;
};

struct Authenticate {
    std::string subject;  // resolved against the session's captured credentials
    friend bool operator==(const Authenticate&, const Authenticate&) = default;
};

struct KubectlApply {
    PodManifest manifest;
    friend bool operator==(const KubectlApply&, const KubectlApply&) = default;
};

struct KubectlExec {
    std::string pod;
    std::string namespace_;
    friend bool operator==(const KubectlExec&, const KubectlExec&) = default;
};

struct ChrootEscape {
    friend bool operator==(const ChrootEscape&, const ChrootEscape&) = default;
};

struct ReadNodeKubeconfig {
    friend bool operator==(const ReadNodeKubeconfig&, const ReadNodeKubeconfig&) = default;
};

struct AddNodePort {
    std::string service;
    std::string namespace_;
    int node_port = 0;
    friend bool operator==(const AddNodePort&, const AddNodePort&) = default;
};

struct Connect {
    std::string service;
    std::string namespace_;
    friend bool operator==(const Connect&, const Connect&) = default;
};

struct ConsumeTopic {
    std::string service;
    std::string namespace_;
    std::string topic;
    friend bool operator==(const ConsumeTopic&, const ConsumeTopic&) = default;
};

struct ProduceTopic {
    std::string service;
    std::string namespace_;
    std::string topic;
    std::string record;
    friend bool operator==(const ProduceTopic&, const ProduceTopic&) = default;
};

struct JenkinsLogin {
    std::string user;
    friend bool operator==(const JenkinsLogin&, const JenkinsLogin&) = default;
};

struct EditBuildStep {
    std::string job;
    int step_index = 0;
    std::string script;
    // Structured payload record; the engine never parses script text.
    std::optional<std::string> payload_route;
    std::optional<std::string> payload_file;
    friend bool operator==(const EditBuildStep&, const EditBuildStep&) = default;
};

struct RunBuild {
    std::string job;
    friend bool operator==(const RunBuild&, const RunBuild&) = default;
};

struct PullImage {
    std::string image;
    std::string tag;  // "latest" resolves to the most recent push
    friend bool operator==(const PullImage&, const PullImage&) = default;
};

struct DeployImage {
    PodManifest manifest;  // updates the pod's image if the pod already exists
    friend bool operator==(const DeployImage&, const DeployImage&) = default;
};

struct TriggerPayloadRoute {
    std::string service;
    std::string namespace_;
    std::string url_path;
    friend bool operator==(const TriggerPayloadRoute&, const TriggerPayloadRoute&) = default;
};

struct DeletePod {
    std::string pod;
    std::string namespace_;
    friend bool operator==(const DeletePod&, const DeletePod&) = default;
};

using ActionVariant =
    std::variant<Authenticate, KubectlApply, KubectlExec, ChrootEscape, ReadNodeKubeconfig,
                 AddNodePort, Connect, ConsumeTopic, ProduceTopic, JenkinsLogin, EditBuildStep,
                 RunBuild, PullImage, DeployImage, TriggerPayloadRoute, DeletePod>;

struct Action {
    ActionVariant value;
    // Free-text annotation carried through traces and scenario files (e.g.
    // the shell command the step models). No semantic effect.
    std::string note;

    friend bool operator==(const Action&, const Action&) = default;
};

inline const char* action_kind_name(const ActionVariant& v) {
    struct Visitor {
        const char* operator()(const Authenticate&) { return "authenticate"; }
        const char* operator()(const KubectlApply&) { return "kubectl-apply"; }
        const char* operator()(const KubectlExec&) { return "kubectl-exec"; }
        const char* operator()(const ChrootEscape&) { return "chroot-escape"; }
        const char* operator()(const ReadNodeKubeconfig&) { return "read-node-kubeconfig"; }
        const char* operator()(const AddNodePort&) { return "add-node-port"; }
        const char* operator()(const Connect&) { return "connect"; }
        const char* operator()(const ConsumeTopic&) { return "consume-topic"; }
        const char* operator()(const ProduceTopic&) { return "produce-topic"; }
        const char* operator()(const JenkinsLogin&) { return "jenkins-login"; }
        const char* operator()(const EditBuildStep&) { return "edit-build-step"; }
        const char* operator()(const RunBuild&) { return "run-build"; }
        const char* operator()(const PullImage&) { return "pull-image"; }
        const char* operator()(const DeployImage&) { return "deploy-image"; }
        const char* operator()(const TriggerPayloadRoute&) { return "trigger-payload-route"; }
        const char* operator()(const DeletePod&) { return "delete-pod"; }
    };
    return std::visit(Visitor{}, v);
}

inline std::vector<std::string> action_kind_names() {
    return {"authenticate",   "kubectl-apply", "kubectl-exec",     "chroot-escape",
            "read-node-kubeconfig", "add-node-port", "connect",    "consume-topic",
            "produce-topic",  "jenkins-login", "edit-build-step",  "run-build",
            "pull-image",     "deploy-image",  "trigger-payload-route", "delete-pod"};
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

enum class ActionStatus { Applied, DeniedRBAC, BlockedPolicy, FailedPrecondition };

inline std::string to_string(ActionStatus s) {
    switch (s) {
        case ActionStatus::Applied: return "applied";
        case ActionStatus::DeniedRBAC: return "denied-rbac";
        case ActionStatus::BlockedPolicy: return "blocked-policy";
        case ActionStatus::FailedPrecondition: return "failed-precondition";
    }
    return "?";
}

// Data returned by an applied action.
struct RecordsObservation {
    std::vector<std::string> records;
    friend bool operator==(const RecordsObservation&, const RecordsObservation&) = default;
};
struct FileContentsObservation {
    std::string contents;
    friend bool operator==(const FileContentsObservation&, const FileContentsObservation&) = default;
};
struct CredentialObservation {
    Credential credential;
    friend bool operator==(const CredentialObservation&, const CredentialObservation&) = default;
};
struct EndpointObservation {
    Endpoint endpoint;
    friend bool operator==(const EndpointObservation&, const EndpointObservation&) = default;
};
struct ImageRefObservation {
    ImageRef image;
    friend bool operator==(const ImageRefObservation&, const ImageRefObservation&) = default;
};

using Observation = std::variant<std::monostate, RecordsObservation, FileContentsObservation,
                                 CredentialObservation, EndpointObservation, ImageRefObservation>;

struct ActionResult {
    ActionStatus status = ActionStatus::Applied;
    // DeniedRBAC: rule context; BlockedPolicy: blocking policy rule id;
    // FailedPrecondition: reason. Empty for plain Applied.
    std::string detail;
    Observation observation;  // non-monostate only when status is Applied

    bool applied() const { return status == ActionStatus::Applied; }
    bool has_observation() const {
        return !std::holds_alternative<std::monostate>(observation);
    }

    static ActionResult ok() { return {ActionStatus::Applied, "", {}}; }
    static ActionResult ok_with(Observation obs) {
        return {ActionStatus::Applied, "", std::move(obs)};
    }
    static ActionResult denied(std::string context) {
        return {ActionStatus::DeniedRBAC, std::move(context), {}};
    }
    static ActionResult blocked(std::string policy_id) {
        return {ActionStatus::BlockedPolicy, std::move(policy_id), {}};
    }
    static ActionResult failed(std::string reason) {
        return {ActionStatus::FailedPrecondition, std::move(reason), {}};
    }

    friend bool operator==(const ActionResult&, const ActionResult&) = default;
};

}  // namespace sscs
