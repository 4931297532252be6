#pragma once

// Typed world state of the simulated supply-chain environment: cluster
// resources, CI server, image registry, source repository, and the broker
// application, plus the RBAC and network-reachability queries every action
// consults. All types are plain values; queries are pure.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace sscs {

// ---------------------------------------------------------------------------
// Identifiers and enums
// ---------------------------------------------------------------------------

enum class Verb { Create, Get, List, Update, Delete };
enum class ResourceKind { Pod, Service, Secret, Topic };

constexpr Verb kAllVerbs[] = {Verb::Create, Verb::Get, Verb::List, Verb::Update, Verb::Delete};
constexpr ResourceKind kAllResourceKinds[] = {ResourceKind::Pod, ResourceKind::Service,
                                              ResourceKind::Secret, ResourceKind::Topic};

inline std::string to_string(Verb v) {
    switch (v) {
        case Verb::Create: return "create";
        case Verb::Get: return "get";
        case Verb::List: return "list";
        case Verb::Update: return "update";
        case Verb::Delete: return "delete";
    }
    return "?";
}

inline std::string to_string(ResourceKind k) {
    switch (k) {
        case ResourceKind::Pod: return "pod";
        case ResourceKind::Service: return "service";
        case ResourceKind::Secret: return "secret";
        case ResourceKind::Topic: return "topic";
    }
    return "?";
}

inline std::optional<Verb> verb_from_string(const std::string& s) {
    for (Verb v : kAllVerbs)
        if (to_string(v) == s) return v;
    return std::nullopt;
}

inline std::optional<ResourceKind> resource_kind_from_string(const std::string& s) {
    for (ResourceKind k : kAllResourceKinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

// Marker for role rules that apply in every namespace.
inline constexpr const char* kClusterWideScope = "*";

enum class CredentialLevel { User, ServiceAccount, JenkinsUser, ClusterAdmin, NodeRoot };

inline std::string to_string(CredentialLevel l) {
    switch (l) {
        case CredentialLevel::User: return "user";
        case CredentialLevel::ServiceAccount: return "service-account";
        case CredentialLevel::JenkinsUser: return "jenkins-user";
        case CredentialLevel::ClusterAdmin: return "cluster-admin";
        case CredentialLevel::NodeRoot: return "node-root";
    }
    return "?";
}

inline std::optional<CredentialLevel> credential_level_from_string(const std::string& s) {
    for (CredentialLevel l : {CredentialLevel::User, CredentialLevel::ServiceAccount,
                              CredentialLevel::JenkinsUser, CredentialLevel::ClusterAdmin,
                              CredentialLevel::NodeRoot})
        if (to_string(l) == s) return l;
    return std::nullopt;
}

struct Credential {
    std::string subject;
    CredentialLevel level = CredentialLevel::User;

    friend bool operator==(const Credential&, const Credential&) = default;
};

// ---------------------------------------------------------------------------
// Cluster resources
// ---------------------------------------------------------------------------

struct Node {
    std::string name;
    std::map<std::string, std::string> host_files;  // path -> content
    std::vector<std::string> running_containers;    // "namespace/pod" refs

    friend bool operator==(const Node&, const Node&) = default;
};

// Suffix every node kubeconfig path carries; the file maps to the node's
// cluster-admin credential.
inline constexpr const char* kNodeKubeconfigSuffix = "kubecfg-kube-node.yaml";

struct ServiceAccount {
    std::string name;
    std::string namespace_;

    friend bool operator==(const ServiceAccount&, const ServiceAccount&) = default;
};

struct RoleRule {
    std::string principal;
    std::set<Verb> verbs;
    std::set<ResourceKind> resource_kinds;
    std::string scope;  // namespace name or kClusterWideScope

    friend bool operator==(const RoleRule&, const RoleRule&) = default;
};

struct Volume {
    enum class Kind { HostPath, Ephemeral };
    Kind kind = Kind::Ephemeral;
    std::string host_directory;  // absolute path; HostPath only
    std::string mount_point;

    bool mounts_node_root() const { return kind == Kind::HostPath && host_directory == "/"; }

    friend bool operator==(const Volume&, const Volume&) = default;
};

struct ImageRef {
    std::string name;
    std::string tag;

    std::string str() const { return name + ":" + tag; }

    friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

struct Pod {
    std::string name;
    std::string namespace_;
    std::string node;
    std::string service_account;
    std::string app_label;  // matched by Service selectors
    ImageRef image;
    std::vector<Volume> volumes;
    bool ready = false;

    bool has_root_host_path() const {
        return std::any_of(volumes.begin(), volumes.end(),
                           [](const Volume& v) { return v.mounts_node_root(); });
    }
    bool has_host_path() const {
        return std::any_of(volumes.begin(), volumes.end(),
                           [](const Volume& v) { return v.kind == Volume::Kind::HostPath; });
    }

    friend bool operator==(const Pod&, const Pod&) = default;
};

inline constexpr int kNodePortMin = 30000;
inline constexpr int kNodePortMax = 32767;

struct Exposure {
    // nullopt means the service answers on its cluster IP only.
    std::optional<int> node_port;

    bool internal_only() const { return !node_port.has_value(); }

    friend bool operator==(const Exposure&, const Exposure&) = default;
};

struct Service {
    std::string name;
    std::string namespace_;
    std::string selector;  // matches Pod::app_label in the same namespace
    std::string cluster_ip;
    int port = 0;
    Exposure exposure;

    std::string qualified_name() const { return namespace_ + "/" + name; }

    friend bool operator==(const Service&, const Service&) = default;
};

// ---------------------------------------------------------------------------
// CI server, registry, source repository, broker
// ---------------------------------------------------------------------------

struct BuildStep {
    std::string script;
    // Structured record of an injected disclosure route; the engine does not
    // parse script text.
    std::map<std::string, std::string> injected_routes;  // url path -> disclosed file

    friend bool operator==(const BuildStep&, const BuildStep&) = default;
};

struct BuildJob {
    std::string source_ref;
    std::vector<BuildStep> steps;
    std::string output_image_name;
    int builds_completed = 0;  // next build gets number builds_completed + 1

    friend bool operator==(const BuildJob&, const BuildJob&) = default;
};

struct CIServer {
    std::vector<std::pair<std::string, Credential>> users;
    std::map<std::string, BuildJob> jobs;

    bool present() const { return !users.empty() || !jobs.empty(); }

    const Credential* find_user(const std::string& name) const {
        for (const auto& [n, c] : users)
            if (n == name) return &c;
        return nullptr;
    }

    friend bool operator==(const CIServer&, const CIServer&) = default;
};

struct Image {
    std::map<std::string, std::string> files;           // path -> content
    std::map<std::string, std::string> payload_routes;  // url path -> disclosed file

    friend bool operator==(const Image&, const Image&) = default;
};

struct Registry {
    std::map<std::pair<std::string, std::string>, Image> images;  // (name, tag) -> image
    std::map<std::string, std::string> latest;                    // name -> most recent tag

    bool present() const { return !images.empty(); }

    // Resolves "latest" to the most recently pushed tag for the name.
    std::optional<ImageRef> resolve(const std::string& name, const std::string& tag) const {
        std::string t = tag;
        if (t == "latest") {
            auto it = latest.find(name);
            if (it == latest.end()) return std::nullopt;
            t = it->second;
        }
        if (!images.count({name, t})) return std::nullopt;
        return ImageRef{name, t};
    }

    const Image* find(const ImageRef& ref) const {
        auto it = images.find({ref.name, ref.tag});
        return it == images.end() ? nullptr : &it->second;
    }

    friend bool operator==(const Registry&, const Registry&) = default;
};

struct SourceRepo {
    std::string name;
    std::map<std::string, std::string> files;  // path -> content

    bool present() const { return !name.empty() || !files.empty(); }

    friend bool operator==(const SourceRepo&, const SourceRepo&) = default;
};

struct BrokerApp {
    std::string service_ref;  // "namespace/name" of the fronting Service
    std::map<std::string, std::vector<std::string>> topics;

    bool present() const { return !service_ref.empty(); }

    friend bool operator==(const BrokerApp&, const BrokerApp&) = default;
};

// ---------------------------------------------------------------------------
// ClusterState
// ---------------------------------------------------------------------------

struct ClusterState {
    std::vector<Node> nodes;
    std::vector<std::string> namespaces;
    std::vector<Pod> pods;
    std::vector<Service> services;
    std::vector<ServiceAccount> service_accounts;
    std::vector<RoleRule> role_rules;
    std::map<std::string, Credential> node_credentials;  // node name -> admin credential
    CIServer ci_server;
    Registry registry;
    SourceRepo source_repo;
    BrokerApp broker;
    std::uint64_t clock = 0;  // bumped once per applied action

    friend bool operator==(const ClusterState&, const ClusterState&) = default;

    // -- lookups --------------------------------------------------------

    bool has_namespace(const std::string& ns) const {
        return std::find(namespaces.begin(), namespaces.end(), ns) != namespaces.end();
    }

    const Node* find_node(const std::string& name) const {
        for (const Node& n : nodes)
            if (n.name == name) return &n;
        return nullptr;
    }
    Node* find_node(const std::string& name) {
        for (Node& n : nodes)
            if (n.name == name) return &n;
        return nullptr;
    }

    const Pod* find_pod(const std::string& ns, const std::string& name) const {
        for (const Pod& p : pods)
            if (p.namespace_ == ns && p.name == name) return &p;
        return nullptr;
    }
    Pod* find_pod(const std::string& ns, const std::string& name) {
        for (Pod& p : pods)
            if (p.namespace_ == ns && p.name == name) return &p;
        return nullptr;
    }

    const Service* find_service(const std::string& ns, const std::string& name) const {
        for (const Service& s : services)
            if (s.namespace_ == ns && s.name == name) return &s;
        return nullptr;
    }
    Service* find_service(const std::string& ns, const std::string& name) {
        for (Service& s : services)
            if (s.namespace_ == ns && s.name == name) return &s;
        return nullptr;
    }

    // "namespace/name" form used by policies, goals, and the broker ref.
    const Service* find_service_qualified(const std::string& qualified) const {
        size_t slash = qualified.find('/');
        if (slash == std::string::npos) return nullptr;
        return find_service(qualified.substr(0, slash), qualified.substr(slash + 1));
    }

    const ServiceAccount* find_service_account(const std::string& name) const {
        for (const ServiceAccount& sa : service_accounts)
            if (sa.name == name) return &sa;
        return nullptr;
    }

    std::vector<const Pod*> pods_backing(const Service& svc) const {
        std::vector<const Pod*> out;
        for (const Pod& p : pods)
            if (p.namespace_ == svc.namespace_ && p.app_label == svc.selector)
                out.push_back(&p);
        return out;
    }

    bool node_port_in_use(int port) const {
        for (const Service& s : services)
            if (s.exposure.node_port == port) return true;
        return false;
    }
};

// ---------------------------------------------------------------------------
// Network locations
// ---------------------------------------------------------------------------

struct Location {
    enum class Zone { External, InCluster, OnNode };
    Zone zone = Zone::External;
    std::string detail;  // namespace for InCluster, node name for OnNode

    static Location external() { return {Zone::External, ""}; }
    static Location in_cluster(std::string ns) { return {Zone::InCluster, std::move(ns)}; }
    static Location on_node(std::string node) { return {Zone::OnNode, std::move(node)}; }

    std::string str() const {
        switch (zone) {
            case Zone::External: return "external";
            case Zone::InCluster: return "in-cluster(" + detail + ")";
            case Zone::OnNode: return "on-node(" + detail + ")";
        }
        return "?";
    }

    friend bool operator==(const Location&, const Location&) = default;
};

// ---------------------------------------------------------------------------
// Sessions
// ---------------------------------------------------------------------------

struct ShellRef {
    enum class Kind { Pod, Node };
    Kind kind = Kind::Pod;
    std::string namespace_;  // Pod shells
    std::string name;        // pod name or node name

    friend bool operator==(const ShellRef&, const ShellRef&) = default;
};

struct Session {
    Credential credential;
    Location location = Location::external();
    std::optional<ShellRef> open_shell;
    // Credentials the principal possesses: the starting credential plus any
    // captured along the way (e.g. a node kubeconfig). Authentication steps
    // resolve against this wallet only.
    std::vector<Credential> captured_credentials;
    // CI identity once logged in to the CI server.
    std::optional<std::string> ci_logged_in_as;

    static Session start(Credential cred, Location loc = Location::external()) {
        Session s;
        s.credential = cred;
        s.location = std::move(loc);
        s.captured_credentials.push_back(std::move(cred));
        return s;
    }

    bool holds_credential(const std::string& subject) const {
        return std::any_of(captured_credentials.begin(), captured_credentials.end(),
                           [&](const Credential& c) { return c.subject == subject; });
    }

    const Credential* find_captured(const std::string& subject) const {
        for (const Credential& c : captured_credentials)
            if (c.subject == subject) return &c;
        return nullptr;
    }

    bool has_cluster_admin() const {
        if (credential.level == CredentialLevel::ClusterAdmin) return true;
        return std::any_of(
            captured_credentials.begin(), captured_credentials.end(),
            [](const Credential& c) { return c.level == CredentialLevel::ClusterAdmin; });
    }

    friend bool operator==(const Session&, const Session&) = default;
};

// ---------------------------------------------------------------------------
// RBAC
// ---------------------------------------------------------------------------

enum class Authz {
    Allow,
    Deny,
    UnknownPrincipal,  // distinct from Deny: the subject is not a known principal
};

inline bool is_known_principal(const ClusterState& state, const Credential& cred) {
    if (cred.level == CredentialLevel::ClusterAdmin || cred.level == CredentialLevel::NodeRoot)
        return true;  // possession of the credential is the authority
    if (state.find_service_account(cred.subject)) return true;
    if (state.ci_server.find_user(cred.subject)) return true;
    return std::any_of(state.role_rules.begin(), state.role_rules.end(),
                       [&](const RoleRule& r) { return r.principal == cred.subject; });
}

// True iff some RoleRule for the principal covers (verb, kind, namespace), or
// the credential is cluster-admin. Pure.
inline Authz authorize(const ClusterState& state, const Session& session, Verb verb,
                       ResourceKind kind, const std::string& ns) {
    const Credential& cred = session.credential;
    if (!is_known_principal(state, cred)) return Authz::UnknownPrincipal;
    if (cred.level == CredentialLevel::ClusterAdmin) return Authz::Allow;
    for (const RoleRule& rule : state.role_rules) {
        if (rule.principal != cred.subject) continue;
        if (!rule.verbs.count(verb)) continue;
        if (!rule.resource_kinds.count(kind)) continue;
        if (rule.scope != kClusterWideScope && rule.scope != ns) continue;
        return Authz::Allow;
    }
    return Authz::Deny;
}

// ---------------------------------------------------------------------------
// Network reachability
// ---------------------------------------------------------------------------

// Two network zones: internal-only services answer for in-cluster and
// on-node callers; node-port services answer for everyone. Pure.
inline bool reachable(const ClusterState&, const Location& from, const Service& to) {
    if (!to.exposure.internal_only()) return true;
    return from.zone != Location::Zone::External;
}

struct Endpoint {
    std::string cluster_ip;
    int port = 0;
    Exposure exposure;

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

inline std::optional<Endpoint> resolve_service(const ClusterState& state, const std::string& name,
                                               const std::string& ns) {
    const Service* svc = state.find_service(ns, name);
    if (!svc) return std::nullopt;
    return Endpoint{svc->cluster_ip, svc->port, svc->exposure};
}

// ---------------------------------------------------------------------------
// State validation
// ---------------------------------------------------------------------------

// Structural invariants of ClusterState. `at_load` additionally enforces
// conditions that hold at initialization only (the broker service starting
// internal-only). Returns human-readable violations; empty means valid.
inline std::vector<std::string> validate(const ClusterState& state, bool at_load = false) {
    std::vector<std::string> errs;
    auto err = [&](std::string m) { errs.push_back(std::move(m)); };

    std::set<std::string> ns_set(state.namespaces.begin(), state.namespaces.end());
    if (ns_set.size() != state.namespaces.size()) err("duplicate namespace name");

    std::set<std::string> node_names;
    for (const Node& n : state.nodes) {
        if (!node_names.insert(n.name).second) err("duplicate node name " + n.name);
        int kubeconfigs = 0;
        for (const auto& [path, content] : n.host_files)
            if (path.size() >= std::string(kNodeKubeconfigSuffix).size() &&
                path.compare(path.size() - std::string(kNodeKubeconfigSuffix).size(),
                             std::string::npos, kNodeKubeconfigSuffix) == 0)
                ++kubeconfigs;
        if (kubeconfigs != 1)
            err("node " + n.name + " must carry exactly one node kubeconfig, has " +
                std::to_string(kubeconfigs));
        auto cred = state.node_credentials.find(n.name);
        if (cred == state.node_credentials.end())
            err("node " + n.name + " has no stored admin credential");
        else if (cred->second.level != CredentialLevel::ClusterAdmin)
            err("node " + n.name + " credential is not cluster-admin");
    }

    std::set<std::pair<std::string, std::string>> sa_keys;
    for (const ServiceAccount& sa : state.service_accounts) {
        if (!sa_keys.insert({sa.namespace_, sa.name}).second)
            err("duplicate service account " + sa.namespace_ + "/" + sa.name);
        if (!ns_set.count(sa.namespace_))
            err("service account " + sa.name + " references unknown namespace " + sa.namespace_);
    }

    for (const RoleRule& r : state.role_rules) {
        if (r.principal.empty()) err("role rule with empty principal");
        if (r.verbs.empty()) err("role rule for " + r.principal + " has no verbs");
        if (r.resource_kinds.empty()) err("role rule for " + r.principal + " has no kinds");
        if (r.scope != kClusterWideScope && !ns_set.count(r.scope))
            err("role rule for " + r.principal + " references unknown namespace " + r.scope);
    }

    std::set<std::pair<std::string, std::string>> pod_keys;
    for (const Pod& p : state.pods) {
        std::string ref = p.namespace_ + "/" + p.name;
        if (!pod_keys.insert({p.namespace_, p.name}).second) err("duplicate pod " + ref);
        if (!ns_set.count(p.namespace_)) err("pod " + ref + " references unknown namespace");
        if (!state.find_node(p.node)) err("pod " + ref + " references unknown node " + p.node);
        const ServiceAccount* sa = nullptr;
        for (const ServiceAccount& cand : state.service_accounts)
            if (cand.name == p.service_account && cand.namespace_ == p.namespace_) sa = &cand;
        if (!sa) err("pod " + ref + " service account not found in its namespace");
        if (!state.registry.find(p.image))
            err("pod " + ref + " image " + p.image.str() + " not in registry");
        for (const Volume& v : p.volumes)
            if (v.kind == Volume::Kind::HostPath &&
                (v.host_directory.empty() || v.host_directory.front() != '/'))
                err("pod " + ref + " hostPath directory must be absolute");
    }

    std::set<std::pair<std::string, std::string>> svc_keys;
    std::set<std::string> cluster_ips;
    std::set<int> node_ports;
    for (const Service& s : state.services) {
        std::string ref = s.qualified_name();
        if (!svc_keys.insert({s.namespace_, s.name}).second) err("duplicate service " + ref);
        if (!ns_set.count(s.namespace_)) err("service " + ref + " references unknown namespace");
        if (!cluster_ips.insert(s.cluster_ip).second)
            err("cluster IP " + s.cluster_ip + " not unique");
        if (s.exposure.node_port) {
            int p = *s.exposure.node_port;
            if (p < kNodePortMin || p > kNodePortMax)
                err("service " + ref + " node port " + std::to_string(p) + " out of range");
            if (!node_ports.insert(p).second)
                err("node port " + std::to_string(p) + " not unique");
        }
    }

    for (const auto& [name, job] : state.ci_server.jobs)
        if (job.steps.empty()) err("build job " + name + " has no steps");

    for (const auto& [key, image] : state.registry.images)
        for (const auto& [route, file] : image.payload_routes)
            if (route.empty() || route.front() != '/')
                err("image " + key.first + ":" + key.second + " payload route must start with /");

    if (state.broker.present()) {
        const Service* svc = state.find_service_qualified(state.broker.service_ref);
        if (!svc)
            err("broker service " + state.broker.service_ref + " not found");
        else if (at_load && !svc->exposure.internal_only())
            err("broker service must be internal-only at initialization");
    }

    return errs;
}

}  // namespace sscs
