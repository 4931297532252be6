#pragma once

// Mitigation policies: declarative least-privilege rules evaluated before
// every action. A PolicySet either blocks an action with rule attribution or
// passes it through; evaluation is pure and first-match-wins in declaration
// order.

#include <optional>
#include <string>
#include <vector>

#include "sscs/action.hpp"
#include "sscs/fixture.hpp"
#include "sscs/model.hpp"
#include "sscs/yaml.hpp"

namespace sscs {

enum class PolicyKind {
    // Service accounts may create/update cluster resources only in their own
    // namespace.
    NamespaceScopedServiceAccounts,
    // Only listed principals may edit CI build steps.
    JenkinsBuildEditRestriction,
    // Only listed principals may add node-port exposure to protected services.
    IngressObjectRestriction,
    // Pods carrying hostPath volumes are rejected (deny-all) or reserved to
    // cluster admins (admin-only).
    HostPathRestriction,
};

inline std::string to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::NamespaceScopedServiceAccounts:
            return "namespace-scoped-service-accounts";
        case PolicyKind::JenkinsBuildEditRestriction: return "jenkins-build-edit-restriction";
        case PolicyKind::IngressObjectRestriction: return "ingress-object-restriction";
        case PolicyKind::HostPathRestriction: return "hostpath-restriction";
    }
    return "?";
}

inline std::optional<PolicyKind> policy_kind_from_string(const std::string& s) {
    for (PolicyKind k : {PolicyKind::NamespaceScopedServiceAccounts,
                         PolicyKind::JenkinsBuildEditRestriction,
                         PolicyKind::IngressObjectRestriction, PolicyKind::HostPathRestriction})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

enum class HostPathMode { DenyAll, AdminOnly };

inline std::string to_string(HostPathMode m) {
    return m == HostPathMode::DenyAll ? "deny-all" : "admin-only";
}

struct PolicyRule {
    std::string id;
    PolicyKind kind = PolicyKind::NamespaceScopedServiceAccounts;
    std::vector<std::string> allowed_principals;  // Jenkins/Ingress restrictions
    std::vector<std::string> protected_services;  // Ingress restriction, "ns/name"
    HostPathMode mode = HostPathMode::DenyAll;    // HostPath restriction

    friend bool operator==(const PolicyRule&, const PolicyRule&) = default;
};

struct PolicySet {
    std::vector<PolicyRule> rules;

    bool empty() const { return rules.empty(); }

    bool has_kind(PolicyKind k) const {
        return std::any_of(rules.begin(), rules.end(),
                           [&](const PolicyRule& r) { return r.kind == k; });
    }

    PolicySet with(PolicyRule rule) const {
        PolicySet out = *this;
        out.rules.push_back(std::move(rule));
        return out;
    }

    friend bool operator==(const PolicySet&, const PolicySet&) = default;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace policy_detail {

inline bool contains(const std::vector<std::string>& list, const std::string& v) {
    return std::find(list.begin(), list.end(), v) != list.end();
}

// Target namespace of a create/update-class cluster action, if the rule
// domain covers the action kind.
inline std::optional<std::string> mutated_namespace(const Action& action) {
    if (const auto* a = std::get_if<KubectlApply>(&action.value)) return a->manifest.namespace_;
    if (const auto* a = std::get_if<DeployImage>(&action.value)) return a->manifest.namespace_;
    if (const auto* a = std::get_if<AddNodePort>(&action.value)) return a->namespace_;
    return std::nullopt;
}

inline const PodManifest* pod_manifest_of(const Action& action) {
    if (const auto* a = std::get_if<KubectlApply>(&action.value)) return &a->manifest;
    if (const auto* a = std::get_if<DeployImage>(&action.value)) return &a->manifest;
    return nullptr;
}

inline bool rule_matches(const PolicyRule& rule, const ClusterState& state,
                         const Session& session, const Action& action) {
    switch (rule.kind) {
        case PolicyKind::NamespaceScopedServiceAccounts: {
            if (session.credential.level != CredentialLevel::ServiceAccount) return false;
            std::optional<std::string> target = mutated_namespace(action);
            if (!target) return false;
            const ServiceAccount* sa = state.find_service_account(session.credential.subject);
            if (!sa) return false;
            return sa->namespace_ != *target;
        }
        case PolicyKind::JenkinsBuildEditRestriction: {
            if (!std::holds_alternative<EditBuildStep>(action.value)) return false;
            std::string actor = session.ci_logged_in_as ? *session.ci_logged_in_as
                                                        : session.credential.subject;
            return !contains(rule.allowed_principals, actor);
        }
        case PolicyKind::IngressObjectRestriction: {
            const auto* a = std::get_if<AddNodePort>(&action.value);
            if (!a) return false;
            if (!contains(rule.protected_services, a->namespace_ + "/" + a->service))
                return false;
            return !contains(rule.allowed_principals, session.credential.subject);
        }
        case PolicyKind::HostPathRestriction: {
            const PodManifest* manifest = pod_manifest_of(action);
            if (!manifest || !manifest->has_host_path()) return false;
            if (rule.mode == HostPathMode::AdminOnly)
                return session.credential.level != CredentialLevel::ClusterAdmin;
            return true;
        }
    }
    return false;
}

}  // namespace policy_detail

// First matching rule in declaration order blocks; returns its id.
inline std::optional<std::string> evaluate(const PolicySet& policy, const ClusterState& state,
                                           const Session& session, const Action& action) {
    for (const PolicyRule& rule : policy.rules)
        if (policy_detail::rule_matches(rule, state, session, action)) return rule.id;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

inline PolicySet load_policy(const std::string& text) {
    yaml::Node doc = yaml::parse(text);
    PolicySet out;
    const yaml::Node* rules = doc.is_mapping() ? doc.find("rules") : nullptr;
    if (!rules) return out;  // empty document: no mitigation (baseline)
    for (const yaml::Node& item : rules->items()) {
        PolicyRule rule;
        rule.id = item.at("id").as_string();
        std::string kind = item.at("kind").as_string();
        auto parsed = policy_kind_from_string(kind);
        if (!parsed)
            throw yaml::ParseError(
                "unknown policy rule kind \"" + kind +
                    "\" (expected one of: namespace-scoped-service-accounts, "
                    "jenkins-build-edit-restriction, ingress-object-restriction, "
                    "hostpath-restriction)",
                item.line());
        rule.kind = *parsed;
        if (const yaml::Node* allowed = item.find("allowed_principals"))
            for (const yaml::Node& p : allowed->items())
                rule.allowed_principals.push_back(p.as_string());
        if (const yaml::Node* prot = item.find("protected_services"))
            for (const yaml::Node& s : prot->items())
                rule.protected_services.push_back(s.as_string());
        if (const yaml::Node* mode = item.find("mode")) {
            if (mode->as_string() == "deny-all")
                rule.mode = HostPathMode::DenyAll;
            else if (mode->as_string() == "admin-only")
                rule.mode = HostPathMode::AdminOnly;
            else
                throw yaml::ParseError("unknown hostPath mode \"" + mode->as_string() +
                                           "\" (expected deny-all or admin-only)",
                                       mode->line());
        }
        for (const PolicyRule& existing : out.rules)
            if (existing.id == rule.id)
                throw yaml::ParseError("duplicate policy rule id \"" + rule.id + "\"",
                                       item.line());
        out.rules.push_back(std::move(rule));
    }
    return out;
}

inline PolicySet load_policy_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open policy file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_policy(buf.str());
}

inline std::string serialize_policy(const PolicySet& policy) {
    yaml::Node doc = yaml::Node::mapping();
    yaml::Node rules = yaml::Node::sequence();
    for (const PolicyRule& rule : policy.rules) {
        yaml::Node item = yaml::Node::mapping();
        item.set("id", yaml::scalar(rule.id));
        item.set("kind", yaml::scalar(to_string(rule.kind)));
        switch (rule.kind) {
            case PolicyKind::JenkinsBuildEditRestriction:
                item.set("allowed_principals", yaml::string_list(rule.allowed_principals));
                break;
            case PolicyKind::IngressObjectRestriction:
                item.set("protected_services", yaml::string_list(rule.protected_services));
                item.set("allowed_principals", yaml::string_list(rule.allowed_principals));
                break;
            case PolicyKind::HostPathRestriction:
                item.set("mode", yaml::scalar(to_string(rule.mode)));
                break;
            case PolicyKind::NamespaceScopedServiceAccounts: break;
        }
        rules.push_back(item);
    }
    doc.set("rules", rules);
    return yaml::emit(doc);
}

inline std::string policy_digest(const PolicySet& policy) {
    return content_digest(serialize_policy(policy));
}

}  // namespace sscs
