#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sscs/engine.hpp"
#include "sscs/fixture.hpp"
#include "sscs/policy.hpp"

using namespace sscs;

namespace {

ClusterState canonical() {
    static const ClusterState fixture =
        load_fixture_file(std::string(SSCS_DATA_DIR) + "/fixture.yaml");
    return fixture;
}

PolicySet policy_file(const std::string& name) {
    return load_policy_file(std::string(SSCS_DATA_DIR) + "/policies/" + name + ".yaml");
}

Action hostpath_apply(const std::string& ns) {
    PodManifest m;
    m.name = "hp-pod";
    m.namespace_ = ns;
    m.service_account = "default";
    m.app_label = "hp";
    m.image = {"toolbox", "1.0"};
    m.volumes = {Volume{Volume::Kind::HostPath, "/", "/host"}};
    return Action{KubectlApply{m}, ""};
}

}  // namespace

TEST_CASE("hostPath deny-all blocks the escape pod") {
    ClusterState state = canonical();
    Session crud = Session::start(Credential{"crud-sa", CredentialLevel::ServiceAccount});
    auto verdict =
        evaluate(policy_file("hostpath-restriction"), state, crud, hostpath_apply("developer"));
    REQUIRE(verdict.has_value());
    CHECK(*verdict == "hostpath-restriction");
}

TEST_CASE("hostPath admin-only passes cluster admins") {
    ClusterState state = canonical();
    PolicySet admin_only;
    admin_only.rules.push_back(
        {"hp-admin-only", PolicyKind::HostPathRestriction, {}, {}, HostPathMode::AdminOnly});

    Session admin = Session::start(Credential{"kube-admin-node-1", CredentialLevel::ClusterAdmin});
    CHECK_FALSE(evaluate(admin_only, state, admin, hostpath_apply("developer")).has_value());

    Session crud = Session::start(Credential{"crud-sa", CredentialLevel::ServiceAccount});
    CHECK(evaluate(admin_only, state, crud, hostpath_apply("developer")).has_value());
}

TEST_CASE("reads pass every rule kind") {
    ClusterState state = canonical();
    Session sessions[] = {
        Session::start(Credential{"crud-sa", CredentialLevel::ServiceAccount}),
        Session::start(Credential{"ci-dev", CredentialLevel::JenkinsUser}),
    };
    Action consume{ConsumeTopic{"strimzi-service", "kafka", "orders"}, ""};
    for (const Session& s : sessions)
        for (const char* name :
             {"namespace-scoped-service-accounts", "jenkins-build-edit-restriction",
              "ingress-object-restriction", "hostpath-restriction", "all-mitigations"})
            CHECK_FALSE(evaluate(policy_file(name), state, s, consume).has_value());
}

TEST_CASE("namespace scoping applies to service accounts only") {
    ClusterState state = canonical();
    PolicySet scoped = policy_file("namespace-scoped-service-accounts");

    PodManifest m;
    m.name = "x";
    m.namespace_ = "apps";
    m.service_account = "default";
    m.app_label = "x";
    m.image = {"py-producer-consumer", "latest"};
    Action deploy{DeployImage{m}, ""};

    // dev-sa is homed in developer; apps is foreign.
    Session dev = Session::start(Credential{"dev-sa", CredentialLevel::ServiceAccount});
    CHECK(evaluate(scoped, state, dev, deploy).has_value());

    // CI users have no home namespace and the rule does not govern them.
    Session ci = Session::start(Credential{"ci-dev", CredentialLevel::JenkinsUser});
    CHECK_FALSE(evaluate(scoped, state, ci, deploy).has_value());

    // Same-namespace mutation passes.
    Session net = Session::start(Credential{"net-sa", CredentialLevel::ServiceAccount});
    Action expose{AddNodePort{"strimzi-service", "kafka", 30500}, ""};
    CHECK_FALSE(evaluate(scoped, state, net, expose).has_value());
}

TEST_CASE("ingress restriction honors the allowed-principals list") {
    ClusterState state = canonical();
    PolicySet policy;
    policy.rules.push_back({"ingress-guard",
                            PolicyKind::IngressObjectRestriction,
                            {"net-sa"},
                            {"kafka/strimzi-service"},
                            HostPathMode::DenyAll});

    Action expose{AddNodePort{"strimzi-service", "kafka", 30500}, ""};
    Session net = Session::start(Credential{"net-sa", CredentialLevel::ServiceAccount});
    CHECK_FALSE(evaluate(policy, state, net, expose).has_value());

    Session crud = Session::start(Credential{"crud-sa", CredentialLevel::ServiceAccount});
    CHECK(evaluate(policy, state, crud, expose).has_value());

    // Unprotected services are out of the rule's domain.
    Action expose_other{AddNodePort{"py-app-service", "apps", 30600}, ""};
    CHECK_FALSE(evaluate(policy, state, crud, expose_other).has_value());
}

TEST_CASE("first matching rule in declaration order wins") {
    ClusterState state = canonical();
    PolicySet policy;
    policy.rules.push_back({"scoped-first", PolicyKind::NamespaceScopedServiceAccounts, {}, {},
                            HostPathMode::DenyAll});
    policy.rules.push_back(
        {"hostpath-second", PolicyKind::HostPathRestriction, {}, {}, HostPathMode::DenyAll});

    // dev-sa applying a hostPath pod into kafka matches both rules.
    Session dev = Session::start(Credential{"dev-sa", CredentialLevel::ServiceAccount});
    auto verdict = evaluate(policy, state, dev, hostpath_apply("kafka"));
    REQUIRE(verdict.has_value());
    CHECK(*verdict == "scoped-first");

    PolicySet reversed;
    reversed.rules.push_back(policy.rules[1]);
    reversed.rules.push_back(policy.rules[0]);
    verdict = evaluate(reversed, state, dev, hostpath_apply("kafka"));
    REQUIRE(verdict.has_value());
    CHECK(*verdict == "hostpath-second");
}

// ---------------------------------------------------------------------------
// Soundness: a rule never blocks an action kind outside its textual domain.
// ---------------------------------------------------------------------------

namespace {

// Every action kind instantiated against the canonical fixture.
std::vector<Action> one_of_each_kind() {
    PodManifest plain;
    plain.name = "p";
    plain.namespace_ = "kafka";
    plain.service_account = "default";
    plain.app_label = "p";
    plain.image = {"toolbox", "1.0"};
    EditBuildStep edit;
    edit.job = "py-app-build";
    edit.step_index = 0;
    edit.script = "s";
    return {
        {Authenticate{"crud-sa"}, ""},
        {KubectlApply{plain}, ""},
        {KubectlExec{"py-app", "apps"}, ""},
        {ChrootEscape{}, ""},
        {ReadNodeKubeconfig{}, ""},
        {AddNodePort{"strimzi-service", "kafka", 30500}, ""},
        {Connect{"strimzi-service", "kafka"}, ""},
        {ConsumeTopic{"strimzi-service", "kafka", "orders"}, ""},
        {ProduceTopic{"strimzi-service", "kafka", "audit", "r"}, ""},
        {JenkinsLogin{"ci-dev"}, ""},
        {edit, ""},
        {RunBuild{"py-app-build"}, ""},
        {PullImage{"toolbox", "1.0"}, ""},
        {DeployImage{plain}, ""},
        {TriggerPayloadRoute{"py-app-service", "apps", "/hack"}, ""},
        {DeletePod{"py-app", "apps"}, ""},
    };
}

bool in_rule_domain(PolicyKind kind, const Action& action) {
    switch (kind) {
        case PolicyKind::NamespaceScopedServiceAccounts:
            return std::holds_alternative<KubectlApply>(action.value) ||
                   std::holds_alternative<DeployImage>(action.value) ||
                   std::holds_alternative<AddNodePort>(action.value);
        case PolicyKind::JenkinsBuildEditRestriction:
            return std::holds_alternative<EditBuildStep>(action.value);
        case PolicyKind::IngressObjectRestriction:
            return std::holds_alternative<AddNodePort>(action.value);
        case PolicyKind::HostPathRestriction:
            return std::holds_alternative<KubectlApply>(action.value) ||
                   std::holds_alternative<DeployImage>(action.value);
    }
    return false;
}

}  // namespace

TEST_CASE("blocking soundness: rule kinds never block outside their domain") {
    ClusterState state = canonical();
    std::vector<Session> sessions = {
        Session::start(Credential{"dev-sa", CredentialLevel::ServiceAccount}),
        Session::start(Credential{"crud-sa", CredentialLevel::ServiceAccount}),
        Session::start(Credential{"ci-dev", CredentialLevel::JenkinsUser}),
        Session::start(Credential{"kube-admin-node-1", CredentialLevel::ClusterAdmin}),
    };
    std::vector<PolicyRule> rules = {
        {"r1", PolicyKind::NamespaceScopedServiceAccounts, {}, {}, HostPathMode::DenyAll},
        {"r2", PolicyKind::JenkinsBuildEditRestriction, {}, {}, HostPathMode::DenyAll},
        {"r3",
         PolicyKind::IngressObjectRestriction,
         {},
         {"kafka/strimzi-service"},
         HostPathMode::DenyAll},
        {"r4", PolicyKind::HostPathRestriction, {}, {}, HostPathMode::DenyAll},
    };

    for (const PolicyRule& rule : rules) {
        PolicySet policy;
        policy.rules.push_back(rule);
        for (const Session& session : sessions) {
            for (const Action& action : one_of_each_kind()) {
                auto verdict = evaluate(policy, state, session, action);
                if (verdict.has_value()) CHECK(in_rule_domain(rule.kind, action));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

TEST_CASE("empty document loads as the baseline policy") {
    PolicySet p = load_policy("");
    CHECK(p.empty());
    CHECK(load_policy("rules: []\n").empty());
}

TEST_CASE("the shipped mitigation files carry one rule each") {
    CHECK(policy_file("namespace-scoped-service-accounts").rules.size() == 1);
    CHECK(policy_file("jenkins-build-edit-restriction").rules.size() == 1);
    CHECK(policy_file("ingress-object-restriction").rules.size() == 1);
    CHECK(policy_file("hostpath-restriction").rules.size() == 1);
    CHECK(policy_file("all-mitigations").rules.size() == 4);

    PolicySet jenkins = policy_file("jenkins-build-edit-restriction");
    CHECK(jenkins.rules[0].kind == PolicyKind::JenkinsBuildEditRestriction);
    CHECK(jenkins.rules[0].allowed_principals == std::vector<std::string>{"jenkins-admin"});

    PolicySet hostpath = policy_file("hostpath-restriction");
    CHECK(hostpath.rules[0].mode == HostPathMode::DenyAll);

    PolicySet ingress = policy_file("ingress-object-restriction");
    CHECK(ingress.rules[0].protected_services ==
          std::vector<std::string>{"kafka/strimzi-service"});
    CHECK(ingress.rules[0].allowed_principals.empty());
}

TEST_CASE("policy files round-trip") {
    for (const char* name :
         {"namespace-scoped-service-accounts", "jenkins-build-edit-restriction",
          "ingress-object-restriction", "hostpath-restriction", "all-mitigations"}) {
        PolicySet p = policy_file(name);
        CHECK(load_policy(serialize_policy(p)) == p);
    }
}

TEST_CASE("parse errors") {
    CHECK_THROWS_WITH_AS(load_policy("rules:\n  - id: x\n    kind: firewall\n"),
                         doctest::Contains("unknown policy rule kind"), yaml::ParseError);
    CHECK_THROWS_WITH_AS(
        load_policy("rules:\n  - id: x\n    kind: hostpath-restriction\n    mode: deny-all\n"
                    "  - id: x\n    kind: hostpath-restriction\n    mode: deny-all\n"),
        doctest::Contains("duplicate policy rule id"), yaml::ParseError);
    CHECK_THROWS_AS(
        load_policy("rules:\n  - id: x\n    kind: hostpath-restriction\n    mode: sometimes\n"),
        yaml::ParseError);
}

TEST_CASE("policy digests are stable") {
    PolicySet a = policy_file("all-mitigations");
    PolicySet b = policy_file("all-mitigations");
    CHECK(policy_digest(a) == policy_digest(b));
    CHECK(policy_digest(a) != policy_digest(PolicySet{}));
}
