// Acceptance suite: one line per criterion, non-zero exit on any failure.
// Runs the four built-in attack scenarios and their mitigations end to end
// against the canonical fixture, cross-checks the capability analyzer, and
// exercises the engine-wide properties at full case counts.

#include <chrono>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "random_world.hpp"
#include "sscs/analyzer.hpp"
#include "sscs/engine.hpp"
#include "sscs/fixture.hpp"
#include "sscs/report.hpp"
#include "sscs/scenario.hpp"

using namespace sscs;

namespace {

struct Criterion {
    Criterion(int number, std::string title) : number(number), title(std::move(title)) {}

    int number;
    std::string title;
    bool passed = true;
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            if (failures.size() < 8) failures.push_back(what);
        }
    }
};

ClusterState canonical_fixture() {
    static const ClusterState fixture =
        load_fixture_file(std::string(SSCS_DATA_DIR) + "/fixture.yaml");
    return fixture;
}

PolicySet policy_file(const std::string& name) {
    return load_policy_file(std::string(SSCS_DATA_DIR) + "/policies/" + name + ".yaml");
}

const std::vector<std::string>& mitigation_names() {
    static const std::vector<std::string> names = {
        "namespace-scoped-service-accounts",
        "jenkins-build-edit-restriction",
        "ingress-object-restriction",
        "hostpath-restriction",
    };
    return names;
}

// ---------------------------------------------------------------------------

void criterion_1_baseline(Criterion& c) {
    ClusterState fixture = canonical_fixture();
    auto scenarios = builtin_scenarios();
    c.require(scenarios.size() == 4, "expected four built-ins");

    GoalPredicate expected[4];
    expected[0].atoms = {GoalAtom{GoalKind::TopicDataRead, "orders", "", "", ""}};
    expected[1].atoms = {GoalAtom{GoalKind::PayloadRouteServed, "", "/hack", "requirements.txt",
                                  ""}};
    expected[2].atoms = {GoalAtom{GoalKind::ExternallyReachable, "", "", "",
                                  "kafka/strimzi-service"}};
    expected[3].atoms = {GoalAtom{GoalKind::ClusterAdminObtained, "", "", "", ""},
                         GoalAtom{GoalKind::CrossNamespacePodDeleted, "", "", "", ""}};

    for (size_t i = 0; i < scenarios.size(); ++i) {
        c.require(scenarios[i].goal == expected[i], scenarios[i].id + ": goal mismatch");
        ScenarioVerdict v = run_scenario(fixture, scenarios[i], {});
        c.require(v.outcome == ScenarioOutcome::Achieved,
                  scenarios[i].id + " not achieved: " + v.detail);
    }
}

void criterion_2_mitigation_matrix(Criterion& c) {
    ClusterState fixture = canonical_fixture();
    auto scenarios = builtin_scenarios();
    for (size_t s = 0; s < scenarios.size(); ++s) {
        for (size_t p = 0; p < mitigation_names().size(); ++p) {
            ScenarioVerdict v =
                run_scenario(fixture, scenarios[s], policy_file(mitigation_names()[p]));
            bool diagonal = (s == p);
            ScenarioOutcome expected =
                diagonal ? ScenarioOutcome::Blocked : ScenarioOutcome::Achieved;
            c.require(v.outcome == expected, scenarios[s].id + " x " + mitigation_names()[p] +
                                                 ": got " + to_string(v.outcome));
        }
        ScenarioVerdict v = run_scenario(fixture, scenarios[s], policy_file("all-mitigations"));
        c.require(v.outcome == ScenarioOutcome::Blocked,
                  scenarios[s].id + " not blocked by all-mitigations");
    }
}

void criterion_3_payload_fidelity(Criterion& c) {
    const std::string expected_contents = "flask==2.0.1\nkafka-python==2.0.2\n";
    ClusterState fixture = canonical_fixture();
    c.require(fixture.source_repo.files.at("requirements.txt") == expected_contents,
              "fixture requirements.txt content drifted");

    // Backdoored build, via the full scenario.
    ClusterState state = fixture;
    Session ci = Session::start(Credential{"ci-dev", CredentialLevel::JenkinsUser});
    apply_action(state, ci, Action{JenkinsLogin{"ci-dev"}, ""}, {});
    EditBuildStep edit;
    edit.job = "py-app-build";
    edit.step_index = 1;
    edit.script = "inject-route /hack requirements.txt";
    edit.payload_route = "/hack";
    edit.payload_file = "requirements.txt";
    apply_action(state, ci, Action{edit, ""}, {});
    apply_action(state, ci, Action{RunBuild{"py-app-build"}, ""}, {});
    PodManifest deploy;
    deploy.name = "py-app";
    deploy.namespace_ = "apps";
    deploy.service_account = "default";
    deploy.app_label = "py-app";
    deploy.image = {"py-producer-consumer", "latest"};
    apply_action(state, ci, Action{DeployImage{deploy}, ""}, {});
    ActionResult served = apply_action(
        state, ci, Action{TriggerPayloadRoute{"py-app-service", "apps", "/hack"}, ""}, {});
    c.require(served.applied(), "backdoored route not served");
    if (const auto* obs = std::get_if<FileContentsObservation>(&served.observation))
        c.require(obs->contents == expected_contents, "served contents differ from fixture file");
    else
        c.require(false, "no file contents observation");

    // Clean build serves nothing.
    ClusterState clean = fixture;
    Session ci2 = Session::start(Credential{"ci-dev", CredentialLevel::JenkinsUser});
    apply_action(clean, ci2, Action{JenkinsLogin{"ci-dev"}, ""}, {});
    apply_action(clean, ci2, Action{RunBuild{"py-app-build"}, ""}, {});
    apply_action(clean, ci2, Action{DeployImage{deploy}, ""}, {});
    ActionResult nothing = apply_action(
        clean, ci2, Action{TriggerPayloadRoute{"py-app-service", "apps", "/hack"}, ""}, {});
    c.require(nothing.status == ActionStatus::FailedPrecondition && nothing.detail == "not found",
              "clean build served a payload route");
}

void criterion_4_exposure_boundaries(Criterion& c) {
    ClusterState fixture = canonical_fixture();
    const Service* broker = fixture.find_service("kafka", "strimzi-service");
    c.require(broker && !reachable(fixture, Location::external(), *broker),
              "broker reachable before exposure");

    for (int port : {30000, 30500, 32767}) {
        ClusterState state = fixture;
        Session net = Session::start(Credential{"net-sa", CredentialLevel::ServiceAccount});
        ActionResult r = apply_action(
            state, net, Action{AddNodePort{"strimzi-service", "kafka", port}, ""}, {});
        c.require(r.applied(), "port " + std::to_string(port) + " rejected");
        const Service* svc = state.find_service("kafka", "strimzi-service");
        c.require(reachable(state, Location::external(), *svc),
                  "port " + std::to_string(port) + " did not expose the service");
    }
    for (int port : {29999, 32768}) {
        ClusterState state = fixture;
        Session net = Session::start(Credential{"net-sa", CredentialLevel::ServiceAccount});
        ActionResult r = apply_action(
            state, net, Action{AddNodePort{"strimzi-service", "kafka", port}, ""}, {});
        c.require(r.status == ActionStatus::FailedPrecondition,
                  "port " + std::to_string(port) + " accepted");
        const Service* svc = state.find_service("kafka", "strimzi-service");
        c.require(!reachable(state, Location::external(), *svc),
                  "rejected port still exposed the service");
    }
}

void criterion_5_escalation_chain(Criterion& c) {
    ClusterState state = canonical_fixture();
    Session crud = Session::start(Credential{"crud-sa", CredentialLevel::ServiceAccount});

    PodManifest attack_pod;
    attack_pod.name = "attack-pod";
    attack_pod.namespace_ = "developer";
    attack_pod.service_account = "default";
    attack_pod.app_label = "attack";
    attack_pod.image = {"toolbox", "1.0"};
    attack_pod.volumes = {Volume{Volume::Kind::HostPath, "/", "/host"}};

    c.require(apply_action(state, crud, Action{KubectlApply{attack_pod}, ""}, {}).applied(),
              "apply failed");
    c.require(
        apply_action(state, crud, Action{KubectlExec{"attack-pod", "developer"}, ""}, {})
            .applied(),
        "exec failed");
    c.require(apply_action(state, crud, Action{ChrootEscape{}, ""}, {}).applied(),
              "chroot failed");
    c.require(apply_action(state, crud, Action{ReadNodeKubeconfig{}, ""}, {}).applied(),
              "kubeconfig read failed");
    c.require(
        apply_action(state, crud, Action{Authenticate{"kube-admin-node-1"}, ""}, {}).applied(),
        "authenticate failed");

    for (Verb v : kAllVerbs)
        for (ResourceKind k : kAllResourceKinds)
            for (const std::string& ns : state.namespaces)
                if (authorize(state, crud, v, k, ns) != Authz::Allow)
                    c.require(false, "authorize false for " + to_string(v) + " " + to_string(k) +
                                         " in " + ns);

    ActionResult del = apply_action(state, crud, Action{DeletePod{"py-app", "apps"}, ""}, {});
    c.require(del.applied(), "foreign-namespace delete failed: " + del.detail);
    c.require(state.find_pod("apps", "py-app") == nullptr, "pod survived deletion");
}

void criterion_6_agreement(Criterion& c) {
    ClusterState fixture = canonical_fixture();
    std::vector<PolicySet> policies = {{}};
    for (const std::string& name : mitigation_names()) policies.push_back(policy_file(name));

    int cases = 0;
    for (const Scenario& scenario : builtin_scenarios())
        for (const PolicySet& policy : policies) {
            ++cases;
            if (!agrees_with_simulator(fixture, scenario, policy))
                c.require(false, scenario.id + ": disagreement under policy set " +
                                     std::to_string(cases % 5));
        }
    c.require(cases == 20, "expected 20 built-in cases");

    std::mt19937 rng(987654321);
    int random_cases = 0;
    for (int kind = 0; kind < 4; ++kind) {
        for (int iter = 0; iter < 50; ++iter) {
            testworld::GeneratedCase gen = testworld::generate_case(kind, rng);
            ++random_cases;
            if (!validate(gen.fixture, true).empty()) {
                c.require(false, "generated fixture invalid");
                continue;
            }
            if (!agrees_with_simulator(gen.fixture, gen.scenario, gen.policy))
                c.require(false, "disagreement on random world kind " + std::to_string(kind) +
                                     " iter " + std::to_string(iter));
        }
    }
    c.require(random_cases == 200, "expected 200 randomized cases");
}

void criterion_7_engine_properties(Criterion& c) {
    ClusterState fixture = canonical_fixture();

    // Determinism: identical serialized traces for two runs of any built-in.
    for (const Scenario& scenario : builtin_scenarios()) {
        for (const PolicySet& policy : {PolicySet{}, policy_file("all-mitigations")}) {
            ClusterState f1 = load_fixture(serialize_fixture(fixture));
            ClusterState f2 = load_fixture(serialize_fixture(fixture));
            RunReport r1 = build_run_report(f1, {scenario}, policy);
            RunReport r2 = build_run_report(f2, {scenario}, policy);
            c.require(report_to_json(r1).dump() == report_to_json(r2).dump(),
                      scenario.id + ": serialized traces differ between runs");
        }
    }

    // Atomicity over randomized action/session/policy draws.
    std::mt19937 rng(24);
    std::vector<Session> sessions = {
        Session::start(Credential{"crud-sa", CredentialLevel::ServiceAccount}),
        Session::start(Credential{"dev-sa", CredentialLevel::ServiceAccount}),
        Session::start(Credential{"net-sa", CredentialLevel::ServiceAccount}),
        Session::start(Credential{"ci-dev", CredentialLevel::JenkinsUser}),
        Session::start(Credential{"ghost", CredentialLevel::User}),
    };
    std::vector<PolicySet> policies = {{}, policy_file("all-mitigations"),
                                       policy_file("hostpath-restriction")};

    PodManifest hp;
    hp.name = "hp";
    hp.namespace_ = "developer";
    hp.service_account = "default";
    hp.app_label = "hp";
    hp.image = {"toolbox", "1.0"};
    hp.volumes = {Volume{Volume::Kind::HostPath, "/", "/host"}};
    EditBuildStep edit;
    edit.job = "py-app-build";
    edit.step_index = 0;
    edit.script = "x";
    std::vector<Action> actions = {
        {KubectlApply{hp}, ""},
        {KubectlExec{"py-app", "apps"}, ""},
        {ChrootEscape{}, ""},
        {ReadNodeKubeconfig{}, ""},
        {AddNodePort{"strimzi-service", "kafka", 29999}, ""},
        {AddNodePort{"strimzi-service", "kafka", 30500}, ""},
        {ConsumeTopic{"strimzi-service", "kafka", "orders"}, ""},
        {JenkinsLogin{"ci-dev"}, ""},
        {edit, ""},
        {RunBuild{"py-app-build"}, ""},
        {DeletePod{"py-app", "apps"}, ""},
        {Authenticate{"nobody"}, ""},
        {TriggerPayloadRoute{"py-app-service", "apps", "/hack"}, ""},
    };

    int atomic_checks = 0;
    for (int iter = 0; iter < 1500; ++iter) {
        std::uniform_int_distribution<size_t> pick_a(0, actions.size() - 1);
        std::uniform_int_distribution<size_t> pick_s(0, sessions.size() - 1);
        std::uniform_int_distribution<size_t> pick_p(0, policies.size() - 1);
        ClusterState state = fixture;
        Session session = sessions[pick_s(rng)];
        ClusterState before_state = state;
        Session before_session = session;
        ActionResult r = apply_action(state, session, actions[pick_a(rng)], policies[pick_p(rng)]);
        if (!r.applied()) {
            ++atomic_checks;
            if (!(state == before_state && session == before_session))
                c.require(false, "non-applied result mutated state or session");
        }
    }
    c.require(atomic_checks >= 1000,
              "only " + std::to_string(atomic_checks) + " atomicity cases hit");

    // RBAC monotonicity, randomized worlds, >= 1000 positive checks.
    std::mt19937 rbac_rng(25);
    int rbac_checks = 0;
    for (int iter = 0; iter < 300 || rbac_checks < 1000; ++iter) {
        ClusterState world;
        std::uniform_int_distribution<int> ns_count(1, 4), sa_count(1, 6), rule_count(0, 8),
            coin(0, 1);
        int n_ns = ns_count(rbac_rng);
        for (int i = 0; i < n_ns; ++i) world.namespaces.push_back("ns" + std::to_string(i));
        std::vector<std::string> principals;
        int n_sa = sa_count(rbac_rng);
        for (int i = 0; i < n_sa; ++i) {
            std::string name = "sa" + std::to_string(i);
            std::uniform_int_distribution<size_t> pick_ns(0, world.namespaces.size() - 1);
            world.service_accounts.push_back({name, world.namespaces[pick_ns(rbac_rng)]});
            principals.push_back(name);
        }
        auto random_rule = [&]() {
            RoleRule rule;
            std::uniform_int_distribution<size_t> pick_sa(0, principals.size() - 1);
            rule.principal = principals[pick_sa(rbac_rng)];
            for (Verb v : kAllVerbs)
                if (coin(rbac_rng)) rule.verbs.insert(v);
            if (rule.verbs.empty()) rule.verbs.insert(Verb::Get);
            for (ResourceKind k : kAllResourceKinds)
                if (coin(rbac_rng)) rule.resource_kinds.insert(k);
            if (rule.resource_kinds.empty()) rule.resource_kinds.insert(ResourceKind::Pod);
            std::uniform_int_distribution<size_t> pick_ns(0, world.namespaces.size());
            size_t ns = pick_ns(rbac_rng);
            rule.scope =
                ns == world.namespaces.size() ? kClusterWideScope : world.namespaces[ns];
            return rule;
        };
        int n_rules = rule_count(rbac_rng);
        for (int i = 0; i < n_rules; ++i) world.role_rules.push_back(random_rule());
        ClusterState grown = world;
        grown.role_rules.push_back(random_rule());
        for (const std::string& principal : principals) {
            Session s = Session::start(Credential{principal, CredentialLevel::ServiceAccount});
            for (Verb v : kAllVerbs)
                for (ResourceKind k : kAllResourceKinds)
                    for (const std::string& ns : world.namespaces)
                        if (authorize(world, s, v, k, ns) == Authz::Allow) {
                            ++rbac_checks;
                            if (authorize(grown, s, v, k, ns) != Authz::Allow)
                                c.require(false, "rbac monotonicity violated");
                        }
        }
        if (iter > 5000) break;
    }
    c.require(rbac_checks >= 1000, "only " + std::to_string(rbac_checks) + " rbac cases hit");

    // Policy monotone restriction, >= 1000 non-applied comparisons.
    std::mt19937 pol_rng(26);
    std::vector<PolicyRule> extra_rules;
    for (const std::string& name : mitigation_names())
        for (const PolicyRule& r : policy_file(name).rules) extra_rules.push_back(r);
    int pol_checks = 0;
    for (int iter = 0; iter < 4000 && pol_checks < 1200; ++iter) {
        std::uniform_int_distribution<size_t> pick_a(0, actions.size() - 1);
        std::uniform_int_distribution<size_t> pick_s(0, sessions.size() - 1);
        std::uniform_int_distribution<size_t> pick_p(0, policies.size() - 1);
        std::uniform_int_distribution<size_t> pick_r(0, extra_rules.size() - 1);
        ClusterState s1 = fixture;
        ClusterState s2 = fixture;
        Session sess1 = sessions[pick_s(pol_rng)];
        Session sess2 = sess1;
        const Action& action = actions[pick_a(pol_rng)];
        PolicySet policy = policies[pick_p(pol_rng)];
        PolicyRule extra = extra_rules[pick_r(pol_rng)];
        extra.id += "-x";
        ActionResult before = apply_action(s1, sess1, action, policy);
        ActionResult after = apply_action(s2, sess2, action, policy.with(extra));
        if (!before.applied()) {
            ++pol_checks;
            if (after.applied()) c.require(false, "added rule un-blocked an action");
        }
    }
    c.require(pol_checks >= 1000, "only " + std::to_string(pol_checks) + " policy cases hit");
}

// ---------------------------------------------------------------------------
// Criterion 8: exhaustive search, no privilege from nothing
// ---------------------------------------------------------------------------

std::string session_key(const Session& s) {
    std::ostringstream out;
    out << s.credential.subject << "|" << to_string(s.credential.level) << "|"
        << s.location.str() << "|";
    if (s.open_shell)
        out << (s.open_shell->kind == ShellRef::Kind::Pod ? "pod:" : "node:")
            << s.open_shell->namespace_ << "/" << s.open_shell->name;
    out << "|";
    for (const Credential& c : s.captured_credentials)
        out << c.subject << "," << to_string(c.level) << ";";
    out << "|" << (s.ci_logged_in_as ? *s.ci_logged_in_as : "");
    return out.str();
}

// Every action kind instantiated over the fixture's entities; ports are
// sampled at the range boundaries plus one interior value.
std::vector<Action> instantiate_alphabet(const ClusterState& fixture) {
    std::vector<Action> out;
    std::set<std::string> subjects = {"intruder"};
    for (const auto& [node, cred] : fixture.node_credentials) subjects.insert(cred.subject);
    for (const ServiceAccount& sa : fixture.service_accounts) subjects.insert(sa.name);
    for (const auto& [user, cred] : fixture.ci_server.users) subjects.insert(user);
    for (const std::string& s : subjects) out.push_back({Authenticate{s}, ""});

    for (const std::string& ns : fixture.namespaces) {
        PodManifest plain;
        plain.name = "zz-pod";
        plain.namespace_ = ns;
        plain.service_account = "default";
        plain.app_label = "zz";
        plain.image = {"toolbox", "1"};
        out.push_back({KubectlApply{plain}, ""});
        PodManifest hp = plain;
        hp.volumes = {Volume{Volume::Kind::HostPath, "/", "/host"}};
        out.push_back({KubectlApply{hp}, ""});
        out.push_back({KubectlExec{"zz-pod", ns}, ""});
        PodManifest deploy = plain;
        deploy.name = "py-app";
        deploy.namespace_ = ns;
        out.push_back({DeployImage{deploy}, ""});
    }
    for (const Pod& p : fixture.pods) out.push_back({KubectlExec{p.name, p.namespace_}, ""});
    out.push_back({ChrootEscape{}, ""});
    out.push_back({ReadNodeKubeconfig{}, ""});
    for (const Service& svc : fixture.services) {
        for (int port : {30000, 30500, 32767})
            out.push_back({AddNodePort{svc.name, svc.namespace_, port}, ""});
        out.push_back({Connect{svc.name, svc.namespace_}, ""});
        for (const auto& [topic, records] : fixture.broker.topics) {
            out.push_back({ConsumeTopic{svc.name, svc.namespace_, topic}, ""});
            out.push_back({ProduceTopic{svc.name, svc.namespace_, topic, "x"}, ""});
        }
        out.push_back({TriggerPayloadRoute{svc.name, svc.namespace_, "/hack"}, ""});
    }
    for (const auto& [user, cred] : fixture.ci_server.users)
        out.push_back({JenkinsLogin{user}, ""});
    out.push_back({JenkinsLogin{"intruder"}, ""});
    for (const auto& [job_name, job] : fixture.ci_server.jobs) {
        for (int idx : {0, 1}) {
            EditBuildStep edit;
            edit.job = job_name;
            edit.step_index = idx;
            edit.script = "inject-route /hack requirements.txt";
            edit.payload_route = "/hack";
            edit.payload_file = "requirements.txt";
            out.push_back({edit, ""});
        }
        out.push_back({RunBuild{job_name}, ""});
    }
    for (const auto& [key, image] : fixture.registry.images)
        out.push_back({PullImage{key.first, key.second}, ""});
    for (const Pod& p : fixture.pods) out.push_back({DeletePod{p.name, p.namespace_}, ""});
    return out;
}

struct Search {
    const std::vector<Action>& alphabet;
    const PolicySet policy;
    std::set<std::string> visited;
    long long applied_transitions = 0;
    long long actions_tried = 0;
    bool admin_reached = false;

    void run(const ClusterState& state, const Session& session, int depth) {
        if (admin_reached) return;
        if (session.has_cluster_admin()) {
            admin_reached = true;
            return;
        }
        if (depth == 0) return;
        std::string key =
            std::to_string(depth) + "#" + serialize_fixture(state) + "@" + session_key(session);
        if (!visited.insert(key).second) return;

        for (const Action& action : alphabet) {
            ClusterState next_state = state;
            Session next_session = session;
            ActionResult r = apply_action(next_state, next_session, action, policy);
            ++actions_tried;
            if (!r.applied()) continue;
            if (next_state == state && next_session == session) continue;  // no-op
            ++applied_transitions;
            run(next_state, next_session, depth - 1);
            if (admin_reached) return;
        }
    }
};

void criterion_8_no_privilege_from_nothing(Criterion& c) {
    auto start = std::chrono::steady_clock::now();

    // Small world: deterministic draw from the generator, no attacker grants.
    std::mt19937 rng(31337);
    ClusterState fixture = testworld::base_world(rng);
    c.require(validate(fixture, true).empty(), "small fixture invalid");

    std::vector<Action> alphabet = instantiate_alphabet(fixture);
    Search search{alphabet, PolicySet{}, {}, 0, 0, false};
    Session intruder = Session::start(Credential{"intruder", CredentialLevel::User});
    search.run(fixture, intruder, 10);

    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    c.require(!search.admin_reached, "an unprivileged session reached cluster admin");
    c.require(search.actions_tried > 0, "search explored nothing");
    c.require(elapsed < 60000, "search exceeded 60 s");
    std::ostringstream note;
    note << "(" << search.actions_tried << " actions tried, " << search.applied_transitions
         << " transitions, " << elapsed << " ms)";
    c.title += " " + note.str();
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "baseline attack success: four built-ins achieve their exact goals"},
        {2, "mitigation matrix: diagonal blocked, off-diagonal achieved, all-mitigations blocks"},
        {3, "payload fidelity: backdoored image serves requirements.txt, clean build serves nothing"},
        {4, "exposure boundaries: reachability flips inside [30000, 32767], rejected outside"},
        {5, "escalation chain: crud session reaches full authorization and foreign delete"},
        {6, "analyzer/simulator agreement: 20 built-in cases and 200 randomized worlds"},
        {7, "engine properties: determinism, atomicity, rbac and policy monotonicity"},
        {8, "no privilege from nothing: exhaustive search to depth 10 finds no admin path"},
    };

    criterion_1_baseline(criteria[0]);
    criterion_2_mitigation_matrix(criteria[1]);
    criterion_3_payload_fidelity(criteria[2]);
    criterion_4_exposure_boundaries(criteria[3]);
    criterion_5_escalation_chain(criteria[4]);
    criterion_6_agreement(criteria[5]);
    criterion_7_engine_properties(criteria[6]);
    criterion_8_no_privilege_from_nothing(criteria[7]);

    bool all_passed = true;
    for (const Criterion& c : criteria) {
        std::cout << (c.passed ? "[PASS]" : "[FAIL]") << " criterion " << c.number << ": "
                  << c.title << "\n";
        for (const std::string& f : c.failures) std::cout << "         " << f << "\n";
        if (!c.passed) all_passed = false;
    }
    return all_passed ? 0 : 1;
}
