#pragma once

// Transition semantics for every action kind. apply_action evaluates, in
// strict order: the active policy set, then RBAC, then per-kind
// preconditions; only then does it commit effects. A non-applied result
// leaves both state and session exactly as they were, and the state clock
// advances once per applied state-mutating action.

#include <string>

#include "sscs/action.hpp"
#include "sscs/model.hpp"
#include "sscs/policy.hpp"

namespace sscs {

namespace engine_detail {

// RBAC gate per action kind. Cluster API operations require a matching role
// rule; CI-side, registry-side, and plain network operations are not
// RBAC-governed. Exec maps to create on pods, matching the API server's
// treatment of exec as a pod subresource creation.
struct RbacRequirement {
    Verb verb;
    ResourceKind kind;
    std::string namespace_;
    bool update_or_create = false;  // AddNodePort passes with either verb
};

inline std::optional<RbacRequirement> rbac_requirement(const ClusterState& state,
                                                       const Action& action) {
    if (const auto* a = std::get_if<KubectlApply>(&action.value))
        return RbacRequirement{Verb::Create, ResourceKind::Pod, a->manifest.namespace_, false};
    if (const auto* a = std::get_if<KubectlExec>(&action.value))
        return RbacRequirement{Verb::Create, ResourceKind::Pod, a->namespace_, false};
    if (const auto* a = std::get_if<AddNodePort>(&action.value))
        return RbacRequirement{Verb::Update, ResourceKind::Service, a->namespace_, true};
    if (const auto* a = std::get_if<DeployImage>(&action.value)) {
        bool exists = state.find_pod(a->manifest.namespace_, a->manifest.name) != nullptr;
        return RbacRequirement{exists ? Verb::Update : Verb::Create, ResourceKind::Pod,
                               a->manifest.namespace_, false};
    }
    if (const auto* a = std::get_if<DeletePod>(&action.value))
        return RbacRequirement{Verb::Delete, ResourceKind::Pod, a->namespace_, false};
    return std::nullopt;
}

inline std::optional<ActionResult> check_rbac(const ClusterState& state, const Session& session,
                                              const Action& action) {
    std::optional<RbacRequirement> req = rbac_requirement(state, action);
    if (!req) return std::nullopt;
    Authz authz = authorize(state, session, req->verb, req->kind, req->namespace_);
    if (authz == Authz::Allow) return std::nullopt;
    if (req->update_or_create &&
        authorize(state, session, Verb::Create, req->kind, req->namespace_) == Authz::Allow)
        return std::nullopt;
    if (authz == Authz::UnknownPrincipal)
        return ActionResult::denied("unknown principal " + session.credential.subject);
    return ActionResult::denied("no rule grants " + to_string(req->verb) + " " +
                                to_string(req->kind) + " in " + req->namespace_ + " to " +
                                session.credential.subject);
}

// -- per-kind handlers. Preconditions first; mutations only after every
// -- check has passed.

inline ActionResult do_authenticate(ClusterState&, Session& session, const Authenticate& a) {
    const Credential* cred = session.find_captured(a.subject);
    if (!cred) return ActionResult::failed("credential for " + a.subject + " not held");
    session.credential = *cred;
    return ActionResult::ok();
}

inline ActionResult do_kubectl_apply(ClusterState& state, Session&, const KubectlApply& a) {
    const PodManifest& m = a.manifest;
    if (m.name.empty()) return ActionResult::failed("pod manifest has no name");
    if (!state.has_namespace(m.namespace_))
        return ActionResult::failed("namespace " + m.namespace_ + " not found");
    if (state.find_pod(m.namespace_, m.name))
        return ActionResult::failed("pod " + m.namespace_ + "/" + m.name + " already exists");
    bool sa_ok = false;
    for (const ServiceAccount& sa : state.service_accounts)
        if (sa.name == m.service_account && sa.namespace_ == m.namespace_) sa_ok = true;
    if (!sa_ok)
        return ActionResult::failed("service account " + m.service_account + " not found in " +
                                    m.namespace_);
    std::optional<ImageRef> image = state.registry.resolve(m.image.name, m.image.tag);
    if (!image) return ActionResult::failed("image " + m.image.str() + " not in registry");
    for (const Volume& v : m.volumes)
        if (v.kind == Volume::Kind::HostPath &&
            (v.host_directory.empty() || v.host_directory.front() != '/'))
            return ActionResult::failed("hostPath directory must be absolute");
    std::string node = m.node;
    if (node.empty()) {
        if (state.nodes.empty()) return ActionResult::failed("no nodes available");
        node = state.nodes.front().name;
    } else if (!state.find_node(node)) {
        return ActionResult::failed("node " + node + " not found");
    }

    Pod pod;
    pod.name = m.name;
    pod.namespace_ = m.namespace_;
    pod.node = node;
    pod.service_account = m.service_account;
    pod.app_label = m.app_label;
    pod.image = *image;
    pod.volumes = m.volumes;
    pod.ready = true;
    state.pods.push_back(pod);
    state.find_node(node)->running_containers.push_back(pod.namespace_ + "/" + pod.name);
    return ActionResult::ok();
}

inline ActionResult do_kubectl_exec(ClusterState& state, Session& session,
                                    const KubectlExec& a) {
    const Pod* pod = state.find_pod(a.namespace_, a.pod);
    if (!pod) return ActionResult::failed("pod " + a.namespace_ + "/" + a.pod + " not found");
    if (!pod->ready) return ActionResult::failed("pod not ready");
    session.open_shell = ShellRef{ShellRef::Kind::Pod, pod->namespace_, pod->name};
    session.location = Location::in_cluster(pod->namespace_);
    return ActionResult::ok();
}

inline ActionResult do_chroot_escape(ClusterState& state, Session& session) {
    if (!session.open_shell || session.open_shell->kind != ShellRef::Kind::Pod)
        return ActionResult::failed("no open pod shell");
    const Pod* pod = state.find_pod(session.open_shell->namespace_, session.open_shell->name);
    if (!pod) return ActionResult::failed("shell pod no longer exists");
    // Only a hostPath volume mounting the node root directory enables the
    // escape; narrower mounts expose just their own subtree.
    if (!pod->has_root_host_path()) return ActionResult::failed("no escape volume");
    session.location = Location::on_node(pod->node);
    session.open_shell = ShellRef{ShellRef::Kind::Node, "", pod->node};
    return ActionResult::ok_with(
        CredentialObservation{Credential{"root@" + pod->node, CredentialLevel::NodeRoot}});
}

inline ActionResult do_read_node_kubeconfig(ClusterState& state, Session& session) {
    if (session.location.zone != Location::Zone::OnNode)
        return ActionResult::failed("not on a node");
    const std::string& node = session.location.detail;
    auto cred = state.node_credentials.find(node);
    if (cred == state.node_credentials.end())
        return ActionResult::failed("node credential not found");
    if (!session.holds_credential(cred->second.subject))
        session.captured_credentials.push_back(cred->second);
    return ActionResult::ok_with(CredentialObservation{cred->second});
}

inline ActionResult do_add_node_port(ClusterState& state, Session&, const AddNodePort& a) {
    Service* svc = state.find_service(a.namespace_, a.service);
    if (!svc)
        return ActionResult::failed("service " + a.namespace_ + "/" + a.service + " not found");
    if (a.node_port < kNodePortMin || a.node_port > kNodePortMax)
        return ActionResult::failed("node port " + std::to_string(a.node_port) +
                                    " outside [30000, 32767]");
    if (state.node_port_in_use(a.node_port))
        return ActionResult::failed("node port " + std::to_string(a.node_port) + " occupied");
    svc->exposure.node_port = a.node_port;
    return ActionResult::ok_with(EndpointObservation{{svc->cluster_ip, svc->port, svc->exposure}});
}

inline ActionResult do_connect(ClusterState& state, Session& session, const Connect& a) {
    const Service* svc = state.find_service(a.namespace_, a.service);
    if (!svc)
        return ActionResult::failed("service " + a.namespace_ + "/" + a.service + " not found");
    if (!reachable(state, session.location, *svc))
        return ActionResult::failed("service unreachable from " + session.location.str());
    return ActionResult::ok_with(EndpointObservation{{svc->cluster_ip, svc->port, svc->exposure}});
}

inline ActionResult broker_gate(const ClusterState& state, const Session& session,
                                const std::string& ns, const std::string& service,
                                const Service** out) {
    const Service* svc = state.find_service(ns, service);
    if (!svc) return ActionResult::failed("service " + ns + "/" + service + " not found");
    if (!reachable(state, session.location, *svc))
        return ActionResult::failed("service unreachable from " + session.location.str());
    if (state.broker.service_ref != svc->qualified_name())
        return ActionResult::failed("service does not front the broker");
    *out = svc;
    return ActionResult::ok();
}

inline ActionResult do_consume_topic(ClusterState& state, Session& session,
                                     const ConsumeTopic& a) {
    const Service* svc = nullptr;
    ActionResult gate = broker_gate(state, session, a.namespace_, a.service, &svc);
    if (!gate.applied()) return gate;
    auto topic = state.broker.topics.find(a.topic);
    if (topic == state.broker.topics.end())
        return ActionResult::failed("topic " + a.topic + " not found");
    // Peek semantics: the full ordered record list, no state change.
    return ActionResult::ok_with(RecordsObservation{topic->second});
}

inline ActionResult do_produce_topic(ClusterState& state, Session& session,
                                     const ProduceTopic& a) {
    const Service* svc = nullptr;
    ActionResult gate = broker_gate(state, session, a.namespace_, a.service, &svc);
    if (!gate.applied()) return gate;
    auto topic = state.broker.topics.find(a.topic);
    if (topic == state.broker.topics.end())
        return ActionResult::failed("topic " + a.topic + " not found");
    topic->second.push_back(a.record);
    return ActionResult::ok();
}

inline ActionResult do_jenkins_login(ClusterState& state, Session& session,
                                     const JenkinsLogin& a) {
    const Credential* account = state.ci_server.find_user(a.user);
    if (!account) return ActionResult::failed("CI user " + a.user + " not found");
    if (!session.holds_credential(a.user))
        return ActionResult::failed("credential for " + a.user + " not held");
    session.ci_logged_in_as = a.user;
    return ActionResult::ok();
}

inline ActionResult do_edit_build_step(ClusterState& state, Session& session,
                                       const EditBuildStep& a) {
    if (!session.ci_logged_in_as) return ActionResult::failed("not logged in to CI server");
    auto job = state.ci_server.jobs.find(a.job);
    if (job == state.ci_server.jobs.end())
        return ActionResult::failed("build job " + a.job + " not found");
    if (a.step_index < 0 || static_cast<size_t>(a.step_index) >= job->second.steps.size())
        return ActionResult::failed("step index " + std::to_string(a.step_index) +
                                    " out of range");
    if (a.payload_route.has_value() != a.payload_file.has_value())
        return ActionResult::failed("payload route and file must be given together");
    BuildStep& step = job->second.steps[static_cast<size_t>(a.step_index)];
    step.script = a.script;
    if (a.payload_route) step.injected_routes[*a.payload_route] = *a.payload_file;
    return ActionResult::ok();
}

inline ActionResult do_run_build(ClusterState& state, Session&, const RunBuild& a) {
    auto job = state.ci_server.jobs.find(a.job);
    if (job == state.ci_server.jobs.end())
        return ActionResult::failed("build job " + a.job + " not found");
    BuildJob& j = job->second;
    j.builds_completed += 1;
    std::string tag = std::to_string(j.builds_completed);
    Image image;
    image.files = state.source_repo.files;  // snapshot of the source tree
    for (const BuildStep& step : j.steps)
        for (const auto& [route, file] : step.injected_routes)
            image.payload_routes[route] = file;
    state.registry.images[{j.output_image_name, tag}] = image;
    state.registry.latest[j.output_image_name] = tag;
    return ActionResult::ok_with(ImageRefObservation{ImageRef{j.output_image_name, tag}});
}

inline ActionResult do_pull_image(ClusterState& state, Session&, const PullImage& a) {
    std::optional<ImageRef> ref = state.registry.resolve(a.image, a.tag);
    if (!ref) return ActionResult::failed("image " + a.image + ":" + a.tag + " not in registry");
    return ActionResult::ok_with(ImageRefObservation{*ref});
}

inline ActionResult do_deploy_image(ClusterState& state, Session& session,
                                    const DeployImage& a) {
    const PodManifest& m = a.manifest;
    std::optional<ImageRef> image = state.registry.resolve(m.image.name, m.image.tag);
    if (!image) return ActionResult::failed("image " + m.image.str() + " not in registry");
    if (Pod* existing = state.find_pod(m.namespace_, m.name)) {
        existing->image = *image;
        existing->ready = true;
        return ActionResult::ok_with(ImageRefObservation{*image});
    }
    KubectlApply create{m};
    create.manifest.image = *image;
    ActionResult result = do_kubectl_apply(state, session, create);
    if (!result.applied()) return result;
    return ActionResult::ok_with(ImageRefObservation{*image});
}

inline ActionResult do_trigger_payload_route(ClusterState& state, Session& session,
                                             const TriggerPayloadRoute& a) {
    const Service* svc = state.find_service(a.namespace_, a.service);
    if (!svc)
        return ActionResult::failed("service " + a.namespace_ + "/" + a.service + " not found");
    if (!reachable(state, session.location, *svc))
        return ActionResult::failed("service unreachable from " + session.location.str());
    std::vector<const Pod*> backing = state.pods_backing(*svc);
    const Pod* pod = nullptr;
    for (const Pod* p : backing)
        if (p->ready && (!pod || p->name < pod->name)) pod = p;
    if (!pod) return ActionResult::failed("no ready pod backs the service");
    const Image* image = state.registry.find(pod->image);
    if (!image) return ActionResult::failed("pod image missing from registry");
    auto route = image->payload_routes.find(a.url_path);
    if (route == image->payload_routes.end()) return ActionResult::failed("not found");
    auto file = image->files.find(route->second);
    if (file == image->files.end())
        return ActionResult::failed("disclosed file " + route->second + " missing from image");
    return ActionResult::ok_with(FileContentsObservation{file->second});
}

inline ActionResult do_delete_pod(ClusterState& state, Session& session, const DeletePod& a) {
    Pod* pod = state.find_pod(a.namespace_, a.pod);
    if (!pod) return ActionResult::failed("pod " + a.namespace_ + "/" + a.pod + " not found");
    std::string ref = a.namespace_ + "/" + a.pod;
    if (Node* node = state.find_node(pod->node)) {
        auto& rc = node->running_containers;
        rc.erase(std::remove(rc.begin(), rc.end(), ref), rc.end());
    }
    if (session.open_shell && session.open_shell->kind == ShellRef::Kind::Pod &&
        session.open_shell->namespace_ == a.namespace_ && session.open_shell->name == a.pod)
        session.open_shell.reset();
    state.pods.erase(std::remove_if(state.pods.begin(), state.pods.end(),
                                    [&](const Pod& p) {
                                        return p.namespace_ == a.namespace_ && p.name == a.pod;
                                    }),
                     state.pods.end());
    return ActionResult::ok();
}

inline ActionResult dispatch(ClusterState& state, Session& session, const Action& action) {
    struct Visitor {
        ClusterState& state;
        Session& session;
        ActionResult operator()(const Authenticate& a) {
            return do_authenticate(state, session, a);
        }
        ActionResult operator()(const KubectlApply& a) {
            return do_kubectl_apply(state, session, a);
        }
        ActionResult operator()(const KubectlExec& a) {
            return do_kubectl_exec(state, session, a);
        }
        ActionResult operator()(const ChrootEscape&) { return do_chroot_escape(state, session); }
        ActionResult operator()(const ReadNodeKubeconfig&) {
            return do_read_node_kubeconfig(state, session);
        }
        ActionResult operator()(const AddNodePort& a) {
            return do_add_node_port(state, session, a);
        }
        ActionResult operator()(const Connect& a) { return do_connect(state, session, a); }
        ActionResult operator()(const ConsumeTopic& a) {
            return do_consume_topic(state, session, a);
        }
        ActionResult operator()(const ProduceTopic& a) {
            return do_produce_topic(state, session, a);
        }
        ActionResult operator()(const JenkinsLogin& a) {
            return do_jenkins_login(state, session, a);
        }
        ActionResult operator()(const EditBuildStep& a) {
            return do_edit_build_step(state, session, a);
        }
        ActionResult operator()(const RunBuild& a) { return do_run_build(state, session, a); }
        ActionResult operator()(const PullImage& a) { return do_pull_image(state, session, a); }
        ActionResult operator()(const DeployImage& a) {
            return do_deploy_image(state, session, a);
        }
        ActionResult operator()(const TriggerPayloadRoute& a) {
            return do_trigger_payload_route(state, session, a);
        }
        ActionResult operator()(const DeletePod& a) { return do_delete_pod(state, session, a); }
    };
    return std::visit(Visitor{state, session}, action.value);
}

}  // namespace engine_detail

// Applies one action. Evaluation order: policy, RBAC, per-kind
// preconditions. Effects commit atomically; any non-applied result leaves
// state and session untouched.
inline ActionResult apply_action(ClusterState& state, Session& session, const Action& action,
                                 const PolicySet& policy) {
    if (session.credential.subject.empty())
        return ActionResult::failed("session not authenticated");
    if (std::optional<std::string> rule_id = evaluate(policy, state, session, action))
        return ActionResult::blocked(*rule_id);
    if (std::optional<ActionResult> denied = engine_detail::check_rbac(state, session, action))
        return *denied;

    ClusterState state_backup = state;
    Session session_backup = session;
    ActionResult result = engine_detail::dispatch(state, session, action);
    if (!result.applied()) {
        state = std::move(state_backup);
        session = std::move(session_backup);
        return result;
    }
    // The clock counts applied world transitions; session-only and purely
    // observational actions leave the state (clock included) untouched.
    if (!(state == state_backup)) state.clock += 1;
    return result;
}

}  // namespace sscs
