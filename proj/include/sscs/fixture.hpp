#pragma once

// Fixture file format: a declarative YAML document describing the complete
// world state (nodes, namespaces, accounts, role rules, pods, services, CI
// users/jobs, registry images, broker topics). load_fixture validates the
// result against the ClusterState invariants; serialize_fixture emits the
// canonical form used for digests and snapshots.

#include <fstream>
#include <sstream>
#include <string>

#include "sscs/model.hpp"
#include "sscs/yaml.hpp"

namespace sscs {

using yaml::ParseError;

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::vector<std::string>& violations)
        : std::runtime_error(join(violations)) {}

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "fixture invalid:";
        for (const std::string& s : v) out += "\n  - " + s;
        return out;
    }
};

namespace fixture_detail {

inline Credential parse_credential(const yaml::Node& node) {
    Credential c;
    c.subject = node.at("subject").as_string();
    std::string level = node.at("level").as_string();
    auto parsed = credential_level_from_string(level);
    if (!parsed)
        throw ParseError("unknown credential level \"" + level +
                             "\" (expected one of: user, service-account, jenkins-user, "
                             "cluster-admin, node-root)",
                         node.line());
    c.level = *parsed;
    return c;
}

inline yaml::Node emit_credential(const Credential& c) {
    yaml::Node n = yaml::Node::mapping();
    n.set("subject", yaml::scalar(c.subject));
    n.set("level", yaml::scalar(to_string(c.level)));
    return n;
}

inline ImageRef parse_image_ref(const yaml::Node& node) {
    const std::string& s = node.as_string();
    size_t colon = s.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == s.size())
        throw ParseError("image reference must be name:tag, got \"" + s + "\"", node.line());
    return ImageRef{s.substr(0, colon), s.substr(colon + 1)};
}

inline Volume parse_volume(const yaml::Node& node) {
    Volume v;
    std::string kind = node.at("kind").as_string();
    if (kind == "host-path") {
        v.kind = Volume::Kind::HostPath;
        v.host_directory = node.at("host_dir").as_string();
    } else if (kind == "ephemeral") {
        v.kind = Volume::Kind::Ephemeral;
    } else {
        throw ParseError("unknown volume kind \"" + kind + "\" (expected host-path or ephemeral)",
                         node.line());
    }
    v.mount_point = node.at("mount").as_string();
    return v;
}

inline yaml::Node emit_volume(const Volume& v) {
    yaml::Node n = yaml::Node::mapping();
    if (v.kind == Volume::Kind::HostPath) {
        n.set("kind", yaml::scalar("host-path"));
        n.set("host_dir", yaml::scalar(v.host_directory));
    } else {
        n.set("kind", yaml::scalar("ephemeral"));
    }
    n.set("mount", yaml::scalar(v.mount_point));
    return n;
}

inline std::map<std::string, std::string> parse_string_map(const yaml::Node& node) {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : node.entries()) out[k] = v.as_string();
    return out;
}

inline yaml::Node emit_string_map(const std::map<std::string, std::string>& m) {
    yaml::Node n = yaml::Node::mapping();
    for (const auto& [k, v] : m) n.set(k, yaml::scalar(v));
    return n;
}

}  // namespace fixture_detail

inline ClusterState load_fixture(const std::string& text) {
    using namespace fixture_detail;
    yaml::Node doc = yaml::parse(text);
    ClusterState state;

    if (const yaml::Node* nodes = doc.find("nodes")) {
        for (const yaml::Node& item : nodes->items()) {
            Node n;
            n.name = item.at("name").as_string();
            if (const yaml::Node* files = item.find("host_files"))
                n.host_files = parse_string_map(*files);
            state.nodes.push_back(n);
            state.node_credentials[n.name] = parse_credential(item.at("admin_credential"));
        }
    }

    if (const yaml::Node* ns = doc.find("namespaces"))
        for (const yaml::Node& item : ns->items())
            state.namespaces.push_back(item.as_string());

    if (const yaml::Node* sas = doc.find("service_accounts")) {
        for (const yaml::Node& item : sas->items()) {
            ServiceAccount sa;
            sa.name = item.at("name").as_string();
            sa.namespace_ = item.at("namespace").as_string();
            state.service_accounts.push_back(sa);
        }
    }

    if (const yaml::Node* rules = doc.find("role_rules")) {
        for (const yaml::Node& item : rules->items()) {
            RoleRule r;
            r.principal = item.at("principal").as_string();
            for (const yaml::Node& v : item.at("verbs").items()) {
                auto verb = verb_from_string(v.as_string());
                if (!verb) throw ParseError("unknown verb \"" + v.as_string() + "\"", v.line());
                r.verbs.insert(*verb);
            }
            for (const yaml::Node& k : item.at("kinds").items()) {
                auto kind = resource_kind_from_string(k.as_string());
                if (!kind)
                    throw ParseError("unknown resource kind \"" + k.as_string() + "\"", k.line());
                r.resource_kinds.insert(*kind);
            }
            r.scope = item.at("scope").as_string();
            state.role_rules.push_back(r);
        }
    }

    if (const yaml::Node* pods = doc.find("pods")) {
        for (const yaml::Node& item : pods->items()) {
            Pod p;
            p.name = item.at("name").as_string();
            p.namespace_ = item.at("namespace").as_string();
            p.node = item.at("node").as_string();
            p.service_account = item.at("service_account").as_string();
            p.app_label = item.at("app").as_string();
            p.image = parse_image_ref(item.at("image"));
            if (const yaml::Node* vols = item.find("volumes"))
                for (const yaml::Node& v : vols->items()) p.volumes.push_back(parse_volume(v));
            p.ready = item.find("ready") ? item.at("ready").as_bool() : true;
            state.pods.push_back(p);
        }
    }

    if (const yaml::Node* services = doc.find("services")) {
        for (const yaml::Node& item : services->items()) {
            Service s;
            s.name = item.at("name").as_string();
            s.namespace_ = item.at("namespace").as_string();
            s.selector = item.at("selector").as_string();
            s.cluster_ip = item.at("cluster_ip").as_string();
            s.port = static_cast<int>(item.at("port").as_int());
            if (const yaml::Node* np = item.find("node_port"))
                s.exposure.node_port = static_cast<int>(np->as_int());
            state.services.push_back(s);
        }
    }

    if (const yaml::Node* ci = doc.find("ci")) {
        if (const yaml::Node* users = ci->find("users"))
            for (const yaml::Node& u : users->items())
                state.ci_server.users.emplace_back(
                    u.as_string(), Credential{u.as_string(), CredentialLevel::JenkinsUser});
        if (const yaml::Node* jobs = ci->find("jobs")) {
            for (const yaml::Node& item : jobs->items()) {
                BuildJob job;
                std::string name = item.at("name").as_string();
                job.source_ref = item.at("source").as_string();
                job.output_image_name = item.at("output_image").as_string();
                for (const yaml::Node& s : item.at("steps").items())
                    job.steps.push_back(BuildStep{s.as_string(), {}});
                if (const yaml::Node* n = item.find("builds_completed"))
                    job.builds_completed = static_cast<int>(n->as_int());
                if (state.ci_server.jobs.count(name))
                    throw ParseError("duplicate build job \"" + name + "\"", item.line());
                state.ci_server.jobs[name] = job;
            }
        }
    }

    if (const yaml::Node* repo = doc.find("source_repo")) {
        state.source_repo.name = repo->at("name").as_string();
        if (const yaml::Node* files = repo->find("files"))
            state.source_repo.files = parse_string_map(*files);
    }

    if (const yaml::Node* registry = doc.find("registry")) {
        if (const yaml::Node* images = registry->find("images")) {
            for (const yaml::Node& item : images->items()) {
                std::string name = item.at("name").as_string();
                std::string tag = item.at("tag").as_string();
                Image img;
                if (const yaml::Node* files = item.find("files"))
                    img.files = parse_string_map(*files);
                if (const yaml::Node* routes = item.find("payload_routes"))
                    img.payload_routes = parse_string_map(*routes);
                if (state.registry.images.count({name, tag}))
                    throw ParseError("duplicate image " + name + ":" + tag, item.line());
                state.registry.images[{name, tag}] = img;
                state.registry.latest[name] = tag;
            }
        }
        // Explicit latest map wins over declaration order.
        if (const yaml::Node* latest = registry->find("latest"))
            for (const auto& [name, tag] : latest->entries())
                state.registry.latest[name] = tag.as_string();
    }

    if (const yaml::Node* broker = doc.find("broker")) {
        state.broker.service_ref = broker->at("service").as_string();
        if (const yaml::Node* topics = broker->find("topics")) {
            for (const auto& [topic, records] : topics->entries()) {
                std::vector<std::string> list;
                for (const yaml::Node& r : records.items()) list.push_back(r.as_string());
                state.broker.topics[topic] = list;
            }
        }
    }

    if (const yaml::Node* clock = doc.find("clock"))
        state.clock = static_cast<std::uint64_t>(clock->as_int());

    // Derived: containers running on each node.
    for (const Pod& p : state.pods)
        if (Node* n = state.find_node(p.node))
            n->running_containers.push_back(p.namespace_ + "/" + p.name);

    std::vector<std::string> violations = validate(state, /*at_load=*/true);
    if (!violations.empty()) throw ValidationError(violations);
    return state;
}

inline ClusterState load_fixture_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_fixture(buf.str());
}

inline std::string serialize_fixture(const ClusterState& state) {
    using namespace fixture_detail;
    yaml::Node doc = yaml::Node::mapping();

    yaml::Node nodes = yaml::Node::sequence();
    for (const Node& n : state.nodes) {
        yaml::Node item = yaml::Node::mapping();
        item.set("name", yaml::scalar(n.name));
        item.set("host_files", emit_string_map(n.host_files));
        auto cred = state.node_credentials.find(n.name);
        if (cred != state.node_credentials.end())
            item.set("admin_credential", emit_credential(cred->second));
        nodes.push_back(item);
    }
    doc.set("nodes", nodes);

    doc.set("namespaces", yaml::string_list(state.namespaces));

    yaml::Node sas = yaml::Node::sequence();
    for (const ServiceAccount& sa : state.service_accounts) {
        yaml::Node item = yaml::Node::mapping();
        item.set("name", yaml::scalar(sa.name));
        item.set("namespace", yaml::scalar(sa.namespace_));
        sas.push_back(item);
    }
    doc.set("service_accounts", sas);

    yaml::Node rules = yaml::Node::sequence();
    for (const RoleRule& r : state.role_rules) {
        yaml::Node item = yaml::Node::mapping();
        item.set("principal", yaml::scalar(r.principal));
        std::vector<std::string> verbs, kinds;
        for (Verb v : r.verbs) verbs.push_back(to_string(v));
        for (ResourceKind k : r.resource_kinds) kinds.push_back(to_string(k));
        item.set("verbs", yaml::string_list(verbs));
        item.set("kinds", yaml::string_list(kinds));
        item.set("scope", yaml::scalar(r.scope));
        rules.push_back(item);
    }
    doc.set("role_rules", rules);

    yaml::Node pods = yaml::Node::sequence();
    for (const Pod& p : state.pods) {
        yaml::Node item = yaml::Node::mapping();
        item.set("name", yaml::scalar(p.name));
        item.set("namespace", yaml::scalar(p.namespace_));
        item.set("node", yaml::scalar(p.node));
        item.set("service_account", yaml::scalar(p.service_account));
        item.set("app", yaml::scalar(p.app_label));
        item.set("image", yaml::scalar(p.image.str()));
        yaml::Node vols = yaml::Node::sequence();
        for (const Volume& v : p.volumes) vols.push_back(emit_volume(v));
        item.set("volumes", vols);
        item.set("ready", yaml::scalar(p.ready));
        pods.push_back(item);
    }
    doc.set("pods", pods);

    yaml::Node services = yaml::Node::sequence();
    for (const Service& s : state.services) {
        yaml::Node item = yaml::Node::mapping();
        item.set("name", yaml::scalar(s.name));
        item.set("namespace", yaml::scalar(s.namespace_));
        item.set("selector", yaml::scalar(s.selector));
        item.set("cluster_ip", yaml::scalar(s.cluster_ip));
        item.set("port", yaml::scalar(s.port));
        if (s.exposure.node_port) item.set("node_port", yaml::scalar(*s.exposure.node_port));
        services.push_back(item);
    }
    doc.set("services", services);

    if (state.ci_server.present()) {
        yaml::Node ci = yaml::Node::mapping();
        std::vector<std::string> users;
        for (const auto& [name, cred] : state.ci_server.users) users.push_back(name);
        ci.set("users", yaml::string_list(users));
        yaml::Node jobs = yaml::Node::sequence();
        for (const auto& [name, job] : state.ci_server.jobs) {
            yaml::Node item = yaml::Node::mapping();
            item.set("name", yaml::scalar(name));
            item.set("source", yaml::scalar(job.source_ref));
            item.set("output_image", yaml::scalar(job.output_image_name));
            std::vector<std::string> steps;
            for (const BuildStep& s : job.steps) steps.push_back(s.script);
            item.set("steps", yaml::string_list(steps));
            if (job.builds_completed != 0)
                item.set("builds_completed", yaml::scalar(job.builds_completed));
            jobs.push_back(item);
        }
        ci.set("jobs", jobs);
        doc.set("ci", ci);
    }

    if (state.source_repo.present()) {
        yaml::Node repo = yaml::Node::mapping();
        repo.set("name", yaml::scalar(state.source_repo.name));
        repo.set("files", emit_string_map(state.source_repo.files));
        doc.set("source_repo", repo);
    }

    if (state.registry.present()) {
        yaml::Node registry = yaml::Node::mapping();
        yaml::Node images = yaml::Node::sequence();
        for (const auto& [key, image] : state.registry.images) {
            yaml::Node item = yaml::Node::mapping();
            item.set("name", yaml::scalar(key.first));
            item.set("tag", yaml::scalar(key.second));
            item.set("files", emit_string_map(image.files));
            if (!image.payload_routes.empty())
                item.set("payload_routes", emit_string_map(image.payload_routes));
            images.push_back(item);
        }
        registry.set("images", images);
        registry.set("latest", emit_string_map(state.registry.latest));
        doc.set("registry", registry);
    }

    if (state.broker.present()) {
        yaml::Node broker = yaml::Node::mapping();
        broker.set("service", yaml::scalar(state.broker.service_ref));
        yaml::Node topics = yaml::Node::mapping();
        for (const auto& [topic, records] : state.broker.topics)
            topics.set(topic, yaml::string_list(records));
        broker.set("topics", topics);
        doc.set("broker", broker);
    }

    if (state.clock != 0) doc.set("clock", yaml::scalar(static_cast<long long>(state.clock)));

    return yaml::emit(doc);
}

// ---------------------------------------------------------------------------
// Content digest (FNV-1a 64) over the canonicalized document
// ---------------------------------------------------------------------------

inline std::string content_digest(const std::string& canonical_text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

inline std::string fixture_digest(const ClusterState& state) {
    return content_digest(serialize_fixture(state));
}

}  // namespace sscs
