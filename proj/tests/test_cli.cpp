#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sscs/report.hpp"

using namespace sscs;

namespace {

std::string sim_binary() {
    const char* bin = std::getenv("SSCS_SIM_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "SSCS_SIM_BIN must point at the sscs-sim binary");
    return bin;
}

std::string data_path(const std::string& rel) { return std::string(SSCS_DATA_DIR) + "/" + rel; }

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    std::string out_path = "/tmp/sscs_cli_out_" + std::to_string(counter);
    std::string err_path = "/tmp/sscs_cli_err_" + std::to_string(counter);
    ++counter;
    std::string cmd = sim_binary() + " " + args + " >" + out_path + " 2>" + err_path;
    int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

}  // namespace

TEST_CASE("baseline run: four achieved verdicts, exit zero") {
    CliResult r = run_cli("run --fixture " + data_path("fixture.yaml") + " --builtin");
    CHECK(r.exit_code == 0);
    for (const char* id : {"retrieve-topic-data", "cicd-backdoor", "expose-cluster-ip",
                           "hostpath-breakout"})
        CHECK(r.out.find(id) != std::string::npos);
    size_t achieved = 0;
    for (size_t pos = 0; (pos = r.out.find("achieved", pos)) != std::string::npos; ++pos)
        ++achieved;
    CHECK(achieved >= 4);
}

TEST_CASE("mitigated run with a blocked expectation exits zero") {
    CliResult r = run_cli("run --fixture " + data_path("fixture.yaml") +
                          " --builtin --policy " + data_path("policies/all-mitigations.yaml") +
                          " --expect blocked");
    CHECK(r.exit_code == 0);
}

TEST_CASE("failed expectation exits non-zero") {
    CliResult r = run_cli("run --fixture " + data_path("fixture.yaml") +
                          " --builtin --policy " + data_path("policies/all-mitigations.yaml") +
                          " --expect achieved");
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("expectation failed") != std::string::npos);
}

TEST_CASE("missing fixture file names the path") {
    CliResult r = run_cli("run --fixture /no/such/fixture.yaml --builtin");
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("/no/such/fixture.yaml") != std::string::npos);
}

TEST_CASE("unknown flags are rejected") {
    CliResult r = run_cli("run --fixture " + data_path("fixture.yaml") + " --builtin --frobnicate");
    CHECK(r.exit_code != 0);
}

TEST_CASE("exit-status contract over every scenario x policy combination") {
    const char* scenarios[] = {"01-retrieve-topic-data.yaml", "02-cicd-backdoor.yaml",
                               "03-expose-cluster-ip.yaml", "04-hostpath-breakout.yaml"};
    const char* policies[] = {"", "namespace-scoped-service-accounts.yaml",
                              "jenkins-build-edit-restriction.yaml",
                              "ingress-object-restriction.yaml", "hostpath-restriction.yaml"};
    for (int s = 0; s < 4; ++s) {
        for (int p = 0; p < 5; ++p) {
            bool blocked = (p == s + 1);  // diagonal pairing blocks, all else achieves
            std::string args = "run --fixture " + data_path("fixture.yaml") + " --scenario " +
                               data_path(std::string("scenarios/") + scenarios[s]);
            if (p > 0) args += " --policy " + data_path(std::string("policies/") + policies[p]);
            CliResult ok = run_cli(args + (blocked ? " --expect blocked" : " --expect achieved"));
            CliResult bad = run_cli(args + (blocked ? " --expect achieved" : " --expect blocked"));
            INFO("scenario " << scenarios[s] << " policy " << policies[p]);
            CHECK(ok.exit_code == 0);
            CHECK(bad.exit_code != 0);
        }
    }
}

TEST_CASE("json report output parses and round-trips") {
    CliResult r = run_cli("run --fixture " + data_path("fixture.yaml") +
                          " --builtin --format json");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    RunReport report = report_from_json(j);
    CHECK(report.scenarios.size() == 4);
    CHECK(report_to_json(report).dump(2) + "\n" == r.out);
}

TEST_CASE("--out writes the report to a file") {
    std::string out_file = "/tmp/sscs_cli_report.json";
    CliResult r = run_cli("run --fixture " + data_path("fixture.yaml") +
                          " --builtin --format json --out " + out_file);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    json j = json::parse(slurp(out_file));
    CHECK(j.at("scenarios").size() == 4);
    std::remove(out_file.c_str());
}

TEST_CASE("--parallel reports match sequential ones") {
    std::string base = "run --fixture " + data_path("fixture.yaml") + " --builtin --format json";
    CliResult seq = run_cli(base);
    CliResult par = run_cli(base + " --parallel");
    REQUIRE(seq.exit_code == 0);
    REQUIRE(par.exit_code == 0);
    CHECK(seq.out == par.out);
}

TEST_CASE("analyze prints the closure and witness paths") {
    CliResult r = run_cli("analyze --fixture " + data_path("fixture.yaml") +
                          " --initial \"CrudIn(developer)\"");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("ClusterAdmin") != std::string::npos);
    CHECK(r.out.find("witness ClusterAdmin:") != std::string::npos);
    CHECK(r.out.find("node-kubeconfig:node-1") != std::string::npos);
}

TEST_CASE("analyze under the hostPath restriction omits cluster admin") {
    CliResult r = run_cli("analyze --fixture " + data_path("fixture.yaml") +
                          " --initial \"CrudIn(developer)\" --policy " +
                          data_path("policies/hostpath-restriction.yaml"));
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("ClusterAdmin") == std::string::npos);
}

TEST_CASE("analyze with no initial capabilities prints an empty closure") {
    CliResult r = run_cli("analyze --fixture " + data_path("fixture.yaml"));
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("reachable:\n") != std::string::npos);
}

TEST_CASE("analyze rejects unknown capability names, listing the valid ones") {
    CliResult r = run_cli("analyze --fixture " + data_path("fixture.yaml") +
                          " --initial \"Sudo(root)\"");
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("CrudIn") != std::string::npos);
    CHECK(r.err.find("ClusterAdmin") != std::string::npos);
}

TEST_CASE("threat-model emits the six rows for the canonical fixture") {
    CliResult r = run_cli("threat-model --fixture " + data_path("fixture.yaml"));
    REQUIRE(r.exit_code == 0);
    for (const char* needle :
         {"Git", "Jenkins", "Docker", "K8s", "Strimzi", "Custom App",
          "Account can be used to alter build configs", "Enable 2 factor auth"})
        CHECK(r.out.find(needle) != std::string::npos);

    CliResult j = run_cli("threat-model --fixture " + data_path("fixture.yaml") +
                          " --format json");
    REQUIRE(j.exit_code == 0);
    CHECK(json::parse(j.out).size() == 6);
}

TEST_CASE("list-builtins names all four scenarios") {
    CliResult r = run_cli("list-builtins");
    REQUIRE(r.exit_code == 0);
    for (const char* id : {"retrieve-topic-data", "cicd-backdoor", "expose-cluster-ip",
                           "hostpath-breakout"})
        CHECK(r.out.find(id) != std::string::npos);
}
