// End-to-end checks of the decosim binary: exit codes, artifact layout,
// error reporting with JSON pointers, and byte-level determinism.

#include "deco/scenario.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

fs::path tmp_root() {
    static fs::path p = [] {
        fs::path root = fs::current_path() / "cli_test_tmp";
        fs::remove_all(root);
        fs::create_directories(root);
        return root;
    }();
    return p;
}

int run_cli(const std::string& args, const fs::path& err_file) {
    std::string cmd = std::string(DECOSIM_PATH) + " " + args + " 2> " + err_file.string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_scenario(const fs::path& p, const json& j) {
    std::ofstream out(p);
    out << j.dump(2);
}

json curve_scenario() {
    return json{{"command", "curve"},
                {"measure",
                 {{"kind", "discrete"},
                  {"modes", json::array({{{"frequency", 1.0}, {"weight", 0.1}}})}}},
                {"alpha", 1.0},
                {"beta", 0.0},
                {"reference", {{"type", "vacuum"}}},
                {"grid", {{"start", 0.0}, {"stop", 10.0}, {"count", 50}, {"spacing", "linear"}}}};
}

} // namespace

TEST_CASE("classify reports the infrared class in summary.json") {
    auto dir = tmp_root() / "classify";
    fs::create_directories(dir);
    json sc{{"command", "classify"},
            {"measure",
             {{"kind", "powerlaw"}, {"amplitude", 1.0}, {"exponent", 0.5}, {"cutoff", 1.0}}}};
    write_scenario(dir / "scenario.json", sc);
    int code = run_cli("--scenario " + (dir / "scenario.json").string() + " --out " +
                           (dir / "out").string(),
                       dir / "err.txt");
    CHECK(code == 0);
    auto summary = json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary["outcome"]["ir_class"] == "ir_dominant");
    CHECK(summary["outcome"]["coupling_ok"] == false);
    CHECK(summary["outcome"]["moments"]["m2"]["divergent"] == true);
}

TEST_CASE("curve with alpha == beta emits a constant chi column") {
    auto dir = tmp_root() / "trivial_curve";
    fs::create_directories(dir);
    json sc = curve_scenario();
    sc["beta"] = 1.0;
    write_scenario(dir / "scenario.json", sc);
    int code = run_cli("--scenario " + (dir / "scenario.json").string() + " --out " +
                           (dir / "out").string(),
                       dir / "err.txt");
    CHECK(code == 0);
    std::istringstream csv(slurp(dir / "out" / "curve.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,psi,phi,re_chi,im_chi,abs_chi");
    int rows = 0;
    while (std::getline(csv, line)) {
        CHECK(line.find(",1,0,1") != std::string::npos); // re=1, im=0, abs=1
        ++rows;
    }
    CHECK(rows == 50);
}

TEST_CASE("input errors carry JSON pointers and exit 1") {
    auto dir = tmp_root() / "bad_input";
    fs::create_directories(dir);
    json sc = curve_scenario();
    sc.erase("alpha");
    write_scenario(dir / "scenario.json", sc);
    int code = run_cli("--scenario " + (dir / "scenario.json").string() + " --out " +
                           (dir / "out").string(),
                       dir / "err.txt");
    CHECK(code == 1);
    CHECK(slurp(dir / "err.txt").find("/alpha") != std::string::npos);
    auto summary = json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary["outcome"]["status"] == "input_error");
}

TEST_CASE("bound command requires a seed") {
    auto dir = tmp_root() / "bound_noseed";
    fs::create_directories(dir);
    json sc{{"command", "bound"},
            {"bound",
             {{"kernel", "gaussian"}, {"dimension", 6}, {"pairs", 1},
              {"delta1", {0.0, 0.4}}, {"delta2", {0.6, 1.0}}}},
            {"grid", {{"start", 0.0}, {"stop", 5.0}, {"count", 10}}}};
    write_scenario(dir / "scenario.json", sc);
    int code = run_cli("--scenario " + (dir / "scenario.json").string() + " --out " +
                           (dir / "out").string(),
                       dir / "err.txt");
    CHECK(code == 1);
    CHECK(slurp(dir / "err.txt").find("/seed") != std::string::npos);
}

TEST_CASE("identical scenarios and seeds produce byte-identical artifacts") {
    auto dir = tmp_root() / "determinism";
    fs::create_directories(dir);
    write_scenario(dir / "curve.json", curve_scenario());
    json bound{{"command", "bound"},
               {"seed", 4242},
               {"bound",
                {{"kernel", "gaussian"}, {"dimension", 8}, {"pairs", 2},
                 {"delta1", {0.0, 0.4}}, {"delta2", {0.6, 1.0}}}},
               {"grid", {{"start", 0.0}, {"stop", 5.0}, {"count", 20}}}};
    write_scenario(dir / "bound.json", bound);

    for (const char* name : {"curve", "bound"}) {
        int c1 = run_cli("--scenario " + (dir / (std::string(name) + ".json")).string() +
                             " --out " + (dir / "out1").string() + " --threads 2",
                         dir / "err1.txt");
        int c2 = run_cli("--scenario " + (dir / (std::string(name) + ".json")).string() +
                             " --out " + (dir / "out2").string() + " --threads 1",
                         dir / "err2.txt");
        REQUIRE(c1 == 0);
        REQUIRE(c2 == 0);
        std::string artifact = std::string(name) + ".csv";
        std::string a = slurp(dir / "out1" / artifact);
        std::string b = slurp(dir / "out2" / artifact);
        CHECK(!a.empty());
        CHECK(a == b);
    }
}

TEST_CASE("oracle command round trip under tolerance") {
    auto dir = tmp_root() / "oracle";
    fs::create_directories(dir);
    json sc{{"command", "oracle"},
            {"model",
             {{"f_eigenvalues", {0.0, 1.0}},
              {"velocity_preset", true},
              {"modes", json::array({{{"frequency", 1.0}, {"coupling", 0.2}}})},
              {"fock_cutoff", 30}}},
            {"reference", {{"type", "vacuum"}}},
            {"grid", {{"start", 0.0}, {"stop", 10.0}, {"count", 40}}}};
    write_scenario(dir / "scenario.json", sc);
    int code = run_cli("--scenario " + (dir / "scenario.json").string() + " --out " +
                           (dir / "out").string(),
                       dir / "err.txt");
    CHECK(code == 0);
    auto report = json::parse(slurp(dir / "out" / "oracle_report.json"));
    CHECK(report["max_deviation"].get<double>() < 1e-6);
}

TEST_CASE("emitted summaries re-validate against the scenario schema") {
    auto dir = tmp_root() / "roundtrip";
    fs::create_directories(dir);
    write_scenario(dir / "scenario.json", curve_scenario());
    int code = run_cli("--scenario " + (dir / "scenario.json").string() + " --out " +
                           (dir / "out").string(),
                       dir / "err.txt");
    REQUIRE(code == 0);
    auto summary = json::parse(slurp(dir / "out" / "summary.json"));
    CHECK_NOTHROW(deco::validate_scenario(summary["parameters"]));
}

TEST_CASE("oracle mismatch beyond tolerance exits 2") {
    auto dir = tmp_root() / "oracle_fail";
    fs::create_directories(dir);
    json sc{{"command", "oracle"},
            {"model",
             {{"f_eigenvalues", {0.0, 1.0}},
              {"velocity_preset", true},
              {"modes", json::array({{{"frequency", 1.0}, {"coupling", 0.2}}})},
              {"fock_cutoff", 30}}},
            {"reference", {{"type", "vacuum"}}},
            {"grid", {{"start", 0.0}, {"stop", 10.0}, {"count", 20}}}};
    write_scenario(dir / "scenario.json", sc);
    int code = run_cli("--scenario " + (dir / "scenario.json").string() + " --out " +
                           (dir / "out").string() + " --tolerance 1e-18",
                       dir / "err.txt");
    CHECK(code == 2);
    auto summary = json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary["outcome"]["status"] == "assertion_failed");
    // artifacts are still written for inspection
    CHECK(fs::exists(dir / "out" / "oracle_report.json"));
}

TEST_CASE("exhausted quadrature budget is an input error") {
    auto dir = tmp_root() / "quad_budget";
    fs::create_directories(dir);
    json sc = curve_scenario();
    sc["measure"] = {{"kind", "powerlaw"}, {"amplitude", 0.05}, {"exponent", 0.5},
                     {"cutoff", 1.0}};
    sc["tolerances"] = {{"quad_rel", 1e-14}, {"quad_budget", 200}};
    write_scenario(dir / "scenario.json", sc);
    int code = run_cli("--scenario " + (dir / "scenario.json").string() + " --out " +
                           (dir / "out").string(),
                       dir / "err.txt");
    CHECK(code == 1);
    auto summary = json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary["outcome"]["status"] == "input_error");
}

TEST_CASE("unparseable scenario file exits 1") {
    auto dir = tmp_root() / "garbage";
    fs::create_directories(dir);
    std::ofstream(dir / "scenario.json") << "{not json";
    int code = run_cli("--scenario " + (dir / "scenario.json").string() + " --out " +
                           (dir / "out").string(),
                       dir / "err.txt");
    CHECK(code == 1);
}
