#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

const fs::path& workdir() {
    static const fs::path d = [] {
        fs::path p = fs::temp_directory_path() / ("sardkit_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Run run(const std::string& args) {
    const fs::path err = workdir() / "stderr.txt";
    const std::string cmd = std::string(SARDKIT_CLI_PATH) + " " + args + " 2>" + err.string();
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = workdir() / name;
    std::ofstream(p) << text;
    return p;
}

std::string out_dir(const std::string& name) { return "--out-dir " + (workdir() / name).string(); }

}  // namespace

TEST_CASE("analyze") {
    const Run loop = run("analyze --builtin loop --format json --point=-1,0,1 --point 0,0,1");
    REQUIRE(loop.code == 0);
    const Json j = Json::parse(loop.out);
    const std::string h = j["h"];
    CHECK((h == "-x^3 - x^2*z + y^2" || h == "x^3 + x^2*z - y^2"));
    CHECK(j["tangency_certificate"]["ok"] == true);
    CHECK(j["points"][0]["stratum"] == "Sigma2_tr");
    CHECK(j["points"][1]["stratum"] == "SingularLocus");
    CHECK(j["printed_Z_comparison"][1]["equal_mod_h"] == false);

    const Run heis = run("analyze --builtin heisenberg");
    CHECK(heis.code == 0);
    CHECK(heis.out.find("Σ empty (h is a nonzero constant)") != std::string::npos);

    const fs::path f = write("flat.json", R"({"name": "flat", "X": ["1", "0", "0"], "Y": ["0", "1", "x1^2"]})");
    const Run flat = run("analyze --format json " + f.string());
    REQUIRE(flat.code == 0);
    CHECK(Json::parse(flat.out)["h"] == "x");
}

TEST_CASE("analyze errors") {
    CHECK(run("analyze " + write("bad.json", "{\"X\": [").string()).code == 2);
    CHECK(run("analyze " + write("badpoly.json", R"({"X": ["1", "0", "0"], "Y": ["0", "1", "x^^2"]})").string()).code ==
          2);
    CHECK(run("analyze " + (workdir() / "missing.json").string()).code == 2);
    CHECK(run("analyze").code == 2);
    CHECK(run("frobnicate").code == 2);
    const Run col = run("analyze " + write("col.json", R"({"X": ["1", "0", "0"], "Y": ["x", "0", "0"]})").string());
    CHECK(col.code == 3);
    CHECK(col.err.find("collinear") != std::string::npos);
}

TEST_CASE("trace") {
    const Run r = run("trace --builtin loop --p0=-0.3,0,0.3 --svg --format json " + out_dir("trace"));
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["termination"] == "SpeedFloor");
    const std::string csv = slurp(workdir() / "trace" / "orbit.csv");
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,x,y,z,speed,h_residual,cum_length,cum_div");
    double prev = 1e9;
    int rows = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string cell;
        for (int k = 0; k < 4; ++k) std::getline(ls, cell, ',');
        const double z = std::stod(cell);
        CHECK(z <= prev);
        prev = z;
        ++rows;
    }
    CHECK(rows > 10);
    CHECK(fs::file_size(workdir() / "trace" / "orbit_xy.svg") > 200);
    CHECK(slurp(workdir() / "trace" / "orbit_xz.svg").find("<polyline") != std::string::npos);

    // deterministic output
    run("trace --builtin loop --p0=-0.3,0,0.3 " + out_dir("trace2"));
    CHECK(slurp(workdir() / "trace2" / "orbit.csv") == csv);

    CHECK(run("trace --builtin loop --p0=0,1,0 " + out_dir("trace3")).code == 4);
    CHECK(run("trace --builtin loop --p0=0,1 " + out_dir("trace3")).code == 2);
}

TEST_CASE("blowup") {
    const Run c = run("blowup --builtin conical_frame --center 1,2,3 --j 3 --format json");
    REQUIRE(c.code == 0);
    const Json j = Json::parse(c.out);
    CHECK(j["alpha"] == 2);
    CHECK(j["beta"] == 2);
    CHECK(j["transform"]["strict"] == "-x^2 - y^2 + 1");
    CHECK(j["compat"]["max_abs_err"].get<double>() <= 1e-6);
    CHECK(j["compat"]["n"] == 200);

    const Run l = run("blowup --builtin loop --center 1,2 --j 1 --format json");
    REQUIRE(l.code == 0);
    const Json lj = Json::parse(l.out);
    CHECK(lj["alpha"] == 2);
    CHECK(lj["transform"]["strict"] == "y^2 - x - z");

    const Run zero = run("blowup --builtin martinet_flat --center 2,3 --j 3");
    CHECK(zero.code == 0);
    CHECK(zero.err.find("center not in zero set") != std::string::npos);

    CHECK(run("blowup --builtin loop --center 1,2 --j 3").code == 5);
    CHECK(run("blowup --builtin loop --center 1 --j 1").code == 5);
    CHECK(run("blowup --builtin loop --center 1,2 --j 1 --sign x").code == 5);
    CHECK(run("blowup --builtin loop --center 1,2 --j 1 --sign=-").code == 0);
}

TEST_CASE("chain") {
    const Run r = run("chain --z0 0.5 --n 4 --format json " + out_dir("chain"));
    REQUIRE(r.code == 0);
    const Json s = Json::parse(r.out);
    CHECK(s["violations"] == 0);
    const Json rep = Json::parse(slurp(workdir() / "chain" / "chain.json"));
    CHECK(rep["links"].size() == 4);
    CHECK(!rep["checks"].empty());
    CHECK(fs::exists(workdir() / "chain" / "chain_phase.svg"));
    CHECK(fs::exists(workdir() / "chain" / "chain_xz.svg"));
    CHECK(fs::exists(workdir() / "chain" / "link_3.csv"));

    CHECK(run("chain --n 0").code == 2);
    CHECK(run("chain --z0 0 " + out_dir("chain0")).code == 2);
    const Run d = run("chain --n 1 --field=derived --format json " + out_dir("chain_d"));
    CHECK(d.code == 0);
    CHECK(Json::parse(d.out)["field"] == "derived");
    CHECK(run("chain --field=other").code == 2);
}

TEST_CASE("selftest") {
    const Run ok = run("selftest --cases 20");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("all checks passed") != std::string::npos);

    const Run bad = run("selftest --cases 20 --corrupt loop");
    CHECK(bad.code == 1);
    CHECK(bad.err.find("failed: martinet functions") != std::string::npos);

    const Run a = run("--seed 5 selftest --cases 20 --format json");
    const Run b = run("selftest --cases 20 --format json --seed 5");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(Json::parse(a.out)["seed"] == 5);
}
