#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(HEAVYTAIL_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("heavytail_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run("--help") == 0);
    CHECK(run("esd --help") == 0);
    CHECK(run("") == 2);
    CHECK(run("esd --no-such-flag 1") == 2);
    CHECK(run("esd --n -3") == 2);
    CHECK(run("esd --graph /nonexistent/graph.json") == 2);
    const fs::path d = scratch("codes");
    CHECK(run("verify --suite mobius --out-dir " + d.string()) == 0);
}

TEST_CASE("esd writes one eigenvalue per row") {
    const fs::path d = scratch("esd");
    REQUIRE(run("esd --n 2000 --d 3 --seed 4 --out-dir " + d.string()) == 0);
    std::ifstream in(d / "esd.csv");
    std::string line;
    int rows = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        ++rows;
    }
    CHECK(rows == 2000);
    CHECK(fs::exists(d / "esd_hist.json"));
    CHECK(fs::exists(d / "esd.manifest.json"));
}

TEST_CASE("reruns are byte-identical") {
    const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
    const std::string args = "localaw --n 300 --d 2 --h 2 --seed 11 --out-dir ";
    REQUIRE(run(args + a.string()) == 0);
    REQUIRE(run(args + b.string() + " --jobs 2") == 0);
    CHECK(slurp(a / "localaw.json") == slurp(b / "localaw.json"));
}

TEST_CASE("config files") {
    const fs::path d = scratch("config");
    {
        std::ofstream(d / "good.json") << R"({"n": 200, "d": 2.0, "seed": 3})";
        std::ofstream(d / "bad.json") << R"({"n": 200, "colour": 2})";
    }
    CHECK(run("esd --config " + (d / "good.json").string() + " --out-dir " + d.string()) == 0);
    CHECK(run("esd --config " + (d / "bad.json").string() + " --out-dir " + d.string()) == 2);
}
