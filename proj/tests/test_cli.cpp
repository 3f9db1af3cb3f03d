// Copyright 2026 The wbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#ifndef WBQC_CLI
#error "WBQC_CLI must name the command-line binary"
#endif

namespace fs = std::filesystem;

namespace {

int run(const std::string &args) {
    const std::string cmd = std::string(WBQC_CLI) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("wbqc_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string &name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("exit codes") {
    TempDir d;
    CHECK(run("plan --out " + (d / "p.csv")) == 0);
    CHECK(run("--bogus plan") == 2);
    CHECK(run("") == 2);
    CHECK(run("run-1d --pt 1.5") == 2);
    CHECK(run("run-2d --m-sep 1") == 2);
    CHECK(run("run-1d --chain-len 40") == 3);
    CHECK(run("carve " + (d / "missing.txt")) == 2);
}

TEST_CASE("plan output") {
    TempDir d;
    REQUIRE(run("plan --r 4 --r 10 --out " + (d / "p.csv")) == 0);
    const auto text = slurp(d / "p.csv");
    CHECK(text.rfind("r,p_t,p_f,n,n_rounded,p_s,p_m,m,m_rounded\n", 0) == 0);
    CHECK(text.find("\n4,0.98999999999999999,0.01,24.") != std::string::npos);
    CHECK(text.find("\n10,0.98999999999999999,0.01,152.") != std::string::npos);
    CHECK(text.find(",14\n") != std::string::npos);
    CHECK(text.find(",35\n") != std::string::npos);
}

TEST_CASE("byte-identical reruns and config precedence") {
    TempDir d;
    {
        std::ofstream cfg(d / "run.cfg");
        cfg << "# stress run\npf = 0.3\npf-model = uniform\nchain-len = 16\n";
    }
    const std::string base = "run-1d --seed 77 --trials 40 --config " + (d / "run.cfg");
    REQUIRE(run(base + " --pf 0.9 --out " + (d / "a.json") + " --summary " + (d / "sa.json")) == 0);
    REQUIRE(run(base + " --jobs 3 --out " + (d / "b.json") + " --summary " + (d / "sb.json")) == 0);
    CHECK(slurp(d / "a.json") == slurp(d / "b.json"));
    CHECK(slurp(d / "sa.json") == slurp(d / "sb.json"));
    CHECK(!slurp(d / "a.json").empty());

    REQUIRE(run("run-1d --seed 77 --trials 40 --pf-model uniform --chain-len 16 --pf 0.3 --out " + (d / "c.json")) == 0);
    CHECK(slurp(d / "a.json") == slurp(d / "c.json"));

    {
        std::ofstream bad(d / "bad.cfg");
        bad << "not a pair\n";
    }
    CHECK(run("run-1d --config " + (d / "bad.cfg")) == 2);
}

TEST_CASE("empty runs write only the csv header") {
    TempDir d;
    REQUIRE(run("run-1d --trials 0 --format csv --out " + (d / "e.csv")) == 0);
    const auto text = slurp(d / "e.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    CHECK(text.rfind("seed,completed,", 0) == 0);
}

TEST_CASE("carve and run-2d") {
    TempDir d;
    {
        std::ofstream g(d / "grid.txt");
        g << "###\n";
    }
    REQUIRE(run("carve " + (d / "grid.txt") + " --r 2 --out " + (d / "c.csv") + " --report " + (d / "rep.json")) == 0);
    CHECK(slurp(d / "c.csv").rfind("site_x,site_y,theta\n", 0) == 0);
    CHECK(slurp(d / "rep.json").find("\"stabilizer_violations\":0") != std::string::npos);

    {
        std::ofstream g(d / "zz.txt");
        g << "######\n..#...\n..##..\n...#..\n.#####\n";
    }
    REQUIRE(run("run-2d --layout " + (d / "zz.txt") + " --pf 0.15 --trials 20 --out " + (d / "z.json") +
                " --summary " + (d / "zs.json")) == 0);
    CHECK(slurp(d / "zs.json").find("\"trials\":20") != std::string::npos);
    REQUIRE(run("master-eq --ratio 0.01 --format json --out " + (d / "m.json")) == 0);
    CHECK(slurp(d / "m.json").find("\"ratio\":0.01") != std::string::npos);
}
