/*
 * Copyright 2026 The sphform Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = SPHFORM_CONFIG_DIR;

fs::path scratch() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / ("sphform_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

struct Result {
    int code = -1;
    std::string out, err;
};

Result cli(const std::string& args) {
    const fs::path o = scratch() / "stdout", e = scratch() / "stderr";
    const std::string cmd = std::string("'") + SPHFORM_CLI + "' " + args + " >'" + o.string() + "' 2>'" + e.string() + "'";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

std::string small(const std::string& partition, double v_max) {
    return R"({"partition": )" + partition + R"(, "sim": {"duration_s": 10},
              "leader": {"model": "static", "position": [0, 0, 0]},
              "followers": [{"initial_offset": [3, 2, 1], "v_max": )" +
           std::to_string(v_max) + "}]}";
}

}  // namespace

TEST_CASE("run is byte-identical across invocations") {
    const fs::path a = scratch() / "run_a", b = scratch() / "run_b";
    const std::string cfg = (kConfigs / "reaching_9_1.json").string();
    REQUIRE(cli("run '" + cfg + "' --out '" + a.string() + "'").code == 0);
    REQUIRE(cli("run '" + cfg + "' --out '" + b.string() + "'").code == 0);
    for (const char* f : {"trajectory.csv", "events.jsonl", "summary.json"}) {
        CAPTURE(f);
        const std::string x = slurp(a / "follower_1" / f);
        CHECK_FALSE(x.empty());
        CHECK(x == slurp(b / "follower_1" / f));
    }
    CHECK(slurp(a / "follower_1" / "summary.json").find("\"reached\": true") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2") {
    const Result bad = cli("run '" + write_config("bad.json", "{\"partition\": [").string() + "' --out '" +
                           (scratch() / "bad").string() + "'");
    CHECK(bad.code == 2);
    CHECK_FALSE(bad.err.empty());

    const Result key = cli("des-check '" +
                           write_config("key.json", small(R"({"radius_m": 50, "n_r": 4, "n_theta": 4, "n_phi": 4})", -1))
                               .string() +
                           "'");
    CHECK(key.code == 2);
    CHECK(key.err.find("followers[0].v_max") != std::string::npos);

    CHECK(cli("des-check '" + (scratch() / "missing.json").string() + "'").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("des-check '" + (kConfigs / "grid_3x3x3.json").string() + "' --mode exact").code == 2);
}

TEST_CASE("synth-check fails when nothing is feasible") {
    const fs::path cfg = write_config("zero.json", small(R"({"radius_m": 10, "n_r": 4, "n_theta": 7, "n_phi": 5})", 0));
    const Result r = cli("synth-check '" + cfg.string() + "' --out '" + (scratch() / "synth").string() + "'");
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);
    CHECK(slurp(scratch() / "synth" / "synth_report.txt") == r.out);
}

TEST_CASE("abstract-check with no samples warns but passes") {
    const fs::path cfg = write_config("feasible.json", small(R"({"radius_m": 50, "n_r": 3, "n_theta": 7, "n_phi": 5})", 5));
    const Result r = cli("abstract-check '" + cfg.string() + "' --samples 0");
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    CHECK(r.out.find("INFO") != std::string::npos);
}

TEST_CASE("des-check passes on the coarse grid") {
    const Result r = cli("des-check '" + (kConfigs / "grid_3x3x3.json").string() + "'");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("nonblocking") != std::string::npos);
}
