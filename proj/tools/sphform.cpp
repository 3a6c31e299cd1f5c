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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "sphform/checks.hpp"
#include "sphform/config.hpp"
#include "sphform/io.hpp"

namespace {

using namespace sphform;

constexpr int kPass = 0, kCheckFailed = 1, kConfigError = 2;

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string mode;
};

ScenarioConfig load(const Common& c) {
    ScenarioConfig cfg = load_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (!c.mode.empty()) cfg.synthesis.mode = parse_eligible_mode(c.mode);
    return cfg;
}

void emit_report(const Common& c, const std::string& file, const std::string& text) {
    std::cout << text;
    if (c.out.empty()) return;
    std::filesystem::create_directories(c.out);
    std::ofstream f(std::filesystem::path(c.out) / file, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + (std::filesystem::path(c.out) / file).string());
    f << text;
}

int cmd_run(const Common& c) {
    const ScenarioConfig cfg = load(c);
    const ScenarioResult res = run_scenario(cfg);
    write_run_outputs(c.out, cfg, res);
    for (std::size_t n = 0; n < res.followers.size(); ++n) {
        const RunOutcome& o = res.followers[n].outcome;
        std::printf("follower %zu: reached=%s time_to_formation_s=%s final_region=%s alarms=%zu\n", n + 1,
                    o.reached ? "true" : "false", o.reached ? format_number(o.time_to_formation_s).c_str() : "-",
                    to_string(o.final_region).c_str(), o.collision_alarms);
    }
    return kPass;
}

std::set<double> speed_bounds(const ScenarioConfig& cfg) {
    std::set<double> v;
    for (const FollowerConfig& f : cfg.followers) v.insert(f.v_max);
    return v;
}

int cmd_synth(const Common& c) {
    const ScenarioConfig cfg = load(c);
    const Partition p(cfg.partition);
    std::string text;
    bool pass = true;
    for (double v : speed_bounds(cfg)) {
        const CheckReport rep = synth_checks(p, {v}, cfg.synthesis);
        std::size_t failed = 0;
        for (const CheckLine& l : rep.lines) failed += l.pass ? 0 : 1;
        text += "# v_max " + format_number(v) + ": " + std::to_string(rep.lines.size() - failed) + "/" +
                std::to_string(rep.lines.size()) + " feasible\n" + rep.render();
        pass = pass && rep.pass();
    }
    emit_report(c, "synth_report.txt", text);
    return pass ? kPass : kCheckFailed;
}

int cmd_abstract(const Common& c, int samples) {
    const ScenarioConfig cfg = load(c);
    const Partition p(cfg.partition);
    SoundnessOptions mc;
    mc.trials = samples;
    mc.seed = cfg.seed;
    mc.transition.step_s = cfg.step_s;
    if (samples <= 0) std::cerr << "warning: --samples " << samples << " gives a vacuous soundness check\n";
    std::string text;
    bool pass = true;
    for (double v : speed_bounds(cfg)) {
        mc.transition.v_max = v;
        const CheckReport rep = abstraction_checks(p, {v}, cfg.synthesis, mc);
        text += "# v_max " + format_number(v) + "\n" + rep.render();
        pass = pass && rep.pass();
    }
    emit_report(c, "abstract_report.txt", text);
    return pass ? kPass : kCheckFailed;
}

int cmd_des(const Common& c) {
    const ScenarioConfig cfg = load(c);
    const CheckReport rep = des_checks(cfg.partition);
    emit_report(c, "des_report.txt", rep.render());
    return rep.pass() ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spherical-abstraction formation control: simulation and verification"};
    app.require_subcommand(1);

    Common c;
    int samples = 20;
    auto add_common = [&](CLI::App* sub, bool out_required) {
        sub->add_option("config", c.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
        auto* o = sub->add_option("--out", c.out, "Output directory");
        if (out_required) o->required();
        sub->add_option("--seed", c.seed, "Override sim.seed");
        sub->add_option("--mode", c.mode, "Eligible-set mode")->check(CLI::IsMember({"derived", "paper"}));
    };
    CLI::App* run = app.add_subcommand("run", "Simulate a scenario and write per-follower outputs");
    add_common(run, true);
    CLI::App* synth = app.add_subcommand("synth-check", "Per-(region, label) feasibility table");
    add_common(synth, false);
    CLI::App* abstract = app.add_subcommand("abstract-check", "Abstraction soundness and bisimulation");
    add_common(abstract, false);
    abstract->add_option("--samples", samples, "Monte Carlo trials per (region, label)");
    CLI::App* des = app.add_subcommand("des-check", "Supervisor language and controllability verdicts");
    add_common(des, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (*run) return cmd_run(c);
        if (*synth) return cmd_synth(c);
        if (*abstract) return cmd_abstract(c, samples);
        if (*des) return cmd_des(c);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const InvalidSpec& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
    return kConfigError;
}
