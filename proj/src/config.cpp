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

#include "sphform/config.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace sphform {

namespace {

using json = nlohmann::json;

class Node {
  public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    bool has(const char* key) const { return j_.contains(key); }

    Node at(const char* key) const {
        const std::string p = child(key);
        if (!j_.contains(key)) throw ConfigError(p, "missing required key");
        return {j_.at(key), p};
    }

    Node object(const char* key, std::initializer_list<const char*> allowed) const {
        Node n = at(key);
        n.expect_object(allowed);
        return n;
    }

    void expect_object(std::initializer_list<const char*> allowed) const {
        if (!j_.is_object()) throw ConfigError(path_, "expected an object");
        for (const auto& [k, v] : j_.items()) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) throw ConfigError(child(k), "unknown key");
        }
    }

    double number(const char* key) const {
        Node n = at(key);
        if (!n.j_.is_number()) throw ConfigError(n.path_, "expected a number");
        return n.j_.get<double>();
    }

    double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    long integer(const char* key) const {
        Node n = at(key);
        if (!n.j_.is_number_integer()) throw ConfigError(n.path_, "expected an integer");
        return n.j_.get<long>();
    }

    std::string string(const char* key) const {
        Node n = at(key);
        if (!n.j_.is_string()) throw ConfigError(n.path_, "expected a string");
        return n.j_.get<std::string>();
    }

    Vec3 vec3(const char* key) const {
        Node n = at(key);
        if (!n.j_.is_array() || n.j_.size() != 3) throw ConfigError(n.path_, "expected an array of 3 numbers");
        Vec3 v;
        for (int a = 0; a < 3; ++a) {
            if (!n.j_[a].is_number()) throw ConfigError(n.path_, "expected an array of 3 numbers");
            v[a] = n.j_[a].get<double>();
        }
        return v;
    }

    std::vector<Node> array(const char* key) const {
        Node n = at(key);
        if (!n.j_.is_array()) throw ConfigError(n.path_, "expected an array");
        std::vector<Node> out;
        for (std::size_t i = 0; i < n.j_.size(); ++i) out.emplace_back(n.j_[i], n.path_ + "[" + std::to_string(i) + "]");
        return out;
    }

  private:
    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& j_;
    std::string path_;
};

int to_int(const Node& n, const char* key) {
    const long v = n.integer(key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError(n.path() + "." + key, "out of range");
    return static_cast<int>(v);
}

// Validation messages start with the dotted key they concern.
std::string leading_key(const std::string& msg) {
    const auto end = msg.find_first_of(" :");
    return msg.substr(0, end);
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    const Node root(doc, "");
    root.expect_object({"name", "partition", "sim", "leader", "followers", "options"});

    ScenarioConfig cfg;
    cfg.name = root.has("name") ? root.string("name") : name;

    const Node part = root.object("partition", {"radius_m", "n_r", "n_theta", "n_phi"});
    cfg.partition = {part.number("radius_m"), to_int(part, "n_r"), to_int(part, "n_theta"), to_int(part, "n_phi")};
    try {
        cfg.partition.validate();
    } catch (const InvalidSpec& e) {
        throw ConfigError("partition", e.what());
    }

    const Node sim = root.object("sim", {"step_s", "duration_s", "seed"});
    cfg.step_s = sim.number_or("step_s", cfg.step_s);
    cfg.duration_s = sim.number("duration_s");
    if (sim.has("seed")) {
        const long s = sim.integer("seed");
        if (s < 0) throw ConfigError("sim.seed", "must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
    }

    const Node leader = root.at("leader");
    leader.expect_object({"model", "position", "diameter_m", "altitude_m", "period_s", "center", "phase"});
    const std::string model = leader.string("model");
    if (model == "static") {
        cfg.leader.kind = LeaderModel::Kind::Static;
        cfg.leader.position = leader.has("position") ? leader.vec3("position") : Vec3::Zero();
    } else if (model == "circle") {
        cfg.leader.kind = LeaderModel::Kind::Circle;
        cfg.leader.diameter_m = leader.number("diameter_m");
        cfg.leader.altitude_m = leader.number_or("altitude_m", 0.0);
        cfg.leader.period_s = leader.number("period_s");
        cfg.leader.center = leader.has("center") ? leader.vec3("center") : Vec3::Zero();
        cfg.leader.phase = leader.number_or("phase", 0.0);
    } else {
        throw ConfigError("leader.model", "expected \"static\" or \"circle\", got \"" + model + "\"");
    }

    const Partition p(cfg.partition);
    for (const Node& f : root.array("followers")) {
        f.expect_object({"initial_offset", "desired_offset", "leader_region", "v_max"});
        FollowerConfig fc;
        fc.initial_offset = f.vec3("initial_offset");
        fc.v_max = f.number_or("v_max", fc.v_max);
        if (f.has("desired_offset") && f.has("leader_region"))
            throw ConfigError(f.path() + ".leader_region", "conflicts with desired_offset");
        if (f.has("leader_region")) {
            const std::string key = f.path() + ".leader_region";
            const Vec3 v = f.vec3("leader_region");
            const RegionIndex r{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])};
            if (Vec3(r.i, r.j, r.k) != v || !p.valid(r))
                throw ConfigError(key, "expected a valid region index [i, j, k]");
            fc.desired_offset = -to_cartesian(p.centroid(r));
        } else {
            fc.desired_offset = f.has("desired_offset") ? f.vec3("desired_offset") : Vec3::Zero();
        }
        cfg.followers.push_back(fc);
    }

    if (root.has("options")) {
        const Node opt = root.object("options", {"eligible_set_mode", "kappa", "verify_samples", "perturbation"});
        if (opt.has("eligible_set_mode")) {
            try {
                cfg.synthesis.mode = parse_eligible_mode(opt.string("eligible_set_mode"));
            } catch (const InvalidSpec& e) {
                throw ConfigError("options.eligible_set_mode", e.what());
            }
        }
        cfg.synthesis.kappa = opt.number_or("kappa", cfg.synthesis.kappa);
        if (opt.has("verify_samples")) cfg.synthesis.verify_samples = to_int(opt, "verify_samples");
        if (opt.has("perturbation")) {
            const Node pert = opt.object("perturbation", {"time_s", "offset"});
            cfg.perturbation = Perturbation{pert.number("time_s"), pert.vec3("offset")};
        }
    }

    try {
        validate(cfg);
    } catch (const InvalidSpec& e) {
        throw ConfigError(leading_key(e.what()), e.what());
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.stem().string());
}

}  // namespace sphform
