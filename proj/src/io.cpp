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

#include "sphform/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace sphform {

std::string format_number(double v) {
    if (v == 0.0) return "0";
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

namespace {

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string json_region(const RegionIndex& r) {
    return "[" + std::to_string(r.i) + "," + std::to_string(r.j) + "," + std::to_string(r.k) + "]";
}

const char* event_kind(const Event& e) {
    switch (e.kind) {
        case Event::Kind::Actuation: return "actuation";
        case Event::Kind::Detection: return "detection";
        case Event::Kind::External: return "external";
    }
    return "?";
}

void open_for_write(std::ofstream& f, const std::filesystem::path& p) {
    f.open(p, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + p.string());
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const FollowerResult& f) {
    out << "t,x,y,z,rel_x,rel_y,rel_z,r,theta,phi,i,j,k,u_x,u_y,u_z,active_label\n";
    for (const WorldSample& w : f.trajectory) {
        const SphericalPoint s = to_spherical(w.rel.x);
        const double cols[] = {w.rel.t,   w.absolute.x(), w.absolute.y(), w.absolute.z(), w.rel.x.x(),
                               w.rel.x.y(), w.rel.x.z(),  s.r,            s.theta,        s.phi};
        for (double c : cols) out << format_number(c) << ',';
        out << w.rel.region.i << ',' << w.rel.region.j << ',' << w.rel.region.k << ',';
        out << format_number(w.rel.u.x()) << ',' << format_number(w.rel.u.y()) << ',' << format_number(w.rel.u.z())
            << ',' << to_string(w.rel.label) << '\n';
    }
}

void write_events_jsonl(std::ostream& out, const std::vector<LogEntry>& events) {
    for (const LogEntry& e : events) {
        out << "{\"t\":" << json_number(e.t) << ",\"event\":" << json_string(to_string(e.event))
            << ",\"kind\":\"" << event_kind(e.event) << "\",\"from\":" << json_string(e.from)
            << ",\"to\":" << json_string(e.to) << ",\"resync\":" << (e.resync ? "true" : "false") << "}\n";
    }
}

void write_summary_json(std::ostream& out, const ScenarioConfig& cfg, std::size_t follower, const FollowerResult& f) {
    const RunOutcome& o = f.outcome;
    out << "{\n";
    out << "  \"scenario\": " << json_string(cfg.name) << ",\n";
    out << "  \"follower\": " << follower << ",\n";
    out << "  \"seed\": " << cfg.seed << ",\n";
    out << "  \"reached\": " << (o.reached ? "true" : "false") << ",\n";
    out << "  \"held\": " << (o.held ? "true" : "false") << ",\n";
    out << "  \"time_to_formation_s\": " << (o.reached ? json_number(o.time_to_formation_s) : "null") << ",\n";
    out << "  \"final_region\": " << json_region(o.final_region) << ",\n";
    out << "  \"final_label\": " << json_string(to_string(o.final_label)) << ",\n";
    out << "  \"collision_alarms\": " << o.collision_alarms << ",\n";
    out << "  \"min_inter_agent_distance_m\": " << json_number(f.min_inter_agent_distance_m) << ",\n";
    out << "  \"leader_region\": " << (f.leader_region ? json_region(*f.leader_region) : "null") << "\n";
    out << "}\n";
}

void write_run_outputs(const std::filesystem::path& dir, const ScenarioConfig& cfg, const ScenarioResult& res) {
    for (std::size_t n = 0; n < res.followers.size(); ++n) {
        const std::filesystem::path sub = dir / ("follower_" + std::to_string(n + 1));
        std::filesystem::create_directories(sub);
        std::ofstream f;
        open_for_write(f, sub / "trajectory.csv");
        write_trajectory_csv(f, res.followers[n]);
        f.close();
        open_for_write(f, sub / "events.jsonl");
        write_events_jsonl(f, res.followers[n].events);
        f.close();
        open_for_write(f, sub / "summary.json");
        write_summary_json(f, cfg, n + 1, res.followers[n]);
    }
}

}  // namespace sphform
