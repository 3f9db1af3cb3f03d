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

#include "wbqc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "wbqc/errors.hpp"

namespace wbqc::harness {

Format parse_format(std::string_view s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw InvalidArgument("unknown format '" + std::string(s) + "' (json or csv)");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out + "\"";
}

namespace {
std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }
}  // namespace

void JsonLine::key(std::string_view k) {
    body_ += body_.empty() ? "{" : ",";
    body_ += json_string(k);
    body_ += ':';
}

JsonLine &JsonLine::add(std::string_view k, double v) {
    key(k);
    body_ += json_number(v);
    return *this;
}
JsonLine &JsonLine::add(std::string_view k, int v) { return add_raw(k, std::to_string(v)); }
JsonLine &JsonLine::add(std::string_view k, long v) { return add_raw(k, std::to_string(v)); }
JsonLine &JsonLine::add(std::string_view k, unsigned long v) { return add_raw(k, std::to_string(v)); }
JsonLine &JsonLine::add(std::string_view k, unsigned long long v) { return add_raw(k, std::to_string(v)); }
JsonLine &JsonLine::add(std::string_view k, bool v) { return add_raw(k, v ? "true" : "false"); }
JsonLine &JsonLine::add(std::string_view k, std::string_view v) { return add_raw(k, json_string(v)); }

JsonLine &JsonLine::add(std::string_view k, const std::vector<int> &v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return add_raw(k, s + "]");
}

JsonLine &JsonLine::add(std::string_view k, const std::vector<double> &v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + json_number(v[i]);
    return add_raw(k, s + "]");
}

JsonLine &JsonLine::add_raw(std::string_view k, std::string_view json) {
    key(k);
    body_ += json;
    return *this;
}

InputState parse_input(std::string_view s) {
    if (s == "random") return InputState::random;
    if (s == "plus") return InputState::plus;
    if (s == "zero") return InputState::zero;
    throw InvalidArgument("unknown input state '" + std::string(s) + "' (random, plus or zero)");
}

Eigen::Vector2cd draw_input(InputState kind, TrialRng &rng) {
    switch (kind) {
        case InputState::plus: return Eigen::Vector2cd(1.0, 1.0) / std::sqrt(2.0);
        case InputState::zero: return Eigen::Vector2cd(1.0, 0.0);
        case InputState::random: break;
    }
    const double cos_theta = 1.0 - 2.0 * rng.uniform();
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const double c = std::sqrt(0.5 * (1.0 + cos_theta)), s = std::sqrt(0.5 * (1.0 - cos_theta));
    return {Complex(c, 0.0), std::polar(s, phi)};
}

// ---- run-1d

std::vector<TrialResult> run_1d(const Run1DConfig &config) {
    config.protocol.validate();
    if (config.protocol.chain_length > kMaxQubits)
        throw CapacityError("chain of " + std::to_string(config.protocol.chain_length) + " sites exceeds the " +
                            std::to_string(kMaxQubits) + "-site simulation limit");
    return run_indexed(config.trials, config.jobs, [&](std::size_t i) {
        TrialRng rng(config.seed, i);
        const auto input = draw_input(config.input, rng);
        auto r = run_trial_1d(input, config.target, config.protocol, rng);
        r.seed = trial_seed(config.seed, i);
        r.transcript.clear();
        return r;
    });
}

Statistics1D summarize_1d(const std::vector<TrialResult> &results, std::size_t depth_bins) {
    Statistics1D s;
    s.trials = results.size();
    s.depth_histogram.assign(depth_bins + 1, 0);
    double sum = 0.0;
    s.min_fidelity = std::numeric_limits<double>::quiet_NaN();
    for (const auto &r : results) {
        s.target_miss += r.target_miss;
        s.chain_exhausted += r.chain_exhausted;
        s.unprotected_hit += r.unprotected_hit;
        const int d = r.correction_depth.size() > 1 ? r.correction_depth[1] : -1;
        ++s.depth_histogram[d >= 0 && std::size_t(d) < depth_bins ? std::size_t(d) : depth_bins];
        if (!r.completed) continue;
        ++s.completed;
        sum += r.fidelity;
        s.min_fidelity = s.completed == 1 ? r.fidelity : std::min(s.min_fidelity, r.fidelity);
        ++s.qubits_used[r.qubits_used];
    }
    s.mean_fidelity = s.completed ? sum / double(s.completed) : std::numeric_limits<double>::quiet_NaN();
    return s;
}

namespace {

std::string hidden_json(const std::vector<HiddenEvent> &events) {
    std::string s = "[";
    for (std::size_t i = 0; i < events.size(); ++i) {
        s += i ? "," : "";
        s += JsonLine()
                 .add("site", static_cast<unsigned long long>(events[i].site))
                 .add("outcome", events[i].outcome)
                 .add("step", static_cast<unsigned long long>(events[i].step))
                 .str();
    }
    return s + "]";
}

std::string digits(const std::vector<int> &v) {
    std::string s;
    for (int x : v) s += x < 0 ? '-' : char('0' + x);
    return s;
}

}  // namespace

std::string record_json(const TrialResult &r, bool reveal_hidden) {
    JsonLine j;
    j.add("seed", static_cast<unsigned long long>(r.seed))
        .add("completed", r.completed)
        .add("target_miss", r.target_miss)
        .add("chain_exhausted", r.chain_exhausted)
        .add("unprotected_hit", r.unprotected_hit)
        .add("outcomes", r.outcomes)
        .add("inserted_pairs", r.inserted_pairs)
        .add_raw("byproduct", JsonLine().add("x", r.byproduct_x).add("z", r.byproduct_z).str())
        .add("fidelity", r.fidelity)
        .add("qubits_used", static_cast<unsigned long long>(r.qubits_used))
        .add("correction_depth", r.correction_depth)
        .add("stray_fluorescence", r.stray_fluorescence);
    if (reveal_hidden) j.add_raw("hidden_events", hidden_json(r.hidden_events));
    return j.str();
}

TrialResult parse_record_json(std::string_view line) {
    TrialResult r;
    try {
        const auto j = nlohmann::json::parse(line);
        r.seed = j.at("seed").get<std::uint64_t>();
        r.completed = j.at("completed").get<bool>();
        r.target_miss = j.at("target_miss").get<bool>();
        r.chain_exhausted = j.at("chain_exhausted").get<bool>();
        r.unprotected_hit = j.at("unprotected_hit").get<bool>();
        r.outcomes = j.at("outcomes").get<std::vector<int>>();
        r.inserted_pairs = j.at("inserted_pairs").get<int>();
        r.byproduct_x = j.at("byproduct").at("x").get<int>();
        r.byproduct_z = j.at("byproduct").at("z").get<int>();
        r.fidelity = j.at("fidelity").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                : j.at("fidelity").get<double>();
        r.qubits_used = j.at("qubits_used").get<std::size_t>();
        r.correction_depth = j.at("correction_depth").get<std::vector<int>>();
        r.stray_fluorescence = j.at("stray_fluorescence").get<int>();
        if (j.contains("hidden_events"))
            for (const auto &h : j.at("hidden_events"))
                r.hidden_events.push_back(
                    {h.at("site").get<std::size_t>(), h.at("outcome").get<int>(), h.at("step").get<std::size_t>()});
    } catch (const nlohmann::json::exception &e) {
        throw InvalidArgument(std::string("bad trial record: ") + e.what());
    }
    return r;
}

std::string csv_header_1d() {
    return "seed,completed,target_miss,chain_exhausted,unprotected_hit,outcomes,inserted_pairs,byproduct_x,"
           "byproduct_z,fidelity,qubits_used,depth1,depth2,depth3,stray_fluorescence,hidden_events";
}

std::string record_csv(const TrialResult &r) {
    const auto depth = [&](std::size_t k) { return std::to_string(k < r.correction_depth.size() ? r.correction_depth[k] : -1); };
    return std::to_string(r.seed) + ',' + std::to_string(int(r.completed)) + ',' + std::to_string(int(r.target_miss)) +
           ',' + std::to_string(int(r.chain_exhausted)) + ',' + std::to_string(int(r.unprotected_hit)) + ',' +
           digits(r.outcomes) + ',' + std::to_string(r.inserted_pairs) + ',' + std::to_string(r.byproduct_x) + ',' +
           std::to_string(r.byproduct_z) + ',' + format_double(r.fidelity) + ',' + std::to_string(r.qubits_used) +
           ',' + depth(0) + ',' + depth(1) + ',' + depth(2) + ',' + std::to_string(r.stray_fluorescence) + ',' +
           std::to_string(r.hidden_events.size());
}

std::string statistics_json(const Statistics1D &s) {
    std::vector<int> hist(s.depth_histogram.begin(), s.depth_histogram.end());
    std::string q = "{";
    bool first = true;
    for (const auto &[k, v] : s.qubits_used) {
        q += (first ? "" : ",") + json_string(std::to_string(k)) + ":" + std::to_string(v);
        first = false;
    }
    q += "}";
    return JsonLine()
        .add("trials", static_cast<unsigned long long>(s.trials))
        .add("completed", static_cast<unsigned long long>(s.completed))
        .add("target_miss", static_cast<unsigned long long>(s.target_miss))
        .add("chain_exhausted", static_cast<unsigned long long>(s.chain_exhausted))
        .add("unprotected_hit", static_cast<unsigned long long>(s.unprotected_hit))
        .add("mean_fidelity", s.mean_fidelity)
        .add("min_fidelity", s.min_fidelity)
        .add("correction_depth_histogram", hist)
        .add_raw("qubits_used", q)
        .str();
}

// ---- run-2d

ZigzagLayout layout_for(const Run2DConfig &config) {
    ZigzagLayout l = config.grid.empty()
                         ? build_zigzag(config.m_sep, config.link_shape, config.junction, config.width)
                         : parse_zigzag(config.grid);
    if (l.size() > kMaxQubits)
        throw CapacityError("layout of " + std::to_string(l.size()) + " sites exceeds the " +
                            std::to_string(kMaxQubits) + "-site simulation limit");
    return l;
}

std::vector<TrialResult2D> run_2d(const Run2DConfig &config) {
    config.protocol.validate();
    const ZigzagLayout layout = layout_for(config);
    const LinkCompilation link = compile_link(layout);
    return run_indexed(config.trials, config.jobs, [&](std::size_t i) {
        TrialRng rng(config.seed, i);
        const auto upper = draw_input(config.input, rng);
        const auto lower = draw_input(config.input, rng);
        auto r = run_cz_link(upper, lower, layout, link, config.protocol, rng);
        r.seed = trial_seed(config.seed, i);
        return r;
    });
}

Statistics2D summarize_2d(const std::vector<TrialResult2D> &results) {
    Statistics2D s;
    s.trials = results.size();
    s.attempts_histogram.assign(8, 0);
    s.min_fidelity = std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    for (const auto &r : results) {
        s.target_miss += r.target_miss;
        s.max_attempts = std::max(s.max_attempts, r.max_attempts);
        if (!r.completed) continue;
        ++s.completed;
        sum += r.fidelity;
        s.min_fidelity = s.completed == 1 ? r.fidelity : std::min(s.min_fidelity, r.fidelity);
        ++s.attempts_histogram[std::size_t(std::min(r.max_attempts, 7))];
    }
    s.mean_fidelity = s.completed ? sum / double(s.completed) : std::numeric_limits<double>::quiet_NaN();
    return s;
}

std::string record_json(const TrialResult2D &r, bool reveal_hidden) {
    JsonLine j;
    j.add("seed", static_cast<unsigned long long>(r.seed))
        .add("completed", r.completed)
        .add("target_miss", r.target_miss)
        .add("outcomes", r.outcomes)
        .add("bright_counts", r.bright_counts)
        .add("max_attempts", r.max_attempts)
        .add("total_attempts", r.total_attempts)
        .add("fidelity", r.fidelity)
        .add("stray_fluorescence", r.stray_fluorescence);
    if (reveal_hidden) j.add_raw("hidden_events", hidden_json(r.hidden_events));
    return j.str();
}

std::string csv_header_2d() {
    return "seed,completed,target_miss,outcomes,bright_counts,max_attempts,total_attempts,fidelity,stray_fluorescence,"
           "hidden_events";
}

std::string record_csv(const TrialResult2D &r) {
    return std::to_string(r.seed) + ',' + std::to_string(int(r.completed)) + ',' + std::to_string(int(r.target_miss)) +
           ',' + digits(r.outcomes) + ',' + digits(r.bright_counts) + ',' + std::to_string(r.max_attempts) + ',' +
           std::to_string(r.total_attempts) + ',' + format_double(r.fidelity) + ',' +
           std::to_string(r.stray_fluorescence) + ',' + std::to_string(r.hidden_events.size());
}

std::string statistics_json(const Statistics2D &s) {
    return JsonLine()
        .add("trials", static_cast<unsigned long long>(s.trials))
        .add("completed", static_cast<unsigned long long>(s.completed))
        .add("target_miss", static_cast<unsigned long long>(s.target_miss))
        .add("mean_fidelity", s.mean_fidelity)
        .add("min_fidelity", s.min_fidelity)
        .add("max_attempts", s.max_attempts)
        .add("attempts_histogram", std::vector<int>(s.attempts_histogram.begin(), s.attempts_histogram.end()))
        .str();
}

// ---- planning

PlanRow plan_row(double r, double p_t, double p_f, double p_m) {
    PlanRow row;
    row.r = r;
    row.p_t = p_t;
    row.p_f = p_f;
    row.p_m = p_m;
    const auto plan = plan_offset(p_t, p_f, r);
    row.n = plan.n;
    row.n_rounded = plan.n_rounded;
    row.p_s = plan.p_s;
    row.m = chain_separation(p_t, p_m, r);
    row.m_rounded = int(std::lround(row.m));
    return row;
}

std::string csv_header_plan() { return "r,p_t,p_f,n,n_rounded,p_s,p_m,m,m_rounded"; }

std::string row_csv(const PlanRow &row) {
    return format_double(row.r) + ',' + format_double(row.p_t) + ',' + format_double(row.p_f) + ',' +
           format_double(row.n) + ',' + std::to_string(row.n_rounded) + ',' + format_double(row.p_s) + ',' +
           format_double(row.p_m) + ',' + format_double(row.m) + ',' + std::to_string(row.m_rounded);
}

std::string row_json(const PlanRow &row) {
    return JsonLine()
        .add("r", row.r)
        .add("p_t", row.p_t)
        .add("p_f", row.p_f)
        .add("n", row.n)
        .add("n_rounded", row.n_rounded)
        .add("p_s", row.p_s)
        .add("p_m", row.p_m)
        .add("m", row.m)
        .add("m_rounded", row.m_rounded)
        .str();
}

}  // namespace wbqc::harness
