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

#pragma once

// Seeded Monte Carlo runs, aggregation and record formatting for the CLI.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "wbqc/beam.hpp"
#include "wbqc/protocol1d.hpp"
#include "wbqc/protocol2d.hpp"

namespace wbqc::harness {

enum class Format { json, csv };
Format parse_format(std::string_view s);

/// Trial i of a run uses master_seed xor i.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) { return master_seed ^ index; }

/// Calls fn(i) for i in [0, n) on `jobs` threads; results are stored by index.
template <class Fn>
auto run_indexed(std::size_t n, unsigned jobs, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    std::vector<decltype(fn(std::size_t{}))> out(n);
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs && t < n; ++t)
        pool.emplace_back([&, t] {
            (void)t;
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    out[i] = fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    for (auto &th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

/// %.17g; non-finite values print as nan / inf / -inf.
std::string format_double(double v);

/// Builds one JSON object on a single line, keys in insertion order.
class JsonLine {
  public:
    JsonLine &add(std::string_view key, double v);
    JsonLine &add(std::string_view key, int v);
    JsonLine &add(std::string_view key, long v);
    JsonLine &add(std::string_view key, unsigned long v);
    JsonLine &add(std::string_view key, unsigned long long v);
    JsonLine &add(std::string_view key, bool v);
    JsonLine &add(std::string_view key, std::string_view v);
    JsonLine &add(std::string_view key, const char *v) { return add(key, std::string_view(v)); }
    JsonLine &add(std::string_view key, const std::vector<int> &v);
    JsonLine &add(std::string_view key, const std::vector<double> &v);
    /// Inserts pre-formatted JSON.
    JsonLine &add_raw(std::string_view key, std::string_view json);
    std::string str() const { return body_.empty() ? "{}" : body_ + "}"; }

  private:
    void key(std::string_view k);
    std::string body_;
};

std::string json_string(std::string_view s);

enum class InputState { random, plus, zero };
InputState parse_input(std::string_view s);
/// Haar-random from two uniforms of the trial generator, or a fixed state.
Eigen::Vector2cd draw_input(InputState kind, TrialRng &rng);

// ---- run-1d

struct Run1DConfig {
    EulerTarget target{std::numbers::pi / 5, std::numbers::pi / 3, std::numbers::pi / 7};
    Protocol1DConfig protocol;
    InputState input = InputState::random;
    std::uint64_t seed = 0;
    std::size_t trials = 1;
    unsigned jobs = 1;
};

std::vector<TrialResult> run_1d(const Run1DConfig &config);

struct Statistics1D {
    std::size_t trials = 0;
    std::size_t completed = 0;
    std::size_t target_miss = 0;
    std::size_t chain_exhausted = 0;
    std::size_t unprotected_hit = 0;
    double mean_fidelity = 0.0;  ///< over completed trials
    double min_fidelity = 0.0;
    /// Failed attempts on the second Euler rotation: bins 0..n-1 and a final
    /// overflow bin for trials where that rotation never completed.
    std::vector<std::size_t> depth_histogram;
    std::map<std::size_t, std::size_t> qubits_used;  ///< completed trials only
};

Statistics1D summarize_1d(const std::vector<TrialResult> &results, std::size_t depth_bins = 8);

std::string record_json(const TrialResult &r, bool reveal_hidden);
TrialResult parse_record_json(std::string_view line);
std::string csv_header_1d();
std::string record_csv(const TrialResult &r);
std::string statistics_json(const Statistics1D &s);

// ---- run-2d

struct Run2DConfig {
    int m_sep = 4;
    std::string link_shape;
    int junction = 2;
    int width = 6;
    std::string grid;  ///< when non-empty, overrides the fields above
    Protocol2DConfig protocol;
    InputState input = InputState::random;
    std::uint64_t seed = 0;
    std::size_t trials = 1;
    unsigned jobs = 1;
};

ZigzagLayout layout_for(const Run2DConfig &config);
std::vector<TrialResult2D> run_2d(const Run2DConfig &config);

struct Statistics2D {
    std::size_t trials = 0;
    std::size_t completed = 0;
    std::size_t target_miss = 0;
    double mean_fidelity = 0.0;
    double min_fidelity = 0.0;
    int max_attempts = 0;
    std::vector<std::size_t> attempts_histogram;  ///< per measured group, 0..7
};

Statistics2D summarize_2d(const std::vector<TrialResult2D> &results);

std::string record_json(const TrialResult2D &r, bool reveal_hidden);
std::string csv_header_2d();
std::string record_csv(const TrialResult2D &r);
std::string statistics_json(const Statistics2D &s);

// ---- planning

struct PlanRow {
    double r = 0.0, p_t = 0.0, p_f = 0.0;
    double n = 0.0;
    int n_rounded = 0;
    double p_s = 0.0;
    double p_m = 0.0;
    double m = 0.0;
    int m_rounded = 0;
};

PlanRow plan_row(double r, double p_t, double p_f, double p_m);
std::string csv_header_plan();
std::string row_csv(const PlanRow &row);
std::string row_json(const PlanRow &row);

}  // namespace wbqc::harness
