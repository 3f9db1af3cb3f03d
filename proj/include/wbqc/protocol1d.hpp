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

// One-dimensional wide-beam measurement protocol. The world owns the physical
// register and the log of inadvertent projections; the controller sees only
// its own transcript of observed outcomes and issued pulses.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wbqc/beam.hpp"
#include "wbqc/graph_world.hpp"
#include "wbqc/quantum.hpp"
#include "wbqc/rng.hpp"

namespace wbqc {

struct EulerTarget {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;

    double operator[](int i) const { return i == 0 ? alpha1 : (i == 1 ? alpha2 : alpha3); }
    /// H R_z(a3) R_x(a2) R_z(a1).
    Gate unitary() const;
};

enum class PfModel { exact, uniform };

/// Sites whose projection probability under the measuring beam falls below
/// this are left alone.
inline constexpr double kProjectionThreshold = 1e-15;

struct Protocol1DConfig {
    double r = 1.5;
    int offset_n = 1;
    /// Target projection probability realized by the world's beam.
    double p_t = 0.999;
    PfModel pf_model = PfModel::exact;
    /// Neighbour projection probability in the uniform model.
    double p_f = 0.0;
    int m_protect = 1;
    /// Neighbours the uniform model may project; 0 means m_protect.
    int reach = 0;
    std::size_t chain_length = 12;

    void validate() const;
    double s_peak() const;
};

/// What a chain site teleports: H R_z(beta), with physical angle beta + pi.
struct SlotRole {
    enum class Kind { buffer, euler, correction };
    Kind kind = Kind::buffer;
    int euler_index = -1;
    int attempt = 0;
    double beta = 0.0;
    double physical_angle() const;
};

/// The pair-insertion feed-forward rule, independent of beam physics.
/// Site q is fixed before site q - m_protect is measured, so only outcomes
/// of sites below q - m_protect may influence it.
class FeedForwardPlanner {
  public:
    FeedForwardPlanner(EulerTarget target, int m_protect, std::size_t chain_length);

    SlotRole fix(std::size_t site);
    void record(std::size_t site, int outcome);

    struct Summary {
        bool complete = false;
        int x = 0, z = 0;              ///< Pauli frame X^x Z^z on the output
        int trailing_hadamards = 0;    ///< buffers after the last Euler slot
        std::size_t last_slot = 0;
        std::vector<int> depth;        ///< failed attempts per Euler slot, -1 if never placed
        std::vector<bool> uncertain;   ///< slot sign depended on an unknown outcome
        int inserted = 0;              ///< correction slots placed
    };
    /// Call once every measured site has an outcome. Throws ChainExhausted
    /// when an Euler angle is still wrong.
    Summary finish();

    const std::vector<SlotRole> &roles() const { return roles_; }
    const std::vector<int> &outcomes() const { return outcomes_; }
    int current_attempt() const { return attempt_; }
    /// Failed attempts per completed Euler slot, -1 for slots not completed.
    const std::vector<int> &resolved_depths() const { return depth_; }

  private:
    int x_parity(std::size_t site, std::size_t known_below, bool &fully_known) const;
    void resolve(std::size_t known_below);

    EulerTarget target_;
    int m_;
    std::size_t length_;
    std::vector<SlotRole> roles_;
    std::vector<int> outcomes_;       ///< -1 until observed
    int euler_ = 0;                   ///< next Euler angle to complete
    int acc_ = 0;                     ///< accumulated multiple of alpha on it
    int attempt_ = 0;
    int requested_ = 0;               ///< signed multiple requested by the pending slot
    std::optional<std::size_t> pending_;
    std::optional<std::size_t> last_slot_;
    std::size_t buffers_since_slot_ = 0;
    std::vector<int> depth_{-1, -1, -1};
    std::vector<bool> uncertain_{false, false, false};
    int inserted_ = 0;
};

struct Pulse {
    Point center;
    double peak_angle = 0.0;
};

struct Preparation {
    std::size_t target = 0;
    std::vector<std::size_t> window;
    std::vector<Pulse> pulses;
    Point beam_center;
    double s_peak = 0.0;
    std::size_t ledger_entries_touched = 0;
};

struct TranscriptEntry {
    std::size_t target = 0;
    int outcome = 0;
    std::vector<Pulse> pulses;
    bool inserted_pair = false;
};

/// Controller side: phase ledger, feed-forward planner, transcript.
class Controller1D {
  public:
    Controller1D(EulerTarget target, Protocol1DConfig config);

    /// Fixes the sites that may be hit while measuring `target`, resets
    /// measured sites under the beam to |1>, and solves the window system.
    Preparation prepare(std::size_t target);
    void record(int outcome);

    /// Undoes the output site's local rotation, the Pauli frame and the
    /// trailing Hadamards.
    Eigen::Vector2cd correct_output(const Eigen::Vector2cd &physical_output, const FeedForwardPlanner::Summary &s) const;

    FeedForwardPlanner::Summary finish() { return planner_.finish(); }

    const std::vector<double> &ledger() const { return ledger_; }
    const std::vector<TranscriptEntry> &transcript() const { return transcript_; }
    const FeedForwardPlanner &planner() const { return planner_; }
    const std::vector<Pulse> &issued_pulses() const { return issued_; }

    /// Measured sites within the beam's projection range.
    std::vector<std::size_t> beam_window(std::size_t target) const;

  private:
    EulerTarget target_;
    Protocol1DConfig config_;
    FeedForwardPlanner planner_;
    std::vector<Point> positions_;
    std::vector<double> ledger_;        ///< total R_x per site
    std::vector<double> since_reset_;   ///< R_x since the last projection (measured sites)
    std::vector<int> last_value_;       ///< known Z value of measured sites, -1 if live
    std::vector<double> target_net_;    ///< fixed physical angle, NaN until fixed
    std::size_t fixed_upto_ = 0;        ///< sites [0, fixed_upto_) are fixed
    std::optional<Preparation> open_;
    std::vector<TranscriptEntry> transcript_;
    std::vector<Pulse> issued_;
};

struct HiddenEvent {
    std::size_t site = 0;
    int outcome = 0;
    std::size_t step = 0;
};

struct BeamResult {
    bool target_projected = true;
    int outcome = 0;
    int stray_fluorescence = 0;
};

/// World side of the chain.
class World1D {
  public:
    World1D(const Eigen::Vector2cd &input, const Protocol1DConfig &config);

    void apply(std::span<const Pulse> pulses);
    BeamResult execute_beam(std::size_t target, Point center, double s_peak, TrialRng &rng);

    Eigen::Vector2cd output_state();
    const std::vector<HiddenEvent> &hidden_events() const { return hidden_; }
    GraphWorld &register_state() { return world_; }

  private:
    Protocol1DConfig config_;
    GraphWorld world_;
    std::vector<bool> measured_;
    std::vector<HiddenEvent> hidden_;
};

struct TrialResult {
    std::uint64_t seed = 0;
    bool completed = false;
    bool target_miss = false;
    bool unprotected_hit = false;
    bool chain_exhausted = false;
    std::vector<int> outcomes;
    int inserted_pairs = 0;
    int byproduct_x = 0, byproduct_z = 0;
    double fidelity = 0.0;
    std::size_t qubits_used = 0;
    std::vector<int> correction_depth;      ///< per Euler slot, -1 if not completed
    int exhausted_attempts = 0;             ///< failed attempts on the slot that ran out of chain
    std::vector<bool> depth_uncertain;
    int stray_fluorescence = 0;
    std::size_t ledger_entries_touched = 0;
    std::size_t max_window = 0;
    std::vector<HiddenEvent> hidden_events;
    std::vector<TranscriptEntry> transcript;
};

/// Runs one trajectory. Chain exhaustion is reported in the result.
TrialResult run_trial_1d(const Eigen::Vector2cd &input, const EulerTarget &target, const Protocol1DConfig &config,
                         TrialRng &rng);

/// Same trajectory; throws ChainExhausted instead of flagging it.
TrialResult run_single_qubit_unitary(const Eigen::Vector2cd &input, const EulerTarget &target,
                                     const Protocol1DConfig &config, TrialRng &rng);

/// Physical angle of correction attempt k: (-1)^k 2^k alpha + pi.
double correction_angle(int k, double alpha);

/// Physical angles on the all-zero-outcome path, ending with the output site.
std::vector<double> buffer_schedule(int m_protect, const EulerTarget &target);

/// Chain length for m_protect protected neighbours and failure budget epsilon.
std::size_t chain_length(int m_protect, double epsilon);
int correction_attempts_for(double epsilon);

/// Exact logical state after intentionally measuring sites 0..steps-1 of a
/// chain with the given slot angles and outcomes. With probability p the
/// next site was projected as well, with outcome outcomes[steps].
DensityMatrix logical_mixture(const Eigen::Vector2cd &psi, std::span<const double> betas,
                              std::span<const int> outcomes, std::size_t steps, double p);

}  // namespace wbqc
