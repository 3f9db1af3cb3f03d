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

// Two chains joined by a zig-zag link. Every cluster site is rotated by pi
// before measurement, so each measurement teleports a Clifford and the link
// realizes a CZ between the chains' logical qubits up to Pauli byproducts.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wbqc/beam.hpp"
#include "wbqc/carving.hpp"
#include "wbqc/graph_world.hpp"
#include "wbqc/protocol1d.hpp"
#include "wbqc/quantum.hpp"
#include "wbqc/rng.hpp"

namespace wbqc {

using Matrix4cd = Eigen::Matrix4cd;

struct ZigzagLayout {
    int m_sep = 0;
    std::string link_shape;   ///< 'D'/'R' moves from the upper junction site
    int width = 0;            ///< columns 0..width-1
    int junction = 0;         ///< column of the upper junction site
    int landing = 0;          ///< column where the link meets the lower chain

    std::vector<Site> sites;
    std::vector<std::size_t> upper_chain, lower_chain, link;
    std::size_t upper_input = 0, lower_input = 0, upper_output = 0, lower_output = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    /// Measurement groups in order: per column, upper half then lower half.
    std::vector<std::vector<std::size_t>> schedule;

    std::size_t size() const { return sites.size(); }
    std::vector<Point> points() const;
    int column(std::size_t site) const { return sites[site].x; }
    bool is_output(std::size_t site) const { return site == upper_output || site == lower_output; }
    bool upper_half(std::size_t site) const { return 2 * sites[site].y <= m_sep; }
    std::string to_grid() const;
};

/// Chains on rows 0 and m_sep. An empty shape picks the default for m_sep.
/// Each chain starts at the column whose parity matches its junction, so
/// both logical qubits reach the link after an even number of teleports.
ZigzagLayout build_zigzag(int m_sep, std::string link_shape = {}, int junction = 2, int width = 0);

/// Same layout from a '#'/'.' grid: top row upper chain, bottom row lower chain.
ZigzagLayout parse_zigzag(std::string_view grid);

std::string default_link_shape(int m_sep);

/// Ideal-model input/output map of the link pattern and the Pauli each
/// measured site contributes when its outcome is 1.
struct LinkCompilation {
    Matrix4cd reference;                      ///< outcomes all zero
    Matrix4cd local_clifford;                 ///< reference = local_clifford * CZ
    std::vector<std::array<int, 4>> byproduct;  ///< per site: x1, z1, x2, z2
    double local_residual = 0.0;              ///< second operator-Schmidt value of reference*CZ
};

/// Throws InvalidLayout when the pattern does not realize CZ up to a local
/// Clifford on the outputs.
LinkCompilation compile_link(const ZigzagLayout &layout);

struct FluorescenceObservation {
    int bright_count = 0;
    bool ambiguous = false;
    bool dark() const { return bright_count == 0; }
};

/// Candidate elimination for up to three simultaneously measured sites.
/// Bit i of an assignment is site i's Z value; 0 fluoresces.
class Disambiguator {
  public:
    Disambiguator(std::size_t sites, FluorescenceObservation first);

    bool done() const { return resolved_.has_value(); }
    /// Flip mask to apply before the next re-measurement.
    unsigned next_flips() const;
    void observe(unsigned flips_applied, FluorescenceObservation obs);
    /// Original outcomes; valid once done().
    unsigned outcome() const { return *resolved_; }
    int attempts() const { return attempts_; }
    unsigned cumulative_flips() const { return flips_; }

  private:
    bool consistent(unsigned original, unsigned flips, const FluorescenceObservation &obs) const;
    std::size_t n_;
    std::vector<unsigned> candidates_;
    unsigned flips_ = 0;
    int attempts_ = 0;
    std::optional<unsigned> resolved_;
};

struct Protocol2DConfig {
    double r = 1.5;
    int offset_n = 1;
    double p_t = 0.999;
    PfModel pf_model = PfModel::uniform;
    double p_f = 0.0;
    bool ambiguous_signal = false;
    /// Centre the beam on the group's mean row instead of its chain row.
    bool beam_on_group = false;

    void validate() const;
};

struct GroupBeam {
    Point center;
    double s_peak = 0.0;
};

struct GroupResult {
    bool all_projected = true;
    FluorescenceObservation observation;
    int stray_fluorescence = 0;
};

class World2D {
  public:
    World2D(const ZigzagLayout &layout, const Eigen::Vector2cd &upper, const Eigen::Vector2cd &lower,
            const Protocol2DConfig &config);

    void apply(std::span<const Pulse> pulses);
    /// Irradiates `group`; reports only the fluorescence of the group.
    GroupResult column_measure(std::span<const std::size_t> group, const GroupBeam &beam, TrialRng &rng);
    Eigen::Vector4cd output_state();
    const std::vector<HiddenEvent> &hidden_events() const { return hidden_; }
    GraphWorld &register_state() { return world_; }

  private:
    const ZigzagLayout &layout_;
    Protocol2DConfig config_;
    GraphWorld world_;
    std::vector<bool> measured_;
    std::vector<HiddenEvent> hidden_;
    std::size_t step_ = 0;
};

class Controller2D {
  public:
    Controller2D(const ZigzagLayout &layout, Protocol2DConfig config);

    GroupBeam beam_for(std::span<const std::size_t> group) const;
    /// Resets measured sites under the beam to |1>, keeps every live site at
    /// a net pi, and flips the group sites in `flips` (relative to their
    /// state after the last projection).
    std::vector<Pulse> prepare(std::span<const std::size_t> group, unsigned flips = 0);
    void after_measurement(std::span<const std::size_t> group);
    void record(std::span<const std::size_t> group, unsigned outcomes, unsigned cumulative_flips);

    Eigen::Vector4cd correct_output(const Eigen::Vector4cd &physical, const LinkCompilation &link) const;
    const std::vector<int> &outcomes() const { return outcomes_; }
    const std::vector<double> &ledger() const { return ledger_; }

  private:
    const ZigzagLayout &layout_;
    Protocol2DConfig config_;
    std::vector<Point> positions_;
    std::vector<double> ledger_;
    std::vector<double> since_;
    std::vector<int> known_;     ///< known Z value of measured sites, -1 if live
    std::vector<int> outcomes_;  ///< intentional outcome per site, -1 if not yet measured
    std::vector<bool> projected_;
    std::vector<std::size_t> reset_;
};

struct TrialResult2D {
    std::uint64_t seed = 0;
    bool completed = false;
    bool target_miss = false;
    std::vector<int> outcomes;
    std::vector<int> bright_counts;
    int max_attempts = 0;
    int total_attempts = 0;
    double fidelity = 0.0;
    int stray_fluorescence = 0;
    std::vector<HiddenEvent> hidden_events;
};

TrialResult2D run_cz_link(const Eigen::Vector2cd &upper, const Eigen::Vector2cd &lower, const ZigzagLayout &layout,
                          const LinkCompilation &link, const Protocol2DConfig &config, TrialRng &rng);

/// One term of a branch mixture: weight, carrier sites and their joint state.
struct LogicalTerm {
    double weight = 0.0;
    int link_steps = 0;  ///< -1: junction not yet measured; else link sites measured
    std::vector<std::size_t> carriers;
    Eigen::VectorXcd state;
};

/// Two-carrier state in the frame where the logical basis is |00>, |11>:
/// H on the chain carrier, and on the link carrier after an odd number of
/// link teleports. Single-carrier terms are returned unchanged.
Eigen::VectorXcd two_particle_state(const LogicalTerm &term);

/// Logical state after measuring the first upper chain site of `layout`
/// with outcomes[0], when the junction site and the next `k` link sites may
/// have been projected as well (weights 1-p-p^2-p^3, p, p^2, p^3 as in the
/// uniform-p_f approximation). outcomes[j] is the outcome of the j-th site
/// along that path. Each state is computed on the graph truncated at its
/// carriers and excludes the carriers' own rotations.
std::vector<LogicalTerm> logical_mixture_2d(const ZigzagLayout &layout, const Eigen::Vector2cd &psi,
                                            std::span<const int> outcomes, double p_f);

/// Sites along the upper chain input, the junction, and down the link.
std::vector<std::size_t> junction_path(const ZigzagLayout &layout);

}  // namespace wbqc
