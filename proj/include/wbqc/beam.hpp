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

// Classical beam physics and planning: Gaussian profiles, fluorescence
// projection probabilities, offset and chain-separation planners, and the
// crosstalk linear system. Lengths are in units of the lattice spacing.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wbqc {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point &, const Point &) = default;
};

inline double distance_squared(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// Rotation contributions below this many radians are dropped from the
/// phase ledger and from the simulated world alike.
inline constexpr double kRotationCutoff = 1e-12;

/// Crosstalk systems with a condition number at or above this are rejected.
inline constexpr double kMaxConditionNumber = 1e12;

/// I(d)/I0 = exp(-2 d^2 / r^2).
double relative_intensity(double d, double r);

/// Net rotation at distance d from a pulse of peak angle `peak_angle`; the
/// Rabi frequency follows the field amplitude, so the exponent is -d^2/r^2.
double rotation_angle_at(double d, double r, double peak_angle);

/// Fluorescence projection probability 1 - exp(-s), s = Omega^2 t / (2 gamma).
double projection_probability(double s);

/// Projection probability at distance d given the probability at the beam
/// center; the exponent s scales with the local intensity.
double probability_at_distance(double p_center, double d, double r);

/// Same model parameterized by the beam-center exponent, which stays
/// representable when the center probability rounds to 1.
double probability_from_peak(double s_peak, double d, double r);

/// Beam offset, in lattice spacings, that yields p_t on the target and p_f on
/// its first neighbour on the far side. Real-valued; callers round up.
double required_offset(double p_t, double p_f, double r);

/// Probability of projecting the second neighbour with the beam placed per
/// required_offset.
double second_neighbor_probability(double p_t, double p_f, double r);

/// Vertical chain separation (lattice spacings) that keeps the projection
/// probability on an adjacent chain at p_m when the target sees p_t.
double chain_separation(double p_t, double p_m, double r);

struct MeasurementPulse {
    double s_peak = 0.0;
    /// Set when built from raw rates with Omega/gamma > 0.1.
    bool weak_decay_warning = false;

    static MeasurementPulse from_exponent(double s_peak);
    static MeasurementPulse from_rates(double omega, double gamma, double t);
};

struct OffsetPlan {
    double r = 0.0;
    double p_t = 0.0;
    double p_f = 0.0;
    double n = 0.0;      ///< real-valued offset
    int n_rounded = 0;   ///< ceil(n), never below 0
    double p_s = 0.0;
    /// First-neighbour probability achieved with the rounded offset.
    double p_f_achieved = 0.0;
};

OffsetPlan plan_offset(double p_t, double p_f, double r);

/// Beam-center exponent that puts `p_target` on a site `offset` spacings away.
double peak_exponent_for(double p_target, double offset, double r);

struct CrosstalkSystem {
    std::vector<Point> positions;
    double r = 0.0;
    Eigen::MatrixXd matrix;
    double condition_number = 0.0;
};

/// a_nm = exp(-|x_n - x_m|^2 / r^2). Throws InvalidArgument on duplicate positions.
CrosstalkSystem build_crosstalk(std::span<const Point> positions, double r);

/// Solves A theta = phi. Throws IllConditioned when cond(A) >= kMaxConditionNumber.
std::vector<double> solve_angles(const CrosstalkSystem &system, std::span<const double> phi);

/// Net rotation at every position from pulses (center, peak angle), with the
/// rotation cutoff applied to each contribution.
std::vector<double> replay_pulses(std::span<const Point> positions, std::span<const Point> centers,
                                  std::span<const double> peak_angles, double r);

}  // namespace wbqc
