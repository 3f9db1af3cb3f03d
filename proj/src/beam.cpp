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

#include "wbqc/beam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wbqc/errors.hpp"

namespace wbqc {

namespace {

void check_radius(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("beam radius must be positive and finite");
}

void check_probability_pair(double p_hi, double p_lo, const char *hi_name, const char *lo_name) {
    if (!(p_lo > 0.0 && p_lo < 1.0 && p_hi > 0.0 && p_hi < 1.0)) {
        throw InvalidArgument(std::string("probabilities ") + hi_name + " and " + lo_name + " must lie in (0, 1)");
    }
    if (p_lo > p_hi) {
        throw InvalidArgument(std::string(lo_name) + " must not exceed " + hi_name);
    }
}

// ln[ln(1 - hi) / ln(1 - lo)], evaluated with log1p for small probabilities.
double log_exponent_ratio(double p_hi, double p_lo) { return std::log(std::log1p(-p_hi) / std::log1p(-p_lo)); }

}  // namespace

double relative_intensity(double d, double r) {
    check_radius(r);
    return std::exp(-2.0 * d * d / (r * r));
}

double rotation_angle_at(double d, double r, double peak_angle) {
    check_radius(r);
    return peak_angle * std::exp(-d * d / (r * r));
}

double projection_probability(double s) {
    if (!(s >= 0.0)) throw InvalidArgument("measurement exponent must be non-negative");
    return -std::expm1(-s);
}

double probability_at_distance(double p_center, double d, double r) {
    check_radius(r);
    if (!(p_center >= 0.0 && p_center < 1.0)) throw InvalidArgument("center probability must lie in [0, 1)");
    if (p_center == 0.0) return 0.0;
    // 1 - (1 - p)^{I/I0}
    return -std::expm1(relative_intensity(d, r) * std::log1p(-p_center));
}

double probability_from_peak(double s_peak, double d, double r) {
    return projection_probability(s_peak * relative_intensity(d, r));
}

double required_offset(double p_t, double p_f, double r) {
    check_radius(r);
    check_probability_pair(p_t, p_f, "p_t", "p_f");
    return r * r / 4.0 * log_exponent_ratio(p_t, p_f) - 0.5;
}

double second_neighbor_probability(double p_t, double p_f, double r) {
    check_radius(r);
    check_probability_pair(p_t, p_f, "p_t", "p_f");
    const double lf = std::log1p(-p_f);
    const double lt = std::log1p(-p_t);
    return -std::expm1(std::exp(-4.0 / (r * r)) * lf * lf / lt);
}

double chain_separation(double p_t, double p_m, double r) {
    check_radius(r);
    check_probability_pair(p_t, p_m, "p_t", "p_m");
    return r * std::sqrt(0.5 * log_exponent_ratio(p_t, p_m));
}

MeasurementPulse MeasurementPulse::from_exponent(double s_peak) {
    if (!(s_peak >= 0.0) || !std::isfinite(s_peak)) throw InvalidArgument("s_peak must be finite and >= 0");
    return MeasurementPulse{s_peak, false};
}

MeasurementPulse MeasurementPulse::from_rates(double omega, double gamma, double t) {
    if (!(gamma > 0.0) || !(t >= 0.0) || !std::isfinite(omega)) {
        throw InvalidArgument("need gamma > 0, t >= 0 and a finite Rabi frequency");
    }
    MeasurementPulse p = from_exponent(omega * omega * t / (2.0 * gamma));
    p.weak_decay_warning = std::abs(omega) / gamma > 0.1;
    return p;
}

OffsetPlan plan_offset(double p_t, double p_f, double r) {
    OffsetPlan plan;
    plan.r = r;
    plan.p_t = p_t;
    plan.p_f = p_f;
    plan.n = required_offset(p_t, p_f, r);
    plan.n_rounded = std::max(0, static_cast<int>(std::ceil(plan.n - 1e-12)));
    plan.p_s = second_neighbor_probability(p_t, p_f, r);
    // intensity ratio between neighbour and target; the peak exponent itself can overflow
    const double ratio = std::exp(-2.0 * (2.0 * plan.n_rounded + 1.0) / (r * r));
    plan.p_f_achieved = -std::expm1(ratio * std::log1p(-p_t));
    return plan;
}

double peak_exponent_for(double p_target, double offset, double r) {
    check_radius(r);
    if (!(p_target >= 0.0 && p_target < 1.0)) throw InvalidArgument("target probability must lie in [0, 1)");
    return -std::log1p(-p_target) / relative_intensity(offset, r);
}

CrosstalkSystem build_crosstalk(std::span<const Point> positions, double r) {
    check_radius(r);
    if (positions.empty()) throw InvalidArgument("crosstalk system needs at least one site");
    const auto n = static_cast<Eigen::Index>(positions.size());
    CrosstalkSystem sys;
    sys.positions.assign(positions.begin(), positions.end());
    sys.r = r;
    sys.matrix.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sys.matrix(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = distance_squared(positions[i], positions[j]);
            if (d2 == 0.0) {
                std::ostringstream msg;
                msg << "duplicate site (" << positions[i].x << ", " << positions[i].y << ") in crosstalk geometry";
                throw InvalidArgument(msg.str());
            }
            const double a = std::exp(-d2 / (r * r));
            sys.matrix(i, j) = a;
            sys.matrix(j, i) = a;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sys.matrix, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().cwiseAbs().minCoeff();
    const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
    sys.condition_number = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    return sys;
}

std::vector<double> solve_angles(const CrosstalkSystem &system, std::span<const double> phi) {
    const auto n = system.matrix.rows();
    if (static_cast<Eigen::Index>(phi.size()) != n) throw InvalidArgument("solve_angles: dimension mismatch");
    auto describe = [&] {
        std::ostringstream msg;
        msg << "crosstalk system with " << n << " sites at r = " << system.r << " (condition number "
            << system.condition_number << ")";
        return msg.str();
    };
    if (!(system.condition_number < kMaxConditionNumber)) {
        throw IllConditioned("ill-conditioned " + describe());
    }
    const Eigen::Map<const Eigen::VectorXd> rhs(phi.data(), n);
    const double rhs_norm = rhs.cwiseAbs().maxCoeff();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(system.matrix);
    Eigen::VectorXd theta = ldlt.solve(rhs);
    // Iterative refinement with residuals accumulated in extended precision.
    const double tol = 1e-8 * rhs_norm + 1e-12;
    double residual = 0.0;
    for (int iter = 0; iter < 4; ++iter) {
        Eigen::VectorXd res(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            long double acc = rhs(i);
            for (Eigen::Index j = 0; j < n; ++j) {
                acc -= static_cast<long double>(system.matrix(i, j)) * static_cast<long double>(theta(j));
            }
            res(i) = static_cast<double>(acc);
        }
        residual = res.cwiseAbs().maxCoeff();
        if (residual <= 1e-3 * tol) break;
        theta += ldlt.solve(res);
    }
    if (residual > tol) {
        std::ostringstream msg;
        msg << "residual " << residual << " above tolerance for " << describe();
        throw IllConditioned(msg.str());
    }
    return {theta.data(), theta.data() + n};
}

std::vector<double> replay_pulses(std::span<const Point> positions, std::span<const Point> centers,
                                  std::span<const double> peak_angles, double r) {
    if (centers.size() != peak_angles.size()) throw InvalidArgument("replay_pulses: centers/angles mismatch");
    std::vector<double> net(positions.size(), 0.0);
    for (std::size_t p = 0; p < centers.size(); ++p) {
        for (std::size_t i = 0; i < positions.size(); ++i) {
            const double a = rotation_angle_at(std::sqrt(distance_squared(positions[i], centers[p])), r, peak_angles[p]);
            if (std::abs(a) >= kRotationCutoff) net[i] += a;
        }
    }
    return net;
}

}  // namespace wbqc
