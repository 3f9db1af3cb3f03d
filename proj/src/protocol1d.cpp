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

#include "wbqc/protocol1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wbqc/errors.hpp"

namespace wbqc {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
    a = std::remainder(a, 2 * kPi);
    return a <= -kPi ? a + 2 * kPi : a;
}

}  // namespace

Gate EulerTarget::unitary() const {
    return gates::hadamard() * make_rotation(Axis::Z, alpha3) * make_rotation(Axis::X, alpha2) *
           make_rotation(Axis::Z, alpha1);
}

void Protocol1DConfig::validate() const {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("r must be positive");
    if (offset_n < 0) throw InvalidArgument("offset_n must be >= 0");
    if (!(p_t > 0.0 && p_t < 1.0)) throw InvalidArgument("p_t must lie in (0, 1)");
    if (!(p_f >= 0.0 && p_f <= 1.0)) throw InvalidArgument("p_f must lie in [0, 1]");
    if (m_protect < 1) throw InvalidArgument("m_protect must be >= 1");
    if (reach < 0) throw InvalidArgument("reach must be >= 0");
    if (chain_length < 2) throw InvalidArgument("chain needs at least two sites");
}

double Protocol1DConfig::s_peak() const { return peak_exponent_for(p_t, double(offset_n), r); }

double SlotRole::physical_angle() const { return beta + kPi; }

// ---------------------------------------------------------------------------

FeedForwardPlanner::FeedForwardPlanner(EulerTarget target, int m_protect, std::size_t chain_length)
    : target_(target), m_(m_protect), length_(chain_length), outcomes_(chain_length, -1) {
    if (m_protect < 1) throw InvalidArgument("m_protect must be >= 1");
    if (chain_length < 2) throw InvalidArgument("chain needs at least two sites");
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(target[i])) throw InvalidArgument("Euler angles must be finite");
}

int FeedForwardPlanner::x_parity(std::size_t site, std::size_t known_below, bool &fully_known) const {
    // x_q = m_{q-1} xor m_{q-3} xor ...
    int x = 0;
    fully_known = true;
    for (long k = long(site) - 1; k >= 0; k -= 2) {
        if (std::size_t(k) < known_below) {
            x ^= outcomes_[std::size_t(k)];
        } else {
            fully_known = false;
        }
    }
    return x;
}

void FeedForwardPlanner::resolve(std::size_t known_below) {
    bool known = false;
    const int x = x_parity(*pending_, known_below, known);
    if (!known) throw InternalError("resolving a slot with unknown sign");
    acc_ += (x ? -1 : 1) * requested_;
    pending_.reset();
    if (acc_ == 1) {
        depth_[euler_] = attempt_;
        ++euler_;
        acc_ = 0;
        attempt_ = 0;
    } else {
        ++attempt_;
    }
}

SlotRole FeedForwardPlanner::fix(std::size_t q) {
    if (q != roles_.size()) throw InternalError("sites must be fixed in order");
    if (q + 1 >= length_) throw InternalError("the output site is never fixed");
    const std::size_t known_below = q >= std::size_t(m_) ? q - m_ : 0;
    for (std::size_t j = 0; j < known_below; ++j)
        if (outcomes_[j] < 0) throw InternalError("fixing a site before the outcomes it depends on");

    if (euler_ < 3 && pending_) {
        bool known = false;
        x_parity(*pending_, known_below, known);
        if (known) resolve(known_below);
    }

    SlotRole role;
    const bool place_slot = [&] {
        if (euler_ >= 3 || pending_) return false;
        const bool correction = acc_ != 0;
        return (buffers_since_slot_ % 2 == 1) == correction;
    }();
    if (!place_slot) {
        ++buffers_since_slot_;
        roles_.push_back(role);
        return role;
    }
    const bool correction = acc_ != 0;
    bool known = false;
    const int x = x_parity(q, known_below, known);
    requested_ = (x ? -1 : 1) * (1 - acc_);
    role.kind = correction ? SlotRole::Kind::correction : SlotRole::Kind::euler;
    role.euler_index = euler_;
    role.attempt = attempt_;
    role.beta = requested_ * target_[euler_];
    if (!known) uncertain_[euler_] = true;
    if (correction) ++inserted_;
    pending_ = q;
    last_slot_ = q;
    buffers_since_slot_ = 0;
    roles_.push_back(role);
    return role;
}

void FeedForwardPlanner::record(std::size_t site, int outcome) {
    if (site + 1 >= length_) throw InvalidArgument("the output site is not measured");
    if (outcome != 0 && outcome != 1) throw InvalidArgument("outcome must be 0 or 1");
    outcomes_[site] = outcome;
}

FeedForwardPlanner::Summary FeedForwardPlanner::finish() {
    const std::size_t out = length_ - 1;
    for (std::size_t j = 0; j < out; ++j)
        if (outcomes_[j] < 0) throw InternalError("finish called before every site was measured");
    if (euler_ < 3 && pending_) resolve(out);
    if (euler_ < 3) {
        throw ChainExhausted("chain of " + std::to_string(length_) + " sites exhausted on Euler angle " +
                                 std::to_string(euler_ + 1) + " after " + std::to_string(attempt_) +
                                 " failed attempts",
                             attempt_);
    }
    Summary s;
    s.complete = true;
    bool known = false;
    s.x = x_parity(out, out, known);
    s.z = x_parity(out - 1, out, known);
    s.last_slot = *last_slot_;
    s.trailing_hadamards = int(out - 1 - *last_slot_);
    s.depth = depth_;
    s.uncertain = uncertain_;
    s.inserted = inserted_;
    return s;
}

// ---------------------------------------------------------------------------

Controller1D::Controller1D(EulerTarget target, Protocol1DConfig config)
    : target_(target), config_(config), planner_(target, config.m_protect, config.chain_length) {
    config_.validate();
    const std::size_t L = config_.chain_length;
    for (std::size_t i = 0; i < L; ++i) positions_.push_back({double(i), 0.0});
    ledger_.assign(L, 0.0);
    since_reset_.assign(L, 0.0);
    last_value_.assign(L, -1);
    target_net_.assign(L, std::numeric_limits<double>::quiet_NaN());
}

std::vector<std::size_t> Controller1D::beam_window(std::size_t target) const {
    const double center = double(target) - config_.offset_n;
    const double s = config_.s_peak();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < target; ++i)
        if (probability_from_peak(s, std::abs(double(i) - center), config_.r) >= kProjectionThreshold) out.push_back(i);
    return out;
}

Preparation Controller1D::prepare(std::size_t t) {
    if (open_) throw InternalError("previous measurement not recorded");
    if (t != transcript_.size()) throw InvalidArgument("targets must be measured left to right");
    const std::size_t out = config_.chain_length - 1;
    if (t >= out) throw InvalidArgument("the output site is not measured");

    const std::size_t upto = std::min(t + std::size_t(config_.m_protect), out - 1);
    while (fixed_upto_ <= upto) {
        target_net_[fixed_upto_] = planner_.fix(fixed_upto_).physical_angle();
        ++fixed_upto_;
    }

    Preparation prep;
    prep.target = t;
    std::vector<double> phi;
    for (std::size_t i : beam_window(t)) {
        prep.window.push_back(i);
        phi.push_back(wrap_angle(kPi * (1 - last_value_[i]) - since_reset_[i]));
    }
    for (std::size_t q = t; q <= upto; ++q) {
        prep.window.push_back(q);
        phi.push_back(target_net_[q] - ledger_[q]);
    }
    std::vector<Point> pts;
    for (std::size_t i : prep.window) pts.push_back(positions_[i]);
    const auto system = build_crosstalk(pts, config_.r);
    std::vector<double> theta;
    try {
        theta = solve_angles(system, phi);
    } catch (const IllConditioned &e) {
        throw IllConditioned(std::string(e.what()) + " (window of " + std::to_string(pts.size()) + " sites)");
    }
    for (std::size_t k = 0; k < pts.size(); ++k) prep.pulses.push_back({pts[k], theta[k]});

    const auto net = replay_pulses(positions_, pts, theta, config_.r);
    for (std::size_t i = 0; i < net.size(); ++i) {
        ledger_[i] += net[i];
        since_reset_[i] += net[i];
    }
    for (const auto &p : prep.pulses)
        for (const auto &x : positions_)
            if (std::abs(rotation_angle_at(std::sqrt(distance_squared(x, p.center)), config_.r, p.peak_angle)) >=
                kRotationCutoff)
                ++prep.ledger_entries_touched;

    prep.beam_center = {double(t) - config_.offset_n, 0.0};
    prep.s_peak = config_.s_peak();
    issued_.insert(issued_.end(), prep.pulses.begin(), prep.pulses.end());
    open_ = prep;
    return prep;
}

void Controller1D::record(int outcome) {
    if (!open_) throw InternalError("no measurement in progress");
    if (outcome != 0 && outcome != 1) throw InvalidArgument("outcome must be 0 or 1");
    const std::size_t t = open_->target;
    for (std::size_t i : open_->window) {
        if (i >= t) break;
        last_value_[i] = 1;
        since_reset_[i] = 0.0;
    }
    last_value_[t] = outcome;
    since_reset_[t] = 0.0;
    planner_.record(t, outcome);

    TranscriptEntry e;
    e.target = t;
    e.outcome = outcome;
    e.pulses = open_->pulses;
    const auto &roles = planner_.roles();
    const auto kind = roles[t].kind;
    e.inserted_pair = kind == SlotRole::Kind::correction ||
                      (kind == SlotRole::Kind::buffer && t + 1 < roles.size() &&
                       roles[t + 1].kind == SlotRole::Kind::correction);
    transcript_.push_back(std::move(e));
    open_.reset();
}

Eigen::Vector2cd Controller1D::correct_output(const Eigen::Vector2cd &physical,
                                              const FeedForwardPlanner::Summary &s) const {
    const double out_angle = ledger_.back();
    Eigen::Vector2cd v = make_rotation(Axis::Y, kPi / 2).adjoint() * make_rotation(Axis::X, -out_angle) * physical;
    if (s.x) v = gates::pauli_x() * v;
    if (s.z) v = gates::pauli_z() * v;
    if (s.trailing_hadamards % 2) v = gates::hadamard() * v;
    return v;
}

// ---------------------------------------------------------------------------

World1D::World1D(const Eigen::Vector2cd &input, const Protocol1DConfig &config)
    : config_(config),
      world_(
          [&] {
              std::vector<Point> p;
              for (std::size_t i = 0; i < config.chain_length; ++i) p.push_back({double(i), 0.0});
              return p;
          }(),
          [&] {
              std::vector<std::pair<std::size_t, std::size_t>> e;
              for (std::size_t i = 0; i + 1 < config.chain_length; ++i) e.emplace_back(i, i + 1);
              return e;
          }(),
          {{0, input}}),
      measured_(config.chain_length, false) {
    config_.validate();
    world_.apply_all(make_rotation(Axis::Y, kPi / 2));
}

void World1D::apply(std::span<const Pulse> pulses) {
    for (const auto &p : pulses) world_.apply_pulse(p.center, p.peak_angle, config_.r);
}

BeamResult World1D::execute_beam(std::size_t target, Point center, double s_peak, TrialRng &rng) {
    struct Hit {
        std::size_t site;
        double p;
        double d;
    };
    const std::size_t out = config_.chain_length - 1;
    const int reach = config_.reach > 0 ? config_.reach : config_.m_protect;
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < out; ++i) {
        const double d = std::abs(double(i) - center.x);
        double p = 0.0;
        if (i == target || measured_[i]) {
            p = probability_from_peak(s_peak, d, config_.r);
        } else if (i > target) {
            if (config_.pf_model == PfModel::exact) {
                p = probability_from_peak(s_peak, d, config_.r);
            } else if (i - target <= std::size_t(reach)) {
                p = config_.p_f;
            }
        }
        if (i == target || p >= kProjectionThreshold) hits.push_back({i, p, d});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit &a, const Hit &b) { return a.d < b.d; });

    BeamResult result;
    result.target_projected = false;
    for (const auto &h : hits) {
        if (!(rng.uniform() < h.p)) continue;
        const int m = world_.project(h.site, rng.uniform());
        if (h.site == target) {
            result.target_projected = true;
            result.outcome = m;
        } else if (measured_[h.site]) {
            if (m == 0) ++result.stray_fluorescence;
        } else {
            hidden_.push_back({h.site, m, target});
        }
    }
    if (result.target_projected) measured_[target] = true;
    return result;
}

Eigen::Vector2cd World1D::output_state() {
    const std::size_t out = config_.chain_length - 1;
    const auto sv = world_.readout(std::span<const std::size_t>(&out, 1));
    return sv.to_eigen();
}

// ---------------------------------------------------------------------------

TrialResult run_trial_1d(const Eigen::Vector2cd &input, const EulerTarget &target, const Protocol1DConfig &config,
                         TrialRng &rng) {
    config.validate();
    Controller1D ctl(target, config);
    World1D world(input, config);
    TrialResult res;
    const std::size_t out = config.chain_length - 1;
    for (std::size_t t = 0; t < out; ++t) {
        const auto prep = ctl.prepare(t);
        res.ledger_entries_touched += prep.ledger_entries_touched;
        res.max_window = std::max(res.max_window, prep.window.size());
        world.apply(prep.pulses);
        const auto beam = world.execute_beam(t, prep.beam_center, prep.s_peak, rng);
        res.stray_fluorescence += beam.stray_fluorescence;
        if (!beam.target_projected) {
            res.target_miss = true;
            break;
        }
        ctl.record(beam.outcome);
        res.outcomes.push_back(beam.outcome);
    }
    res.hidden_events = world.hidden_events();
    res.transcript = ctl.transcript();
    for (const auto &h : res.hidden_events)
        if (h.site > h.step + std::size_t(config.m_protect)) res.unprotected_hit = true;
    res.inserted_pairs = 0;
    for (const auto &role : ctl.planner().roles())
        if (role.kind == SlotRole::Kind::correction) ++res.inserted_pairs;
    if (res.target_miss) return res;

    FeedForwardPlanner::Summary summary;
    try {
        summary = ctl.finish();
    } catch (const ChainExhausted &e) {
        res.chain_exhausted = true;
        res.correction_depth = ctl.planner().resolved_depths();
        res.exhausted_attempts = e.correction_depth;
        res.qubits_used = config.chain_length;
        return res;
    }
    res.completed = true;
    res.byproduct_x = summary.x;
    res.byproduct_z = summary.z;
    res.correction_depth = summary.depth;
    res.depth_uncertain = summary.uncertain;
    res.qubits_used = std::min(config.chain_length, summary.last_slot + config.m_protect + 1);
    const Eigen::Vector2cd corrected = ctl.correct_output(world.output_state(), summary);
    const Eigen::Vector2cd ideal = target.unitary() * input.normalized();
    res.fidelity = fidelity(Eigen::VectorXcd(corrected), Eigen::VectorXcd(ideal));
    return res;
}

TrialResult run_single_qubit_unitary(const Eigen::Vector2cd &input, const EulerTarget &target,
                                     const Protocol1DConfig &config, TrialRng &rng) {
    auto res = run_trial_1d(input, target, config, rng);
    if (res.chain_exhausted) {
        throw ChainExhausted("chain of " + std::to_string(config.chain_length) + " sites exhausted",
                             res.exhausted_attempts);
    }
    return res;
}

double correction_angle(int k, double alpha) {
    if (k < 0) throw InvalidArgument("correction attempt index must be >= 0");
    if (k > 60) throw InvalidArgument("correction attempt index too large");
    return std::ldexp(k % 2 ? -alpha : alpha, k) + kPi;
}

std::vector<double> buffer_schedule(int m_protect, const EulerTarget &target) {
    if (m_protect < 1) throw InvalidArgument("m_protect must be >= 1");
    const std::size_t length = std::size_t(3 * m_protect + 8);
    FeedForwardPlanner planner(target, m_protect, length);
    for (std::size_t q = 0; q + 1 < length; ++q) {
        if (q >= std::size_t(m_protect)) planner.record(q - m_protect, 0);
        const auto role = planner.fix(q);
        (void)role;
        std::size_t last = 0;
        int placed = 0;
        for (std::size_t i = 0; i < planner.roles().size(); ++i) {
            if (planner.roles()[i].kind != SlotRole::Kind::buffer) {
                last = i;
                ++placed;
            }
        }
        // Done once the third slot exists and its sign has been resolved.
        if (placed == 3 && q == last + m_protect) {
            std::vector<double> out;
            for (std::size_t i = 0; i < q; ++i) out.push_back(planner.roles()[i].physical_angle());
            out.push_back(kPi);
            return out;
        }
    }
    throw InternalError("buffer schedule did not converge");
}

int correction_attempts_for(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    const double bound = std::log2(1.0 / epsilon) - 1.0;
    return int(std::floor(bound)) + 1;
}

std::size_t chain_length(int m_protect, double epsilon) {
    if (m_protect < 1) throw InvalidArgument("m_protect must be >= 1");
    const int l = correction_attempts_for(epsilon);
    if (m_protect % 2 == 0) return std::size_t(3 * (l * m_protect + 1));
    return std::size_t(3 * (l * (m_protect + 1) + 1));
}

namespace {

Eigen::Vector2cd teleported_branch(const Eigen::Vector2cd &psi, std::span<const double> betas,
                                   std::span<const int> outcomes, std::size_t measured) {
    std::vector<Eigen::Vector2cd> init(measured + 1, Eigen::Vector2cd{1.0, 1.0});
    init[0] = psi;
    StateVector sv = StateVector::product(init);
    for (std::size_t i = 0; i < measured; ++i) sv.apply_cz(i, i + 1);
    for (std::size_t i = 0; i < measured; ++i) {
        sv.apply(i, make_rotation(Axis::Y, kPi / 2));
        sv.apply(i, make_rotation(Axis::X, betas[i] + kPi));
        sv.project(i, outcomes[i]);
    }
    const std::size_t keep = measured;
    return extract_subsystem(sv, std::span<const std::size_t>(&keep, 1));
}

}  // namespace

DensityMatrix logical_mixture(const Eigen::Vector2cd &psi, std::span<const double> betas,
                              std::span<const int> outcomes, std::size_t steps, double p) {
    if (steps + 2 > 6) throw CapacityError("logical_mixture enumerates chains of at most 6 sites");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0, 1]");
    if (betas.size() < steps + 1 || outcomes.size() < steps + 1)
        throw InvalidArgument("need an angle and an outcome for every measured site and the next one");
    std::vector<Branch> branches;
    branches.push_back({1.0 - p, teleported_branch(psi, betas, outcomes, steps)});
    if (p > 0.0) branches.push_back({p, teleported_branch(psi, betas, outcomes, steps + 1)});
    return mix(branches);
}

}  // namespace wbqc
