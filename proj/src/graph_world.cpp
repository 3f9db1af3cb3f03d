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

#include "wbqc/graph_world.hpp"

#include <algorithm>
#include <cmath>

#include "wbqc/errors.hpp"

namespace wbqc {

GraphWorld::GraphWorld(std::vector<Point> positions, std::vector<std::pair<std::size_t, std::size_t>> edges,
                       std::vector<std::pair<std::size_t, Eigen::Vector2cd>> inputs)
    : positions_(std::move(positions)), neighbors_(positions_.size()), sites_(positions_.size()) {
    for (auto &s : sites_) s.input /= std::sqrt(2.0);
    for (const auto &[a, b] : edges) {
        if (a >= size() || b >= size() || a == b) throw InvalidArgument("graph edge out of range");
        neighbors_[a].push_back(b);
        neighbors_[b].push_back(a);
    }
    for (const auto &[site, state] : inputs) {
        if (site >= size()) throw InvalidArgument("input site out of range");
        if (state.norm() == 0.0) throw InvalidArgument("input state must be nonzero");
        sites_[site].input = state.normalized();
    }
}

std::size_t GraphWorld::qubit_of(std::size_t site) const {
    const auto it = std::find(live_.begin(), live_.end(), site);
    if (it == live_.end()) throw InternalError("site is not in the state vector");
    return std::size_t(it - live_.begin());
}

void GraphWorld::apply_to_qubit(std::size_t qubit, const Gate &g) {
    const std::size_t mask = std::size_t{1} << (live_.size() - 1 - qubit);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if (i & mask) continue;
        const Complex a0 = amplitudes_[i], a1 = amplitudes_[i | mask];
        amplitudes_[i] = g(0, 0) * a0 + g(0, 1) * a1;
        amplitudes_[i | mask] = g(1, 0) * a0 + g(1, 1) * a1;
    }
}

void GraphWorld::attach(std::size_t site) {
    auto &s = sites_[site];
    if (s.status != Status::pending) return;
    if (live_.size() >= kMaxQubits) throw CapacityError("graph world exceeded " + std::to_string(kMaxQubits) + " live qubits");
    std::vector<Complex> next(amplitudes_.size() * 2);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        next[2 * i] = amplitudes_[i] * s.input(0);
        next[2 * i + 1] = amplitudes_[i] * s.input(1);
    }
    amplitudes_ = std::move(next);
    live_.push_back(site);
    s.status = Status::attached;
    for (std::size_t nb : neighbors_[site]) {
        const auto &other = sites_[nb];
        if (other.status == Status::detached) throw InternalError("neighbour projected before its CZ partner was attached");
        if (other.status != Status::attached) continue;
        const std::size_t ma = std::size_t{1} << (live_.size() - 1 - qubit_of(nb));
        for (std::size_t i = 0; i < amplitudes_.size(); ++i)
            if ((i & 1) && (i & ma)) amplitudes_[i] = -amplitudes_[i];
    }
}

void GraphWorld::apply_local(std::size_t site, const Gate &gate) {
    auto &s = sites_.at(site);
    if (s.status == Status::detached) {
        s.detached_state = gate * s.detached_state;
    } else {
        s.local = gate * s.local;
    }
}

void GraphWorld::apply_all(const Gate &gate) {
    for (std::size_t i = 0; i < size(); ++i) apply_local(i, gate);
}

void GraphWorld::apply_pulse(Point center, double peak_angle, double r) {
    for (std::size_t i = 0; i < size(); ++i) {
        const double a = rotation_angle_at(std::sqrt(distance_squared(positions_[i], center)), r, peak_angle);
        if (std::abs(a) >= kRotationCutoff) apply_local(i, make_rotation(Axis::X, a));
    }
}

double GraphWorld::detached_probability_zero(std::size_t site) const {
    const auto &s = sites_.at(site);
    if (s.status != Status::detached) throw InvalidArgument("site has not been projected");
    return std::norm(s.detached_state(0)) / s.detached_state.squaredNorm();
}

int GraphWorld::project(std::size_t site, double draw) {
    auto &s = sites_.at(site);
    if (s.status == Status::detached) {
        const int outcome = draw < detached_probability_zero(site) ? 0 : 1;
        s.detached_state = outcome == 0 ? Eigen::Vector2cd{1.0, 0.0} : Eigen::Vector2cd{0.0, 1.0};
        return outcome;
    }
    attach(site);
    for (std::size_t nb : neighbors_[site]) attach(nb);
    const std::size_t q = qubit_of(site);
    apply_to_qubit(q, s.local);
    s.local = Gate::Identity();

    const std::size_t shift = live_.size() - 1 - q;
    const std::size_t mask = std::size_t{1} << shift;
    double p0 = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i)
        if (!(i & mask)) p0 += std::norm(amplitudes_[i]);
    const int outcome = draw < p0 ? 0 : 1;
    const double pm = outcome == 0 ? p0 : 1.0 - p0;
    if (!(pm > 0.0)) throw ZeroProbabilityBranch("projection onto a zero-probability outcome");

    std::vector<Complex> next(amplitudes_.size() / 2);
    const double scale = 1.0 / std::sqrt(pm);
    const std::size_t low = mask - 1;
    for (std::size_t j = 0; j < next.size(); ++j) {
        const std::size_t i = ((j & ~low) << 1) | (outcome ? mask : 0) | (j & low);
        next[j] = amplitudes_[i] * scale;
    }
    amplitudes_ = std::move(next);
    live_.erase(live_.begin() + std::ptrdiff_t(q));
    s.status = Status::detached;
    s.detached_state = outcome == 0 ? Eigen::Vector2cd{1.0, 0.0} : Eigen::Vector2cd{0.0, 1.0};
    return outcome;
}

StateVector GraphWorld::readout(std::span<const std::size_t> sites) {
    for (std::size_t site : sites) {
        if (sites_.at(site).status == Status::detached) throw InvalidArgument("readout of a projected site");
        attach(site);
    }
    if (live_.size() != sites.size()) throw InvalidArgument("readout requires every other site to be projected");
    for (std::size_t site : sites) {
        apply_to_qubit(qubit_of(site), sites_[site].local);
        sites_[site].local = Gate::Identity();
    }
    // Permute into the requested order.
    const std::size_t n = sites.size();
    std::vector<std::size_t> from(n);
    for (std::size_t k = 0; k < n; ++k) from[k] = qubit_of(sites[k]);
    std::vector<Complex> out(amplitudes_.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        std::size_t i = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (j & (std::size_t{1} << (n - 1 - k))) i |= std::size_t{1} << (n - 1 - from[k]);
        out[j] = amplitudes_[i];
    }
    return StateVector::from_amplitudes(std::move(out));
}

}  // namespace wbqc
