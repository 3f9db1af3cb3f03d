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

// Simulated physical register for graph-state protocols. Every operation
// after the initial CZ layer is a single-site unitary or a Z projection, so
// local unitaries are held back per site and a site is only brought into the
// state vector once one of its neighbours is about to be projected. The state
// vector therefore stays a few qubits wide for chain-like graphs.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "wbqc/beam.hpp"
#include "wbqc/quantum.hpp"

namespace wbqc {

class GraphWorld {
  public:
    /// Sites start in |+> unless listed in `inputs`; CZ acts on every edge.
    GraphWorld(std::vector<Point> positions, std::vector<std::pair<std::size_t, std::size_t>> edges,
               std::vector<std::pair<std::size_t, Eigen::Vector2cd>> inputs = {});

    std::size_t size() const { return positions_.size(); }
    const std::vector<Point> &positions() const { return positions_; }

    void apply_local(std::size_t site, const Gate &gate);
    void apply_all(const Gate &gate);

    /// Gaussian R_x pulse; contributions below kRotationCutoff are dropped.
    void apply_pulse(Point center, double peak_angle, double r);

    /// Z projection with outcome 0 iff draw < P(0).
    int project(std::size_t site, double draw);

    bool projected(std::size_t site) const { return sites_.at(site).status == Status::detached; }

    /// P(0) of a site that has already been projected and split off.
    double detached_probability_zero(std::size_t site) const;

    /// Joint state of `sites` in the given order, pending local unitaries
    /// applied. Every other site must already be projected.
    StateVector readout(std::span<const std::size_t> sites);

    /// Qubits currently held in the state vector.
    std::size_t live_qubits() const { return live_.size(); }

  private:
    enum class Status { pending, attached, detached };
    struct SiteState {
        Status status = Status::pending;
        Gate local = Gate::Identity();          ///< held-back unitary (pending/attached)
        Eigen::Vector2cd input{1.0, 1.0};       ///< initial state before CZ
        Eigen::Vector2cd detached_state{1.0, 0.0};
    };

    void attach(std::size_t site);
    std::size_t qubit_of(std::size_t site) const;
    void apply_to_qubit(std::size_t qubit, const Gate &gate);

    std::vector<Point> positions_;
    std::vector<std::vector<std::size_t>> neighbors_;
    std::vector<SiteState> sites_;
    std::vector<std::size_t> live_;      ///< qubit order, most significant first
    std::vector<Complex> amplitudes_{Complex{1.0, 0.0}};
};

}  // namespace wbqc
