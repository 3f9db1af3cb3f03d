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

// Cluster-state carving: put every site in |+>, use one Gaussian R_y pulse per
// site to return unwanted sites to |0>, then entangle nearest neighbours.
// Sites in |0> are left untouched by CZ, so they drop out of the cluster.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wbqc/beam.hpp"
#include "wbqc/quantum.hpp"

namespace wbqc {

struct Site {
    int x = 0;
    int y = 0;

    friend bool operator==(const Site &, const Site &) = default;
    friend auto operator<=>(const Site &, const Site &) = default;

    Point point() const { return {double(x), double(y)}; }
};

/// Integer lattice sites with their unit-distance adjacency.
class LatticeGeometry {
   public:
    LatticeGeometry() = default;
    /// Throws InvalidArgument on duplicate sites.
    explicit LatticeGeometry(std::vector<Site> sites);

    /// Straight chain (0,0) .. (length-1, 0).
    static LatticeGeometry chain(int length);
    /// width x height block, row-major from (0,0).
    static LatticeGeometry rectangle(int width, int height);

    std::size_t size() const { return sites_.size(); }
    const std::vector<Site> &sites() const { return sites_; }
    const Site &site(std::size_t i) const { return sites_.at(i); }
    std::vector<Point> points() const;
    /// Unit-distance pairs (i < j).
    const std::vector<std::pair<std::size_t, std::size_t>> &edges() const { return edges_; }
    const std::vector<std::size_t> &neighbors(std::size_t i) const { return neighbors_.at(i); }
    std::optional<std::size_t> index_of(Site s) const;

   private:
    std::vector<Site> sites_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::vector<std::size_t>> neighbors_;
};

/// Which sites belong to the computational cluster.
struct ClusterSpec {
    std::vector<bool> keep;

    static ClusterSpec keep_all(std::size_t n) { return {std::vector<bool>(n, true)}; }
    std::size_t kept() const;
};

/// Grid text: one row per line, '#' keeps a site, '.' drops it; any other
/// non-space character is rejected. Row k has y = k, column c has x = c.
std::pair<LatticeGeometry, ClusterSpec> parse_grid(std::string_view text);

struct CarvePulse {
    std::size_t center = 0;  ///< site index
    double theta = 0.0;      ///< peak R_y angle
};

struct CarvePlan {
    std::vector<CarvePulse> pulses;
    std::vector<double> target_net;
    double r = 0.0;
    double condition_number = 0.0;
};

/// Net R_y target 0 for kept sites and -pi/2 for dropped ones, one pulse per site.
CarvePlan plan_carve(const LatticeGeometry &geometry, const ClusterSpec &spec, double r);

/// Net R_y rotation each site receives from the plan's pulses.
std::vector<double> replay_carve(const CarvePlan &plan, const LatticeGeometry &geometry);

/// |0..0> -> global R_y(pi/2) -> every pulse with its Gaussian falloff.
/// `order`, when given, is a permutation of pulse indices.
StateVector apply_carve(const CarvePlan &plan, const LatticeGeometry &geometry,
                        const std::vector<std::size_t> *order = nullptr);

/// CZ on every adjacency edge.
StateVector entangle(StateVector state, const LatticeGeometry &geometry);

/// Ideal computational cluster: kept sites form a graph state on the kept
/// edges, dropped sites sit in |0>.
StateVector ideal_cluster(const LatticeGeometry &geometry, const ClusterSpec &spec);

struct ClusterReport {
    double fidelity = 0.0;
    std::size_t stabilizer_violations = 0;
    std::size_t drop_violations = 0;
    std::vector<double> stabilizer_expectations;  ///< one per kept site, in site order
};

/// Checks <X_i prod_{j in N(i), kept} Z_j> = +1 for every kept site and
/// P(|0>) = 1 for every dropped site, within `tol`.
ClusterReport verify_cluster(const StateVector &state, const ClusterSpec &spec, const LatticeGeometry &geometry,
                             double tol = 1e-9);

}  // namespace wbqc
