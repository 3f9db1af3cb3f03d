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

#include "wbqc/carving.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "wbqc/errors.hpp"

namespace wbqc {

LatticeGeometry::LatticeGeometry(std::vector<Site> sites) : sites_(std::move(sites)) {
    std::map<Site, std::size_t> index;
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        if (!index.emplace(sites_[i], i).second) {
            std::ostringstream msg;
            msg << "duplicate lattice site (" << sites_[i].x << ", " << sites_[i].y << ")";
            throw InvalidArgument(msg.str());
        }
    }
    neighbors_.assign(sites_.size(), {});
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        for (Site d : {Site{1, 0}, Site{0, 1}}) {
            auto it = index.find({sites_[i].x + d.x, sites_[i].y + d.y});
            if (it == index.end()) continue;
            const std::size_t j = it->second;
            edges_.emplace_back(std::min(i, j), std::max(i, j));
            neighbors_[i].push_back(j);
            neighbors_[j].push_back(i);
        }
    }
    std::sort(edges_.begin(), edges_.end());
    for (auto &n : neighbors_) std::sort(n.begin(), n.end());
}

LatticeGeometry LatticeGeometry::chain(int length) {
    std::vector<Site> s;
    for (int i = 0; i < length; ++i) s.push_back({i, 0});
    return LatticeGeometry(std::move(s));
}

LatticeGeometry LatticeGeometry::rectangle(int width, int height) {
    std::vector<Site> s;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) s.push_back({x, y});
    }
    return LatticeGeometry(std::move(s));
}

std::vector<Point> LatticeGeometry::points() const {
    std::vector<Point> p;
    p.reserve(sites_.size());
    for (const auto &s : sites_) p.push_back(s.point());
    return p;
}

std::optional<std::size_t> LatticeGeometry::index_of(Site s) const {
    auto it = std::find(sites_.begin(), sites_.end(), s);
    if (it == sites_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - sites_.begin());
}

std::size_t ClusterSpec::kept() const { return static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true)); }

std::pair<LatticeGeometry, ClusterSpec> parse_grid(std::string_view text) {
    std::vector<Site> sites;
    ClusterSpec spec;
    int y = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        bool any = false;
        for (std::size_t x = 0; x < line.size(); ++x) {
            const char c = line[x];
            if (c == '#' || c == '.') {
                sites.push_back({static_cast<int>(x), y});
                spec.keep.push_back(c == '#');
                any = true;
            } else if (c != ' ' && c != '\t') {
                throw InvalidArgument(std::string("unexpected character '") + c + "' in grid on row " +
                                      std::to_string(y));
            }
        }
        if (any || end < text.size()) ++y;
        pos = end + 1;
    }
    if (sites.empty()) throw InvalidArgument("grid contains no sites");
    return {LatticeGeometry(std::move(sites)), std::move(spec)};
}

CarvePlan plan_carve(const LatticeGeometry &geometry, const ClusterSpec &spec, double r) {
    if (spec.keep.size() != geometry.size()) throw InvalidArgument("cluster spec does not match geometry");
    const auto points = geometry.points();
    const CrosstalkSystem sys = build_crosstalk(points, r);
    CarvePlan plan;
    plan.r = r;
    plan.condition_number = sys.condition_number;
    plan.target_net.resize(geometry.size());
    for (std::size_t i = 0; i < geometry.size(); ++i) plan.target_net[i] = spec.keep[i] ? 0.0 : -std::numbers::pi / 2;
    const auto theta = solve_angles(sys, plan.target_net);
    for (std::size_t i = 0; i < theta.size(); ++i) plan.pulses.push_back({i, theta[i]});
    return plan;
}

std::vector<double> replay_carve(const CarvePlan &plan, const LatticeGeometry &geometry) {
    const auto points = geometry.points();
    std::vector<Point> centers;
    std::vector<double> angles;
    for (const auto &p : plan.pulses) {
        centers.push_back(points.at(p.center));
        angles.push_back(p.theta);
    }
    return replay_pulses(points, centers, angles, plan.r);
}

StateVector apply_carve(const CarvePlan &plan, const LatticeGeometry &geometry, const std::vector<std::size_t> *order) {
    const std::size_t n = geometry.size();
    if (n > kMaxQubits) {
        throw CapacityError("carving simulation limited to " + std::to_string(kMaxQubits) + " sites, geometry has " +
                            std::to_string(n));
    }
    StateVector state(n);
    const Gate wide = make_rotation(Axis::Y, std::numbers::pi / 2);
    for (std::size_t q = 0; q < n; ++q) state.apply(q, wide);
    std::vector<std::size_t> seq(plan.pulses.size());
    for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = i;
    if (order) {
        if (order->size() != seq.size()) throw InvalidArgument("pulse order must be a permutation");
        seq = *order;
    }
    for (std::size_t k : seq) {
        const auto &pulse = plan.pulses.at(k);
        const Site c = geometry.site(pulse.center);
        for (std::size_t q = 0; q < n; ++q) {
            const double d = std::sqrt(distance_squared(geometry.site(q).point(), c.point()));
            const double angle = rotation_angle_at(d, plan.r, pulse.theta);
            if (std::abs(angle) >= kRotationCutoff) state.apply(q, make_rotation(Axis::Y, angle));
        }
    }
    return state;
}

StateVector entangle(StateVector state, const LatticeGeometry &geometry) {
    if (state.num_qubits() != geometry.size()) throw InvalidArgument("state does not match geometry");
    for (const auto &[a, b] : geometry.edges()) state.apply_cz(a, b);
    return state;
}

StateVector ideal_cluster(const LatticeGeometry &geometry, const ClusterSpec &spec) {
    std::vector<Eigen::Vector2cd> q;
    for (std::size_t i = 0; i < geometry.size(); ++i) {
        q.push_back(spec.keep.at(i) ? Eigen::Vector2cd{1, 1} : Eigen::Vector2cd{1, 0});
    }
    StateVector s = StateVector::product(q);
    for (const auto &[a, b] : geometry.edges()) {
        if (spec.keep[a] && spec.keep[b]) s.apply_cz(a, b);
    }
    return s;
}

ClusterReport verify_cluster(const StateVector &state, const ClusterSpec &spec, const LatticeGeometry &geometry,
                             double tol) {
    ClusterReport report;
    report.fidelity = fidelity(state, ideal_cluster(geometry, spec));
    for (std::size_t i = 0; i < geometry.size(); ++i) {
        if (!spec.keep[i]) {
            if (std::abs(state.probability_zero(i) - 1.0) > tol) ++report.drop_violations;
            continue;
        }
        std::vector<std::pair<std::size_t, Gate>> factors{{i, gates::pauli_x()}};
        for (std::size_t j : geometry.neighbors(i)) {
            if (spec.keep[j]) factors.emplace_back(j, gates::pauli_z());
        }
        const double e = state.expectation(factors).real();
        report.stabilizer_expectations.push_back(e);
        if (std::abs(e - 1.0) > tol) ++report.stabilizer_violations;
    }
    return report;
}

}  // namespace wbqc
