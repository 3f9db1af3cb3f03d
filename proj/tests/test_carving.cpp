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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_util.hpp"
#include "wbqc/carving.hpp"
#include "wbqc/errors.hpp"

using namespace wbqc;
using namespace wbqc::testing;

namespace {

// L-shaped example: sites 1, 2 in the top row, site 3 below site 1.
LatticeGeometry three_site() { return LatticeGeometry({{0, 0}, {1, 0}, {0, 1}}); }

std::pair<LatticeGeometry, ClusterSpec> random_patch(std::mt19937_64 &rng, int max_sites) {
    std::uniform_int_distribution<int> dim(1, 4);
    int w, h;
    do {
        w = dim(rng);
        h = dim(rng);
    } while (w * h > max_sites);
    auto g = LatticeGeometry::rectangle(w, h);
    ClusterSpec spec;
    std::bernoulli_distribution coin(0.6);
    for (std::size_t i = 0; i < g.size(); ++i) spec.keep.push_back(coin(rng));
    return {g, spec};
}

}  // namespace

TEST_CASE("geometry adjacency") {
    const auto g = LatticeGeometry::rectangle(3, 2);
    CHECK(g.edges().size() == 7);
    for (const auto &[a, b] : g.edges()) {
        CHECK(a < b);
        CHECK(distance_squared(g.site(a).point(), g.site(b).point()) == 1.0);
    }
    CHECK_THROWS_AS(LatticeGeometry({{0, 0}, {0, 0}}), InvalidArgument);
}

TEST_CASE("parse_grid") {
    auto [g, spec] = parse_grid("##.\n#..\n");
    CHECK(g.size() == 6);
    CHECK(spec.kept() == 3);
    CHECK(g.site(3) == Site{0, 1});
    CHECK(spec.keep[3]);
    CHECK_THROWS_AS(parse_grid("#x#"), InvalidArgument);
    CHECK_THROWS_AS(parse_grid("\n\n"), InvalidArgument);
}

TEST_CASE("plan_carve examples") {
    const auto g = three_site();
    for (double r : {1.0, 2.0, 4.0}) {
        const auto all = plan_carve(g, ClusterSpec::keep_all(3), r);
        for (const auto &p : all.pulses) CHECK(p.theta == 0.0);

        const auto plan = plan_carve(g, ClusterSpec{{true, true, false}}, r);
        const double e1 = std::exp(-1 / (r * r)), e2 = std::exp(-2 / (r * r));
        CHECK(std::abs(plan.pulses[0].theta - kPi / 2 * e1 / (1 - e2)) < 1e-12);
        CHECK(std::abs(plan.pulses[1].theta) < 1e-12);
        CHECK(std::abs(plan.pulses[2].theta + kPi / 2 / (1 - e2)) < 1e-12);
    }
    std::mt19937_64 rng(2);
    auto g44 = LatticeGeometry::rectangle(4, 4);
    ClusterSpec spec;
    for (int i = 0; i < 16; ++i) spec.keep.push_back(rng() & 1);
    const auto plan = plan_carve(g44, spec, 2.0);
    const auto net = replay_carve(plan, g44);
    for (std::size_t i = 0; i < net.size(); ++i) CHECK(std::abs(net[i] - plan.target_net[i]) < 1e-9);
}

TEST_CASE("apply_carve and entangle on the three-site example") {
    const auto g = three_site();
    const ClusterSpec spec{{true, true, false}};
    const auto carved = apply_carve(plan_carve(g, spec, 2.0), g);
    std::vector<Eigen::Vector2cd> expect{Eigen::Vector2cd{1, 1}, Eigen::Vector2cd{1, 1}, Eigen::Vector2cd{1, 0}};
    CHECK(fidelity(carved, StateVector::product(expect)) >= 1 - 1e-10);

    const auto cluster = entangle(carved, g);
    // (|00> + |01> + |10> - |11>)/2 on sites 1, 2 and |0> on site 3.
    std::vector<Complex> ideal(8, 0.0);
    ideal[0b000] = 0.5;
    ideal[0b010] = 0.5;
    ideal[0b100] = 0.5;
    ideal[0b110] = -0.5;
    CHECK(fidelity(cluster, StateVector::from_amplitudes(ideal)) >= 1 - 1e-9);

    const auto report = verify_cluster(cluster, spec, g);
    CHECK(report.stabilizer_violations == 0);
    CHECK(report.drop_violations == 0);
}

TEST_CASE("carving edge cases") {
    const auto g = LatticeGeometry::rectangle(3, 2);
    const auto all = apply_carve(plan_carve(g, ClusterSpec::keep_all(6), 1.5), g);
    std::vector<Eigen::Vector2cd> plus(6, Eigen::Vector2cd{1, 1});
    CHECK(fidelity(all, StateVector::product(plus)) >= 1 - 1e-10);

    // Middle of the top row dropped.
    ClusterSpec spec{{true, false, true, true, true, true}};
    const auto carved = apply_carve(plan_carve(g, spec, 1.5), g);
    std::vector<Eigen::Vector2cd> expect = plus;
    expect[1] = Eigen::Vector2cd{1, 0};
    CHECK(fidelity(carved, StateVector::product(expect)) >= 1 - 1e-10);

    const StateVector zeros(6);
    CHECK(fidelity(entangle(zeros, g), zeros) == doctest::Approx(1.0));

    CHECK_THROWS_AS(apply_carve(plan_carve(LatticeGeometry::chain(21), ClusterSpec::keep_all(21), 1.0),
                                LatticeGeometry::chain(21)),
                    CapacityError);
}

TEST_CASE("linear cluster stabilizers and violation detection") {
    const auto g = LatticeGeometry::chain(4);
    const auto spec = ClusterSpec::keep_all(4);
    auto state = entangle(apply_carve(plan_carve(g, spec, 1.5), g), g);
    const auto report = verify_cluster(state, spec, g);
    CHECK(report.stabilizer_violations == 0);
    for (double e : report.stabilizer_expectations) CHECK(e == doctest::Approx(1.0));
    state.project(2, 0);
    CHECK(verify_cluster(state, spec, g).stabilizer_violations > 0);
}

TEST_CASE("end-to-end carving on random patches") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> rad(1.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        auto [g, spec] = random_patch(rng, 12);
        const double r = rad(rng);
        const auto plan = plan_carve(g, spec, r);
        const auto state = entangle(apply_carve(plan, g), g);
        const auto report = verify_cluster(state, spec, g);
        CHECK(report.fidelity >= 1 - 1e-9);
        CHECK(report.stabilizer_violations == 0);
        CHECK(report.drop_violations == 0);

        std::vector<std::size_t> order(plan.pulses.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        const auto permuted = entangle(apply_carve(plan, g, &order), g);
        CHECK(std::abs(fidelity(permuted, state) - 1.0) <= 1e-10);
    }
}

TEST_CASE("carving fidelity does not depend on the beam radius") {
    const auto g = LatticeGeometry::rectangle(3, 2);
    const ClusterSpec spec{{true, true, false, false, true, true}};
    for (double r : {0.5, 1.0, 2.5, 5.0, 10.0}) {
        const auto plan = plan_carve(g, spec, r);
        const auto report = verify_cluster(entangle(apply_carve(plan, g), g), spec, g);
        CHECK(report.fidelity >= 1 - 1e-9);
    }
}
