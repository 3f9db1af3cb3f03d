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

#include <cmath>
#include <map>
#include <random>

#include "test_util.hpp"
#include "wbqc/carving.hpp"
#include "wbqc/errors.hpp"
#include "wbqc/graph_world.hpp"
#include "wbqc/protocol1d.hpp"

using namespace wbqc;
using namespace wbqc::testing;

namespace {

Gate rz(double a) { return make_rotation(Axis::Z, a); }
Gate rx(double a) { return make_rotation(Axis::X, a); }

Eigen::VectorXcd vec(const Eigen::Vector2cd &v) { return v; }

Eigen::Matrix2cd proj(const Eigen::Vector2cd &v) {
    const Eigen::Vector2cd u = v.normalized();
    return u * u.adjoint();
}

double max_diff(const DensityMatrix &rho, const Eigen::Matrix2cd &m) { return (rho.matrix() - m).cwiseAbs().maxCoeff(); }

EulerTarget random_target(std::mt19937_64 &rng) { return {random_angle(rng), random_angle(rng), random_angle(rng)}; }

}  // namespace

TEST_CASE("correction_angle") {
    const double a = 0.37;
    CHECK(correction_angle(1, a) == doctest::Approx(-2 * a + kPi).epsilon(1e-15));
    CHECK(correction_angle(2, a) == doctest::Approx(4 * a + kPi).epsilon(1e-15));
    CHECK(correction_angle(0, a) == doctest::Approx(a + kPi).epsilon(1e-15));
    CHECK_THROWS_AS(correction_angle(-1, a), InvalidArgument);

    // After k failures the applied angle is -(2^{k+1}-1) alpha; the next
    // success lands on +alpha. A failure flips the sign of the attempt.
    for (int k = 0; k <= 10; ++k) {
        double acc = 0.0;
        for (int j = 0; j <= k; ++j) {
            const double requested = correction_angle(j, a) - kPi;  // signed attempt
            const double magnitude = std::ldexp(a, j);
            const bool failure = j < k;
            // Each attempt lands on -2^j alpha when it fails and +2^j alpha when it succeeds.
            CHECK(std::abs(std::abs(requested) - magnitude) < 1e-12);
            acc += failure ? -magnitude : magnitude;
            if (failure) CHECK(std::abs(acc + (std::ldexp(a, j + 1) - a)) < 1e-9);
        }
        CHECK(std::abs(acc - a) < 1e-9);
    }
}

TEST_CASE("buffer_schedule patterns") {
    const EulerTarget t{0.3, -0.8, 1.1};
    const auto one = buffer_schedule(1, t);
    REQUIRE(one.size() == 4);
    CHECK(one[0] == doctest::Approx(t.alpha1 + kPi));
    CHECK(one[1] == doctest::Approx(t.alpha2 + kPi));
    CHECK(one[2] == doctest::Approx(t.alpha3 + kPi));
    CHECK(one[3] == doctest::Approx(kPi));

    const auto two = buffer_schedule(2, t);
    REQUIRE(two.size() == 7);
    const double expect[] = {t.alpha1 + kPi, t.alpha2 + kPi, kPi, kPi, t.alpha3 + kPi, kPi, kPi};
    for (int i = 0; i < 7; ++i) CHECK(two[i] == doctest::Approx(expect[i]));

    CHECK(buffer_schedule(3, t).size() > 7);
    CHECK_THROWS_AS(buffer_schedule(0, t), InvalidArgument);
}

TEST_CASE("pi-rotated buffers teleport a fixed Clifford for every outcome") {
    std::mt19937_64 rng(5);
    for (int b = 1; b <= 4; ++b) {
        const auto psi = random_qubit(rng);
        for (int mask = 0; mask < (1 << b); ++mask) {
            std::vector<double> betas(b, 0.0);
            std::vector<int> outs(b);
            for (int i = 0; i < b; ++i) outs[i] = (mask >> i) & 1;
            const auto rho = logical_mixture(psi, betas, std::vector<int>(outs.begin(), outs.end()), b - 1, 0.0);
            // Rebuild the frame by the teleport rule X^m H.
            Gate u = Gate::Identity();
            for (int i = 0; i < b; ++i) u = pow_gate(gates::pauli_x(), outs[i]) * gates::hadamard() * u;
            (void)rho;
            std::vector<int> all(outs);
            all.push_back(0);
            const auto full = logical_mixture(psi, std::vector<double>(b + 1, 0.0), all, b, 0.0);
            CHECK(fidelity(full, Eigen::VectorXcd(u * psi)) == doctest::Approx(1.0).epsilon(1e-12));
            // The Pauli part never changes the Clifford H^b.
            Gate frame = u * pow_gate(gates::hadamard(), b).adjoint();
            const bool pauli = equal_up_to_phase(frame, gates::identity(), 1e-12) ||
                               equal_up_to_phase(frame, gates::pauli_x(), 1e-12) ||
                               equal_up_to_phase(frame, gates::pauli_z(), 1e-12) ||
                               equal_up_to_phase(frame, gates::pauli_x() * gates::pauli_z(), 1e-12);
            CHECK(pauli);
        }
    }
}

TEST_CASE("chain_length") {
    CHECK(correction_attempts_for(0.5) == 1);
    CHECK(correction_attempts_for(0.25) == 2);
    CHECK(correction_attempts_for(0.01) == 6);
    CHECK(chain_length(2, 0.01) == 39);
    CHECK(chain_length(1, 0.01) == 39);
    CHECK(chain_length(2, 0.5) == 9);
    CHECK(chain_length(1, 0.5) == 9);
    CHECK_THROWS_AS(chain_length(1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(chain_length(1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(chain_length(0, 0.1), InvalidArgument);
}

TEST_CASE("lazy graph world agrees with the full state vector") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = LatticeGeometry::rectangle(3, 3);
        std::vector<std::pair<std::size_t, std::size_t>> edges(g.edges().begin(), g.edges().end());
        const auto psi = random_qubit(rng);
        GraphWorld world(g.points(), edges, {{4, psi}});

        std::vector<Eigen::Vector2cd> init(9, Eigen::Vector2cd{1, 1});
        init[4] = psi;
        StateVector full = StateVector::product(init);
        for (const auto &[a, b] : edges) full.apply_cz(a, b);

        std::vector<std::size_t> order{0, 1, 2, 3, 5, 6, 7};
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t site : order) {
            const Gate u = make_rotation(Axis::X, random_angle(rng)) * make_rotation(Axis::Y, random_angle(rng));
            world.apply_local(site, u);
            full.apply(site, u);
            const double draw = std::uniform_real_distribution<double>(0, 1)(rng);
            const double p0 = full.probability_zero(site);
            const int m = world.project(site, draw);
            CHECK(m == (draw < p0 ? 0 : 1));
            full.project(site, m);
            CHECK(world.live_qubits() <= 6);
        }
        const Gate v = make_rotation(Axis::Z, 0.4);
        world.apply_local(8, v);
        full.apply(8, v);
        const std::size_t keep[] = {4, 8};
        const auto out = world.readout(keep);
        CHECK(fidelity(out.to_eigen(), extract_subsystem(full, keep)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("first preparation on a fresh chain") {
    Protocol1DConfig cfg;
    cfg.chain_length = 6;
    Controller1D ctl({0.1, 0.2, 0.3}, cfg);
    for (double v : ctl.ledger()) CHECK(v == 0.0);
    const auto prep = ctl.prepare(0);
    CHECK(prep.window == std::vector<std::size_t>{0, 1});
    CHECK(std::abs(ctl.ledger()[0] - (0.1 + kPi)) < 1e-9);
    CHECK(std::abs(ctl.ledger()[1] - (0.2 + kPi)) < 1e-9);
}

TEST_CASE("preparations reset measured sites and keep the ledger consistent") {
    Protocol1DConfig cfg;
    cfg.chain_length = 9;
    cfg.pf_model = PfModel::uniform;
    cfg.p_f = 0.3;
    std::mt19937_64 g(3);
    const auto target = random_target(g);
    TrialRng rng(11);
    Controller1D ctl(target, cfg);
    World1D world(random_qubit(g), cfg);
    for (std::size_t t = 0; t < 5; ++t) {
        const auto prep = ctl.prepare(t);
        world.apply(prep.pulses);
        if (t >= 3) {
            CHECK(prep.window.size() >= 5);
            for (std::size_t i : prep.window)
                if (i < t) CHECK(world.register_state().detached_probability_zero(i) < 1e-15);
        }
        const auto beam = world.execute_beam(t, prep.beam_center, prep.s_peak, rng);
        REQUIRE(beam.target_projected);
        CHECK(beam.stray_fluorescence == 0);
        ctl.record(beam.outcome);
    }
    std::vector<Point> pos, centers;
    std::vector<double> angles;
    for (std::size_t i = 0; i < cfg.chain_length; ++i) pos.push_back({double(i), 0.0});
    for (const auto &p : ctl.issued_pulses()) {
        centers.push_back(p.center);
        angles.push_back(p.peak_angle);
    }
    const auto replay = replay_pulses(pos, centers, angles, cfg.r);
    for (std::size_t i = 0; i < pos.size(); ++i) CHECK(std::abs(replay[i] - ctl.ledger()[i]) < 1e-9);
}

TEST_CASE("window size grows like twice the offset") {
    for (double r : {2.0, 4.0}) {
        const auto plan = plan_offset(0.99, 0.01, r);
        Protocol1DConfig cfg;
        cfg.r = r;
        cfg.p_t = 0.99;
        cfg.offset_n = plan.n_rounded;
        cfg.chain_length = std::size_t(8 * plan.n_rounded + 10);
        Controller1D ctl({0, 0, 0}, cfg);
        const std::size_t t = 5 * std::size_t(plan.n_rounded);
        const double m = double(ctl.beam_window(t).size() + 2);
        const double n = plan.n_rounded;
        MESSAGE("r=" << r << " n=" << n << " M=" << m);
        CHECK(m / (2 * n) > 0.5);
        CHECK(m / (2 * n) < 2.5);
    }
}

TEST_CASE("execute_beam projections") {
    Protocol1DConfig cfg;
    cfg.chain_length = 6;
    cfg.pf_model = PfModel::uniform;
    cfg.p_f = 0.0;
    TrialRng rng(1);
    for (int i = 0; i < 200; ++i) {
        World1D world(Eigen::Vector2cd{1, 0}, cfg);
        world.execute_beam(0, {-1.0, 0.0}, cfg.s_peak(), rng);
        CHECK(world.hidden_events().empty());
    }

    // Exact model: the second neighbour is hit at the Gaussian-tail rate.
    cfg.pf_model = PfModel::exact;
    cfg.chain_length = 7;
    const double expected = probability_from_peak(cfg.s_peak(), 3.0, cfg.r);
    const int samples = 1000000;
    int hits = 0;
    for (int i = 0; i < samples; ++i) {
        World1D world(Eigen::Vector2cd{1, 0}, cfg);
        world.execute_beam(0, {-1.0, 0.0}, cfg.s_peak(), rng);
        for (const auto &h : world.hidden_events()) hits += h.site == 2;
    }
    const double sigma = std::sqrt(expected * (1 - expected) / samples);
    MESSAGE("second neighbour: " << double(hits) / samples << " vs " << expected);
    CHECK(std::abs(double(hits) / samples - expected) < 4 * sigma);
}

TEST_CASE("three-site chain with the neighbour always projected") {
    std::mt19937_64 g(8);
    Protocol1DConfig cfg;
    cfg.chain_length = 3;
    cfg.pf_model = PfModel::uniform;
    cfg.p_f = 1.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto target = random_target(g);
        const auto psi = random_qubit(g);
        TrialRng rng(trial);
        Controller1D ctl(target, cfg);
        World1D world(psi, cfg);
        const auto prep = ctl.prepare(0);
        world.apply(prep.pulses);
        const auto beam = world.execute_beam(0, prep.beam_center, prep.s_peak, rng);
        REQUIRE(beam.target_projected);
        REQUIRE(world.hidden_events().size() == 1);
        const int m1 = beam.outcome, m2 = world.hidden_events()[0].outcome;
        const Eigen::Vector2cd phys = world.output_state();
        const Eigen::Vector2cd logical =
            make_rotation(Axis::Y, kPi / 2).adjoint() * make_rotation(Axis::X, -ctl.ledger()[2]) * phys;
        const Eigen::Vector2cd expect = pow_gate(gates::pauli_x(), m2) * pow_gate(gates::pauli_z(), m1) *
                                        rx((m1 ? -1 : 1) * target.alpha2) * rz(target.alpha1) * psi;
        CHECK(fidelity(vec(logical), vec(expect)) >= 1 - 1e-9);
    }
}

TEST_CASE("trivial and all-zero trajectories") {
    std::mt19937_64 g(21);
    Protocol1DConfig cfg;
    cfg.chain_length = 4;
    cfg.pf_model = PfModel::uniform;
    for (int trial = 0; trial < 10; ++trial) {
        const auto psi = random_qubit(g);
        TrialRng rng(trial);
        cfg.chain_length = 14;
        const auto res = run_trial_1d(psi, {0, 0, 0}, cfg, rng);
        if (res.completed) CHECK(res.fidelity >= 1 - 1e-9);
        cfg.chain_length = 4;
        try {
            const auto short_run = run_single_qubit_unitary(psi, {0, 0, 0}, cfg, rng);
            CHECK(short_run.fidelity >= 1 - 1e-9);
        } catch (const ChainExhausted &e) {
            CHECK(e.correction_depth >= 1);
        }
    }
    // Search for trajectories whose outcomes are all zero: no frame at all.
    int found = 0;
    for (std::uint64_t seed = 0; found < 10 && seed < 1000; ++seed) {
        const auto target = random_target(g);
        const auto psi = random_qubit(g);
        TrialRng rng(seed);
        Controller1D ctl(target, cfg);
        World1D world(psi, cfg);
        bool zeros = true;
        for (std::size_t t = 0; t < 3; ++t) {
            const auto prep = ctl.prepare(t);
            world.apply(prep.pulses);
            const auto beam = world.execute_beam(t, prep.beam_center, prep.s_peak, rng);
            if (!beam.target_projected || beam.outcome != 0) {
                zeros = false;
                break;
            }
            ctl.record(beam.outcome);
        }
        if (!zeros) continue;
        ++found;
        const Eigen::Vector2cd logical = make_rotation(Axis::Y, kPi / 2).adjoint() *
                                         make_rotation(Axis::X, -ctl.ledger()[3]) * world.output_state();
        CHECK(fidelity(vec(logical), vec(target.unitary() * psi)) >= 1 - 1e-9);
    }
    CHECK(found == 10);
}

TEST_CASE("every completed trajectory reaches unit fidelity") {
    std::mt19937_64 g(99);
    for (int m : {1, 2}) {
        Protocol1DConfig cfg;
        cfg.chain_length = 16;
        cfg.pf_model = PfModel::uniform;
        cfg.p_f = 0.2;
        cfg.m_protect = m;
        int completed = 0;
        for (int trial = 0; trial < 300; ++trial) {
            TrialRng rng(1234, trial);
            const auto res = run_trial_1d(random_qubit(g), random_target(g), cfg, rng);
            CHECK(!res.unprotected_hit);
            CHECK(res.stray_fluorescence == 0);
            if (!res.completed) continue;
            ++completed;
            CHECK(res.fidelity >= 1 - 1e-9);
        }
        CHECK(completed > 250);
    }
}

TEST_CASE("exact-model neighbours beyond the protected range are flagged") {
    Protocol1DConfig cfg;
    cfg.chain_length = 12;
    cfg.r = 1.5;
    cfg.offset_n = 1;
    cfg.p_t = 0.999;
    int flagged = 0;
    std::mt19937_64 g(4);
    for (int trial = 0; trial < 200; ++trial) {
        TrialRng rng(7, trial);
        const auto res = run_trial_1d(random_qubit(g), random_target(g), cfg, rng);
        if (res.unprotected_hit) {
            ++flagged;
            continue;
        }
        if (res.completed) CHECK(res.fidelity >= 1 - 1e-9);
    }
    CHECK(flagged > 0);
}

TEST_CASE("hidden outcomes reappear and the controller ignores them") {
    std::mt19937_64 g(5);
    Protocol1DConfig cfg;
    cfg.chain_length = 12;
    cfg.pf_model = PfModel::uniform;
    cfg.p_f = 0.5;
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto target = random_target(g);
        TrialRng rng(55, trial);
        const auto res = run_trial_1d(random_qubit(g), target, cfg, rng);
        for (const auto &h : res.hidden_events) {
            if (h.site < res.outcomes.size()) {
                CHECK(res.outcomes[h.site] == h.outcome);
                ++checked;
            }
        }
        // Replaying the observed outcomes into a fresh controller issues
        // the identical pulse sequence.
        Controller1D replay(target, cfg);
        for (std::size_t t = 0; t < res.outcomes.size(); ++t) {
            const auto prep = replay.prepare(t);
            REQUIRE(prep.pulses.size() == res.transcript[t].pulses.size());
            for (std::size_t k = 0; k < prep.pulses.size(); ++k) {
                CHECK(prep.pulses[k].center == res.transcript[t].pulses[k].center);
                CHECK(prep.pulses[k].peak_angle == res.transcript[t].pulses[k].peak_angle);
            }
            replay.record(res.outcomes[t]);
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("correction depth statistics on the second Euler angle") {
    std::mt19937_64 g(6);
    Protocol1DConfig cfg;
    cfg.chain_length = 14;
    cfg.pf_model = PfModel::uniform;
    cfg.p_f = 0.1;
    const int trials = 2000;
    std::map<int, int> hist;
    int total = 0;
    for (int trial = 0; trial < trials; ++trial) {
        TrialRng rng(77, trial);
        const auto res = run_trial_1d(random_qubit(g), random_target(g), cfg, rng);
        if (!res.completed) continue;
        ++hist[res.correction_depth[1]];
        ++total;
        CHECK(res.depth_uncertain[1]);
        CHECK(!res.depth_uncertain[0]);
    }
    for (int l = 0; l <= 3; ++l) {
        const double p = std::ldexp(1.0, -(l + 1));
        const double sigma = std::sqrt(total * p * (1 - p));
        CHECK(std::abs(hist[l] - total * p) < 3.5 * sigma);
    }
}

TEST_CASE("logical_mixture closed forms") {
    std::mt19937_64 g(31);
    const std::vector<double> none;
    for (int trial = 0; trial < 20; ++trial) {
        const auto psi = random_qubit(g);
        const double a1 = random_angle(g), a2 = random_angle(g), a3 = random_angle(g);
        const double p = std::uniform_real_distribution<double>(0.0, 0.5)(g);
        for (int m1 = 0; m1 < 2; ++m1) {
            for (int m2 = 0; m2 < 2; ++m2) {
                const std::vector<double> betas{a1, a2};
                const std::vector<int> outs{m1, m2};
                const auto rho = logical_mixture(psi, betas, outs, 1, p);
                const Eigen::Matrix2cd expect =
                    (1 - p) * proj(pow_gate(gates::pauli_x(), m1) * gates::hadamard() * rz(a1) * psi) +
                    p * proj(pow_gate(gates::pauli_x(), m2) * pow_gate(gates::pauli_z(), m1) * rx((m1 ? -1 : 1) * a2) *
                             rz(a1) * psi);
                CHECK(max_diff(rho, expect) < 1e-10);
            }
        }
        // rho_2 and rho_3 with the earlier outcomes zero.
        const Gate core = rx(a2) * rz(a1);
        for (int m2 = 0; m2 < 2; ++m2) {
            for (int m3 = 0; m3 < 2; ++m3) {
                const auto rho2 = logical_mixture(psi, std::vector<double>{a1, a2, a3}, std::vector<int>{0, m2, m3}, 2, p);
                const Eigen::Matrix2cd e2 =
                    (1 - p) * proj(pow_gate(gates::pauli_x(), m2) * core * psi) +
                    p * proj(pow_gate(gates::pauli_x(), m3) * pow_gate(gates::pauli_z(), m2) * gates::hadamard() *
                             rz((m2 ? -1 : 1) * a3) * core * psi);
                CHECK(max_diff(rho2, e2) < 1e-10);
            }
        }
        for (int m3 = 0; m3 < 2; ++m3) {
            for (int m4 = 0; m4 < 2; ++m4) {
                const auto rho3 =
                    logical_mixture(psi, std::vector<double>{a1, a2, a3, 0.0}, std::vector<int>{0, 0, m3, m4}, 3, p);
                const Eigen::Matrix2cd e3 =
                    (1 - p) * proj(pow_gate(gates::pauli_x(), m3) * gates::hadamard() * rz(a3) * core * psi) +
                    p * proj(pow_gate(gates::pauli_x(), m4) * pow_gate(gates::pauli_z(), m3) * rz(a3) * core * psi);
                CHECK(max_diff(rho3, e3) < 1e-10);
            }
        }
        // m1 = 1: pi and -2 alpha2 on the next pair.
        for (int m2 = 0; m2 < 2; ++m2) {
            for (int m3 = 0; m3 < 2; ++m3) {
                for (int m4 = 0; m4 < 2; ++m4) {
                    const auto rho3 = logical_mixture(psi, std::vector<double>{a1, a2, 0.0, -2 * a2},
                                                      std::vector<int>{1, m2, m3, m4}, 3, p);
                    const Gate wrong = rx(-a2) * rz(a1);
                    const Eigen::Matrix2cd e3 =
                        (1 - p) * proj(pow_gate(gates::pauli_x(), m3) * pow_gate(gates::pauli_z(), m2) *
                                       gates::pauli_x() * gates::hadamard() * wrong * psi) +
                        p * proj(pow_gate(gates::pauli_x(), m4) * pow_gate(gates::pauli_z(), m3) *
                                 pow_gate(gates::pauli_x(), m2) * gates::pauli_z() * rx((m3 ? -1 : 1) * 2 * a2) *
                                 wrong * psi);
                    CHECK(max_diff(rho3, e3) < 1e-10);
                }
            }
        }
    }
    const auto pure = logical_mixture(Eigen::Vector2cd{1, 0}, std::vector<double>{0.3, 0.4}, std::vector<int>{0, 1}, 1, 0.0);
    CHECK(pure.min_eigenvalue() > -1e-12);
    CHECK((pure.matrix() * pure.matrix() - pure.matrix()).norm() < 1e-12);
    CHECK_THROWS_AS(logical_mixture(Eigen::Vector2cd{1, 0}, std::vector<double>(6, 0.0), std::vector<int>(6, 0), 5, 0.1),
                    CapacityError);
}

TEST_CASE("ideal branch keeps weight 1-p through the first three measurements") {
    std::mt19937_64 g(44);
    for (int trial = 0; trial < 20; ++trial) {
        const auto psi = random_qubit(g);
        const double a1 = random_angle(g), a2 = random_angle(g), a3 = random_angle(g);
        const double p = 0.25;
        const std::vector<double> betas{a1, a2, a3, 0.0};
        const std::vector<int> outs{0, 0, 0, 0};
        const Eigen::Vector2cd ideal[] = {gates::hadamard() * rz(a1) * psi, rx(a2) * rz(a1) * psi,
                                          gates::hadamard() * rz(a3) * rx(a2) * rz(a1) * psi};
        for (std::size_t k = 1; k <= 3; ++k) {
            const auto rho = logical_mixture(psi, betas, outs, k, p);
            const double f = fidelity(rho, Eigen::VectorXcd(ideal[k - 1]));
            CHECK(f >= 1 - p - 1e-12);
            // Removing the ideal branch leaves a valid state with weight p.
            const Eigen::Matrix2cd rest = rho.matrix() - (1 - p) * proj(ideal[k - 1]);
            CHECK(rest.trace().real() == doctest::Approx(p).epsilon(1e-12));
            CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(rest).eigenvalues().minCoeff() > -1e-12);
        }
    }
}
