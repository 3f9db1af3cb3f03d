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

// Exact small-system state engine.
//
// Bit ordering: qubit 0 is the leftmost tensor factor, so it is the most
// significant bit of a basis index. For n qubits, qubit q corresponds to the
// bit mask 1 << (n - 1 - q).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace wbqc {

using Complex = std::complex<double>;
using Gate = Eigen::Matrix2cd;

enum class Axis { X, Y, Z };

/// Largest register the state-vector engine accepts.
inline constexpr std::size_t kMaxQubits = 20;

/// exp(-i * angle * Sigma / 2) for the Pauli Sigma of `axis`.
Gate make_rotation(Axis axis, double angle);

/// Laser rotation U(Omega t, phase) in the rotating frame.
Gate laser_rotation(double pulse_area, double phase);

namespace gates {
Gate identity();
Gate pauli_x();
Gate pauli_y();
Gate pauli_z();
Gate hadamard();
}  // namespace gates

/// True when a and b agree entrywise up to one global phase.
bool equal_up_to_phase(const Gate &a, const Gate &b, double tol);

class StateVector {
   public:
    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(std::size_t num_qubits);

    /// Takes amplitudes of length 2^n and normalizes them. Throws on a zero vector.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);
    /// Tensor product of single-qubit states, qubit 0 first.
    static StateVector product(std::span<const Eigen::Vector2cd> qubits);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    const std::vector<Complex> &amplitudes() const { return amplitudes_; }
    Complex amplitude(std::uint64_t basis_index) const { return amplitudes_.at(basis_index); }
    Eigen::VectorXcd to_eigen() const;

    double norm_squared() const;

    void apply(std::size_t qubit, const Gate &gate);
    void apply_cz(std::size_t q1, std::size_t q2);

    /// Born probability of reading 0 on `qubit`.
    double probability_zero(std::size_t qubit) const;
    /// Projects onto |outcome> and renormalizes. Throws ZeroProbabilityBranch.
    void project(std::size_t qubit, int outcome);
    /// Outcome 0 iff draw < P(0); state collapses accordingly.
    int measure(std::size_t qubit, double draw);

    /// <Z> on one qubit and <P> for an arbitrary Pauli string (one Gate per qubit, empty = identity).
    Complex expectation(std::span<const std::pair<std::size_t, Gate>> factors) const;

   private:
    std::uint64_t mask(std::size_t qubit) const;
    void check_qubit(std::size_t qubit) const;

    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

class DensityMatrix {
   public:
    explicit DensityMatrix(Eigen::MatrixXcd matrix);
    static DensityMatrix pure(const StateVector &state);
    static DensityMatrix pure(const Eigen::VectorXcd &state);

    std::size_t num_qubits() const { return num_qubits_; }
    const Eigen::MatrixXcd &matrix() const { return matrix_; }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return matrix_(i, j); }

    double trace() const { return matrix_.trace().real(); }
    bool is_hermitian(double tol = 1e-12) const;
    double min_eigenvalue() const;

   private:
    std::size_t num_qubits_;
    Eigen::MatrixXcd matrix_;
};

struct Projection {
    int outcome;
    StateVector post_state;
};

StateVector apply_gate(StateVector state, std::size_t qubit, const Gate &gate);
StateVector apply_cz(StateVector state, std::size_t q1, std::size_t q2);
/// Outcome 0 iff random_draw < P(0).
Projection project_z(StateVector state, std::size_t qubit, double random_draw);
/// Forced outcome. Throws ZeroProbabilityBranch when that outcome is impossible.
Projection project_z_forced(StateVector state, std::size_t qubit, int forced_outcome);

double fidelity(const StateVector &a, const StateVector &b);
double fidelity(const DensityMatrix &rho, const StateVector &b);
double fidelity(const DensityMatrix &rho, const Eigen::VectorXcd &b);
double fidelity(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b);

struct Branch {
    double weight;
    Eigen::VectorXcd state;
};

/// Sum of weight * |state><state|; states are normalized first.
DensityMatrix mix(std::span<const Branch> branches);

/// Reduced density matrix of `keep` (in the given order, first = leftmost).
DensityMatrix partial_trace(const StateVector &state, std::span<const std::size_t> keep);

/// Pure state of `keep` when the rest of the register is in a product with it.
/// Returns the dominant eigenvector of the reduced density matrix; `purity_out`
/// receives Tr(rho^2) when non-null.
Eigen::VectorXcd extract_subsystem(const StateVector &state, std::span<const std::size_t> keep,
                                   double *purity_out = nullptr);

/// Kronecker product, left factor first.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);

}  // namespace wbqc
