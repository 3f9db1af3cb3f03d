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

#include "wbqc/quantum.hpp"

#include <cmath>
#include <string>

#include "wbqc/errors.hpp"

namespace wbqc {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_finite(double angle) {
    if (!std::isfinite(angle)) {
        throw InvalidArgument("rotation angle must be finite");
    }
}

}  // namespace

namespace gates {
Gate identity() { return Gate::Identity(); }
Gate pauli_x() {
    Gate g;
    g << 0, 1, 1, 0;
    return g;
}
Gate pauli_y() {
    Gate g;
    g << 0, -kI, kI, 0;
    return g;
}
Gate pauli_z() {
    Gate g;
    g << 1, 0, 0, -1;
    return g;
}
Gate hadamard() {
    Gate g;
    const double s = 1.0 / std::sqrt(2.0);
    g << s, s, s, -s;
    return g;
}
}  // namespace gates

Gate make_rotation(Axis axis, double angle) {
    check_finite(angle);
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    Gate g;
    switch (axis) {
        case Axis::X:
            g << c, -kI * s, -kI * s, c;
            break;
        case Axis::Y:
            g << c, -s, s, c;
            break;
        case Axis::Z:
            g << std::exp(-kI * (angle / 2.0)), 0, 0, std::exp(kI * (angle / 2.0));
            break;
    }
    return g;
}

Gate laser_rotation(double pulse_area, double phase) {
    check_finite(pulse_area);
    check_finite(phase);
    const double c = std::cos(pulse_area / 2.0);
    const double s = std::sin(pulse_area / 2.0);
    Gate g;
    g << c, -kI * std::exp(-kI * phase) * s, -kI * std::exp(kI * phase) * s, c;
    return g;
}

bool equal_up_to_phase(const Gate &a, const Gate &b, double tol) {
    // Align on the largest entry of b.
    Eigen::Index bi = 0, bj = 0;
    b.cwiseAbs().maxCoeff(&bi, &bj);
    if (std::abs(a(bi, bj)) < 1e-300) return false;
    const Complex phase = b(bi, bj) / a(bi, bj);
    if (std::abs(std::abs(phase) - 1.0) > tol) return false;
    return ((a * phase) - b).cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1) throw InvalidArgument("a state needs at least one qubit");
    if (num_qubits > kMaxQubits) {
        throw CapacityError("state vector limited to " + std::to_string(kMaxQubits) + " qubits, asked for " +
                            std::to_string(num_qubits));
    }
    amplitudes_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) throw InvalidArgument("amplitude count must be a power of two >= 2");
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    double norm = 0.0;
    for (const auto &a : amplitudes) norm += std::norm(a);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("amplitudes must have a finite nonzero norm");
    const double scale = 1.0 / std::sqrt(norm);
    StateVector out(n);
    for (std::size_t i = 0; i < dim; ++i) out.amplitudes_[i] = amplitudes[i] * scale;
    return out;
}

StateVector StateVector::product(std::span<const Eigen::Vector2cd> qubits) {
    StateVector out(qubits.size());
    const std::size_t n = qubits.size();
    for (std::size_t idx = 0; idx < out.amplitudes_.size(); ++idx) {
        Complex amp = 1.0;
        for (std::size_t q = 0; q < n; ++q) {
            const int bit = static_cast<int>((idx >> (n - 1 - q)) & 1U);
            amp *= qubits[q](bit);
        }
        out.amplitudes_[idx] = amp;
    }
    double norm = out.norm_squared();
    if (!(norm > 0.0)) throw InvalidArgument("product state has zero norm");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto &a : out.amplitudes_) a *= scale;
    return out;
}

Eigen::VectorXcd StateVector::to_eigen() const {
    return Eigen::Map<const Eigen::VectorXcd>(amplitudes_.data(), static_cast<Eigen::Index>(amplitudes_.size()));
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amplitudes_) s += std::norm(a);
    return s;
}

std::uint64_t StateVector::mask(std::size_t qubit) const { return std::uint64_t{1} << (num_qubits_ - 1 - qubit); }

void StateVector::check_qubit(std::size_t qubit) const {
    if (qubit >= num_qubits_) {
        throw InvalidArgument("qubit index " + std::to_string(qubit) + " out of range for " +
                              std::to_string(num_qubits_) + " qubits");
    }
}

void StateVector::apply(std::size_t qubit, const Gate &gate) {
    check_qubit(qubit);
    const std::uint64_t m = mask(qubit);
    const std::size_t dim = amplitudes_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & m) continue;
        const Complex a0 = amplitudes_[i];
        const Complex a1 = amplitudes_[i | m];
        amplitudes_[i] = gate(0, 0) * a0 + gate(0, 1) * a1;
        amplitudes_[i | m] = gate(1, 0) * a0 + gate(1, 1) * a1;
    }
}

void StateVector::apply_cz(std::size_t q1, std::size_t q2) {
    check_qubit(q1);
    check_qubit(q2);
    if (q1 == q2) throw InvalidArgument("CZ needs two distinct qubits");
    const std::uint64_t both = mask(q1) | mask(q2);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & both) == both) amplitudes_[i] = -amplitudes_[i];
    }
}

double StateVector::probability_zero(std::size_t qubit) const {
    check_qubit(qubit);
    const std::uint64_t m = mask(qubit);
    double p0 = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if (!(i & m)) p0 += std::norm(amplitudes_[i]);
    }
    return p0;
}

void StateVector::project(std::size_t qubit, int outcome) {
    check_qubit(qubit);
    if (outcome != 0 && outcome != 1) throw InvalidArgument("outcome must be 0 or 1");
    const std::uint64_t m = mask(qubit);
    const double p0 = probability_zero(qubit);
    const double p = outcome == 0 ? p0 : 1.0 - p0;
    if (p <= 1e-14) {
        throw ZeroProbabilityBranch("outcome " + std::to_string(outcome) + " on qubit " + std::to_string(qubit) +
                                    " has zero probability");
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const int bit = (i & m) ? 1 : 0;
        if (bit != outcome) {
            amplitudes_[i] = 0.0;
        } else {
            norm += std::norm(amplitudes_[i]);
        }
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto &a : amplitudes_) a *= scale;
}

int StateVector::measure(std::size_t qubit, double draw) {
    const int outcome = draw < probability_zero(qubit) ? 0 : 1;
    project(qubit, outcome);
    return outcome;
}

Complex StateVector::expectation(std::span<const std::pair<std::size_t, Gate>> factors) const {
    StateVector tmp = *this;
    for (const auto &[q, g] : factors) tmp.apply(q, g);
    Complex s = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) s += std::conj(amplitudes_[i]) * tmp.amplitudes_[i];
    return s;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    const auto dim = matrix_.rows();
    if (dim != matrix_.cols() || dim < 2 || (dim & (dim - 1)) != 0) {
        throw InvalidArgument("density matrix must be square with power-of-two dimension");
    }
    num_qubits_ = 0;
    while ((Eigen::Index{1} << num_qubits_) < dim) ++num_qubits_;
}

DensityMatrix DensityMatrix::pure(const StateVector &state) { return pure(state.to_eigen()); }

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd &state) {
    const Eigen::VectorXcd v = state.normalized();
    return DensityMatrix(v * v.adjoint());
}

bool DensityMatrix::is_hermitian(double tol) const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Free functions

StateVector apply_gate(StateVector state, std::size_t qubit, const Gate &gate) {
    state.apply(qubit, gate);
    return state;
}

StateVector apply_cz(StateVector state, std::size_t q1, std::size_t q2) {
    state.apply_cz(q1, q2);
    return state;
}

Projection project_z(StateVector state, std::size_t qubit, double random_draw) {
    if (!(random_draw >= 0.0 && random_draw < 1.0)) throw InvalidArgument("random draw must lie in [0, 1)");
    const int outcome = state.measure(qubit, random_draw);
    return {outcome, std::move(state)};
}

Projection project_z_forced(StateVector state, std::size_t qubit, int forced_outcome) {
    state.project(qubit, forced_outcome);
    return {forced_outcome, std::move(state)};
}

double fidelity(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b) {
    if (a.size() != b.size()) throw InvalidArgument("fidelity: dimension mismatch");
    const double na = a.squaredNorm();
    const double nb = b.squaredNorm();
    return std::norm(a.dot(b)) / (na * nb);
}

double fidelity(const StateVector &a, const StateVector &b) { return fidelity(a.to_eigen(), b.to_eigen()); }

double fidelity(const DensityMatrix &rho, const Eigen::VectorXcd &b) {
    if (rho.matrix().rows() != b.size()) throw InvalidArgument("fidelity: dimension mismatch");
    const Eigen::VectorXcd v = b.normalized();
    return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

double fidelity(const DensityMatrix &rho, const StateVector &b) { return fidelity(rho, b.to_eigen()); }

DensityMatrix mix(std::span<const Branch> branches) {
    if (branches.empty()) throw InvalidArgument("mix needs at least one branch");
    const auto dim = branches.front().state.size();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    double total = 0.0;
    for (const auto &b : branches) {
        if (b.weight < 0.0 || !std::isfinite(b.weight)) throw InvalidArgument("mix: negative branch weight");
        if (b.state.size() != dim) throw InvalidArgument("mix: branch dimensions differ");
        const Eigen::VectorXcd v = b.state.normalized();
        rho += b.weight * (v * v.adjoint());
        total += b.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("mix: weights must sum to 1");
    return DensityMatrix(std::move(rho));
}

DensityMatrix partial_trace(const StateVector &state, std::span<const std::size_t> keep) {
    const std::size_t n = state.num_qubits();
    const std::size_t k = keep.size();
    if (k == 0 || k > n) throw InvalidArgument("partial_trace: bad keep set");
    std::uint64_t keep_mask = 0;
    for (std::size_t q : keep) {
        if (q >= n) throw InvalidArgument("partial_trace: qubit out of range");
        const std::uint64_t m = std::uint64_t{1} << (n - 1 - q);
        if (keep_mask & m) throw InvalidArgument("partial_trace: repeated qubit");
        keep_mask |= m;
    }
    const std::size_t sub = std::size_t{1} << k;
    // Group amplitudes by the traced-out bits; each group is a vector over the kept bits.
    const std::size_t dim = state.dimension();
    const auto &amps = state.amplitudes();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(sub, sub);
    std::vector<std::uint64_t> kept_bits_for(sub);
    for (std::size_t r = 0; r < sub; ++r) {
        std::uint64_t bits = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if ((r >> (k - 1 - j)) & 1U) bits |= std::uint64_t{1} << (n - 1 - keep[j]);
        }
        kept_bits_for[r] = bits;
    }
    for (std::uint64_t env = 0; env < dim; ++env) {
        if (env & keep_mask) continue;
        for (std::size_t r = 0; r < sub; ++r) {
            const Complex ar = amps[env | kept_bits_for[r]];
            if (ar == Complex{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < sub; ++c) {
                rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
                    ar * std::conj(amps[env | kept_bits_for[c]]);
            }
        }
    }
    return DensityMatrix(std::move(rho));
}

Eigen::VectorXcd extract_subsystem(const StateVector &state, std::span<const std::size_t> keep,
                                   double *purity_out) {
    const DensityMatrix rho = partial_trace(state, keep);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
    const auto last = solver.eigenvalues().size() - 1;
    if (purity_out) *purity_out = (rho.matrix() * rho.matrix()).trace().real();
    return solver.eigenvectors().col(last);
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace wbqc
