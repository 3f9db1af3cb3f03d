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

#include "wbqc/master_equation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "wbqc/beam.hpp"
#include "wbqc/errors.hpp"

namespace wbqc {

namespace {

namespace odeint = boost::numeric::odeint;

using OdeState = std::vector<double>;

OdeState pack(const Eigen::Matrix3cd &rho) {
    OdeState x(18);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            x[2 * (3 * i + j)] = rho(i, j).real();
            x[2 * (3 * i + j) + 1] = rho(i, j).imag();
        }
    }
    return x;
}

Eigen::Matrix3cd unpack(const OdeState &x) {
    Eigen::Matrix3cd rho;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) rho(i, j) = {x[2 * (3 * i + j)], x[2 * (3 * i + j) + 1]};
    }
    return rho;
}

struct Lindblad {
    Eigen::Matrix3cd hamiltonian = Eigen::Matrix3cd::Zero();
    Eigen::Matrix3cd jump = Eigen::Matrix3cd::Zero();
    double gamma = 0.0;

    void operator()(const OdeState &x, OdeState &dxdt, double /*t*/) const {
        const Eigen::Matrix3cd rho = unpack(x);
        const std::complex<double> i{0.0, 1.0};
        const Eigen::Matrix3cd jdj = jump.adjoint() * jump;
        const Eigen::Matrix3cd drho = -i * (hamiltonian * rho - rho * hamiltonian) +
                                      (gamma / 2.0) * (2.0 * jump * rho * jump.adjoint() - jdj * rho - rho * jdj);
        dxdt = pack(drho);
    }
};

void validate(double omega, double gamma, const Eigen::Matrix3cd &rho0) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("decay rate gamma must be positive");
    if (!std::isfinite(omega)) throw InvalidArgument("Rabi frequency must be finite");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-9 || (rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
        throw InvalidArgument("initial state must be a unit-trace Hermitian matrix");
    }
}

}  // namespace

std::vector<Eigen::Matrix3cd> master_equation_samples(double omega, double gamma, const std::vector<double> &times,
                                                      const Eigen::Matrix3cd &rho0,
                                                      const MasterEquationOptions &options) {
    validate(omega, gamma, rho0);
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
        throw InvalidArgument("sample times must be non-negative and increasing");
    }
    Lindblad system;
    system.gamma = gamma;
    system.hamiltonian(0, 2) = omega / 2.0;
    system.hamiltonian(2, 0) = omega / 2.0;
    system.jump(0, 2) = 1.0;

    auto stepper = odeint::make_controlled(options.absolute_tolerance, options.relative_tolerance,
                                           odeint::runge_kutta_dopri5<OdeState>());
    OdeState x = pack(rho0);
    double t = 0.0;
    double dt = 0.1 / gamma;
    long steps = 0;
    std::vector<Eigen::Matrix3cd> out;
    out.reserve(times.size());
    for (double target : times) {
        while (t < target) {
            double step = std::min(dt, target - t);
            const double requested = step;
            int rejections = 0;
            while (stepper.try_step(system, x, t, step) == odeint::fail) {
                if (++rejections > 200 || step < 1e-14 / gamma) {
                    throw IntegrationError("master-equation stepper failed to converge at t = " + std::to_string(t));
                }
            }
            // Keep the grown step for the next iteration unless we clipped to hit a sample time.
            if (requested == dt || step > dt) dt = step;
            if (++steps > options.max_steps) throw IntegrationError("master-equation step budget exhausted");
        }
        out.push_back(unpack(x));
    }
    return out;
}

Eigen::Matrix3cd integrate_master_equation(double omega, double gamma, double t_final, const Eigen::Matrix3cd &rho0,
                                           const MasterEquationOptions &options) {
    if (!(t_final >= 0.0)) throw InvalidArgument("t_final must be non-negative");
    return master_equation_samples(omega, gamma, {t_final}, rho0, options).front();
}

CoherenceDecayFit fit_coherence_decay(double omega, double gamma, double s_final, int samples) {
    if (omega == 0.0) throw InvalidArgument("coherence fit needs a nonzero Rabi frequency");
    const double rate = omega * omega / (2.0 * gamma);
    const double t_final = s_final / rate;
    std::vector<double> times(static_cast<std::size_t>(samples) + 1);
    for (int k = 0; k <= samples; ++k) times[static_cast<std::size_t>(k)] = t_final * k / samples;

    Eigen::Matrix3cd rho0 = Eigen::Matrix3cd::Zero();
    rho0.block<2, 2>(0, 0).setConstant(0.5);
    const auto rhos = master_equation_samples(omega, gamma, times, rho0);

    CoherenceDecayFit fit;
    fit.predicted_rate = rate;
    fit.min_eigenvalue = 1.0;
    const double c0 = std::abs(rho0(0, 1));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t k = 0; k < rhos.size(); ++k) {
        const auto &rho = rhos[k];
        const double t = times[k];
        fit.max_population_drift = std::max({fit.max_population_drift, std::abs(rho(0, 0).real() - rho0(0, 0).real()),
                                             std::abs(rho(1, 1).real() - rho0(1, 1).real())});
        fit.max_trace_error = std::max(fit.max_trace_error, std::abs(rho.trace().real() - 1.0));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
        fit.min_eigenvalue = std::min(fit.min_eigenvalue, eig.eigenvalues().minCoeff());
        const double coherence = std::abs(rho(0, 1));
        const double decayed = 1.0 - coherence / c0;
        fit.max_probability_error =
            std::max(fit.max_probability_error, std::abs(decayed - projection_probability(rate * t)));
        if (t >= 20.0 / gamma) {
            const double y = std::log(coherence);
            sx += t;
            sy += y;
            sxx += t * t;
            sxy += t * y;
            ++count;
        }
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    fit.rate = -slope;
    return fit;
}

}  // namespace wbqc
