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

// Three-level fluorescence model: levels {0, 1, 2}, the measuring beam drives
// 0 <-> 2 with Rabi frequency Omega and level 2 decays back to 0 at rate gamma.
// Level 1 is dark.

#include <vector>

#include <Eigen/Dense>

namespace wbqc {

struct MasterEquationOptions {
    double relative_tolerance = 1e-10;
    double absolute_tolerance = 1e-12;
    /// Abort when the adaptive stepper needs more steps than this.
    long max_steps = 50'000'000;
};

/// Integrates drho/dt = -i[H, rho] + (gamma/2)(2 L rho L^dag - L^dag L rho - rho L^dag L)
/// with H = (Omega/2)(|0><2| + |2><0|) and L = |0><2|, from t = 0 to t_final.
Eigen::Matrix3cd integrate_master_equation(double omega, double gamma, double t_final, const Eigen::Matrix3cd &rho0,
                                           const MasterEquationOptions &options = {});

/// Same integration, sampled at the given increasing times (first may be 0).
std::vector<Eigen::Matrix3cd> master_equation_samples(double omega, double gamma, const std::vector<double> &times,
                                                      const Eigen::Matrix3cd &rho0,
                                                      const MasterEquationOptions &options = {});

struct CoherenceDecayFit {
    double rate = 0.0;                ///< fitted decay rate of |rho_01|
    double predicted_rate = 0.0;      ///< Omega^2 / (2 gamma)
    double max_population_drift = 0.0;  ///< max |rho_00(t) - rho_00(0)|, |rho_11(t) - rho_11(0)|
    double max_probability_error = 0.0;  ///< max |(1 - |rho01(t)|/|rho01(0)|) - projection_probability(s(t))|
    double max_trace_error = 0.0;
    double min_eigenvalue = 0.0;
};

/// Starts from |+><+| on levels {0, 1}, samples `samples` points up to the
/// time where Omega^2 t / (2 gamma) = s_final, and fits log|rho_01| linearly
/// over samples with t >= 20 / gamma.
CoherenceDecayFit fit_coherence_decay(double omega, double gamma, double s_final = 4.0, int samples = 200);

}  // namespace wbqc
