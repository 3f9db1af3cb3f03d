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

#include "wbqc/beam.hpp"
#include "wbqc/errors.hpp"
#include "wbqc/master_equation.hpp"

using namespace wbqc;

namespace {

Eigen::Matrix3cd plus01() {
    Eigen::Matrix3cd rho = Eigen::Matrix3cd::Zero();
    rho.block<2, 2>(0, 0).setConstant(0.5);
    return rho;
}

}  // namespace

TEST_CASE("no drive leaves the state alone") {
    const Eigen::Matrix3cd rho0 = plus01();
    const auto rho = integrate_master_equation(0.0, 1.0, 500.0, rho0);
    CHECK((rho - rho0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("the dark level is untouched") {
    Eigen::Matrix3cd rho0 = Eigen::Matrix3cd::Zero();
    rho0(1, 1) = 1.0;
    const auto rho = integrate_master_equation(0.05, 1.0, 2000.0, rho0);
    CHECK((rho - rho0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("trace and positivity are preserved") {
    Eigen::Matrix3cd rho0 = Eigen::Matrix3cd::Zero();
    rho0(0, 0) = 0.7;
    rho0(1, 1) = 0.3;
    rho0(0, 1) = {0.2, 0.3};
    rho0(1, 0) = std::conj(rho0(0, 1));
    const auto rho = integrate_master_equation(0.3, 1.0, 50.0, rho0);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(rho, Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("coherence decays at Omega^2 / 2 gamma") {
    const double ratio = 0.01;
    const auto fit = fit_coherence_decay(ratio, 1.0, 3.0, 100);
    CHECK(std::abs(fit.rate / fit.predicted_rate - 1.0) < 0.01);
    CHECK(fit.max_population_drift < ratio * ratio);
    CHECK(fit.max_probability_error < 1e-3);
    CHECK(fit.max_trace_error < 1e-9);
    CHECK(fit.min_eigenvalue > -1e-8);
}

TEST_CASE("bad inputs") {
    CHECK_THROWS_AS(integrate_master_equation(0.1, 0.0, 1.0, plus01()), InvalidArgument);
    CHECK_THROWS_AS(integrate_master_equation(0.1, 1.0, 1.0, Eigen::Matrix3cd::Zero()), InvalidArgument);
}
