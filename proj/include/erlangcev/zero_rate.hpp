#pragma once

#include <Eigen/Dense>

#include "erlangcev/model.hpp"
#include "erlangcev/verification.hpp"

namespace erlangcev::zero_rate {

/// Integrating factor L(t) = c m t + (2b+1) mu^2 b (T t - t^2/2) / 2,
/// the antiderivative of c m + (2b+1) mu^2 b (T - t) / 2 with L(0) = 0.
double integrating_factor(const ModelParams& params, double t);

/// Optimal investment amount (mu + mu^2 beta (T - t)) / (sigma^2 s^{2b} m);
/// independent of surplus and phase.
double strategy(const ModelParams& params, double t, double s);

/// Verification conditions with Gamma = (4mu^2 + 12mu^3 b T + 8mu^4 b^2 T^2)/sigma^2.
ConditionReport verify_conditions(const ModelParams& params);

/// Closed-form solution of the r = 0 case. phi(t) = e^{Q_hat (t-T)} 1 e^{-L(T)},
/// psi_i = phi_i e^{L(t)}, and the value function follows the exponential
/// ansatz. Phases are 1-based.
class Solution {
public:
    Solution(ModelParams params, ClaimDistribution dist, PhaseIntensities phases);

    Eigen::VectorXd phi(double t) const;
    double psi(double t, int phase) const;
    double value(double t, double x, double s, int phase) const;

    double zeta() const { return zeta_; }
    int n() const { return phases_.n(); }
    const ModelParams& params() const { return params_; }
    const PhaseIntensities& phases() const { return phases_; }

private:
    ModelParams params_;
    PhaseIntensities phases_;
    double zeta_;  // E[e^{mY}]
    double l_horizon_;
    Eigen::MatrixXd q_hat_;
};

}  // namespace erlangcev::zero_rate
