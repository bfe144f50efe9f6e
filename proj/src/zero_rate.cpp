#include "erlangcev/zero_rate.hpp"

#include <cmath>
#include <stdexcept>

#include "erlangcev/phase_system.hpp"

namespace erlangcev::zero_rate {

double integrating_factor(const ModelParams& params, double t) {
    const double drift = (2.0 * params.beta + 1.0) * params.mu * params.mu * params.beta;
    return params.c * params.m * t + drift * (params.T * t - t * t / 2.0) / 2.0;
}

double strategy(const ModelParams& params, double t, double s) {
    if (s <= 0) throw std::invalid_argument("price must be positive");
    const double numerator =
        params.mu + params.mu * params.mu * params.beta * (params.T - t);
    return numerator /
           (params.sigma * params.sigma * std::pow(s, 2.0 * params.beta) * params.m);
}

ConditionReport verify_conditions(const ModelParams& params) {
    const double mu = params.mu;
    const double gamma = (4.0 * mu * mu + 12.0 * mu * mu * mu * params.beta * params.T +
                          8.0 * mu * mu * mu * mu * params.beta * params.beta * params.T *
                              params.T) /
                         (params.sigma * params.sigma);
    return evaluate_conditions(params, gamma);
}

Solution::Solution(ModelParams params, ClaimDistribution dist, PhaseIntensities phases)
    : params_(params), phases_(std::move(phases)) {
    if (params_.r != 0.0) throw std::invalid_argument("zero-rate solver requires r = 0");
    if (phases_.n() < 1) throw std::invalid_argument("need at least one phase");
    zeta_ = mgf(dist, params_.m);
    l_horizon_ = integrating_factor(params_, params_.T);
    q_hat_ = build_q_hat(phases_, zeta_);
}

Eigen::VectorXd Solution::phi(double t) const {
    const Eigen::VectorXd terminal =
        Eigen::VectorXd::Constant(n(), std::exp(-l_horizon_));
    return matrix_exp(q_hat_, t - params_.T) * terminal;
}

double Solution::psi(double t, int phase) const {
    if (phase < 1 || phase > n()) throw std::invalid_argument("phase out of range");
    return phi(t)(phase - 1) * std::exp(integrating_factor(params_, t));
}

double Solution::value(double t, double x, double s, int phase) const {
    if (s <= 0) throw std::invalid_argument("price must be positive");
    const double exponent =
        -params_.m * x + params_.mu * params_.mu / (2.0 * params_.sigma * params_.sigma) *
                             (t - params_.T) * std::pow(s, -2.0 * params_.beta);
    return -std::exp(exponent) / params_.m * psi(t, phase);
}

}  // namespace erlangcev::zero_rate
