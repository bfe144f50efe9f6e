#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace erlangcev::ode_oracle {

/// Linear terminal-value problem y'(t) = A(t) y(t), y(horizon) given.
struct LinearSystem {
    int dim;
    std::function<Eigen::MatrixXd(double)> matrix;
    double horizon;
    Eigen::VectorXd terminal;
};

/// Classical RK4 from the horizon down to t_target with the given step
/// (final partial step when it does not divide the span).
Eigen::VectorXd integrate_backward(const LinearSystem& system, double t_target,
                                   double step);

/// One backward sweep returning y at every node of an ascending time
/// grid (last node <= horizon), with `substeps` RK4 steps between
/// consecutive nodes.
std::vector<Eigen::VectorXd> integrate_backward_grid(const LinearSystem& system,
                                                     const std::vector<double>& times,
                                                     int substeps);

struct OrderEstimate {
    double order;
    bool exact;  // all errors below round-off; slope meaningless
};

/// Least-squares slope of log-error versus log-step, with the finest
/// step's run as the reference.
OrderEstimate convergence_order(const LinearSystem& system, double t_target,
                                const std::vector<double>& steps);

}  // namespace erlangcev::ode_oracle
