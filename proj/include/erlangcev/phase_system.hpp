#pragma once

#include <Eigen/Dense>
#include <vector>

#include "erlangcev/model.hpp"

namespace erlangcev {

/// The n x n coupling matrix with diagonal lambda_i, superdiagonal
/// -lambda_i and bottom-left corner -lambda_n * zeta. For n = 1 the
/// diagonal and corner coincide, giving the scalar lambda_1 (1 - zeta).
Eigen::MatrixXd build_q_hat(const PhaseIntensities& phases, double zeta);

/// Same pattern with zeta replaced by z(t) evaluated at one instant.
Eigen::MatrixXd build_q_t(const PhaseIntensities& phases, double z_value);

/// e^A via scaling-and-squaring with Pade approximation (order up to 13).
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a);

/// e^{A t}.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a, double t);

struct NonnegativityReport {
    double min_entry;
    bool passed;  // min_entry >= -1e-12
};

/// Evaluates e^{Q_hat tau} for each tau <= 0 in the grid and reports the
/// smallest entry seen. A genuinely negative entry would contradict the
/// killed-chain representation of the semigroup.
NonnegativityReport check_nonnegativity(const PhaseIntensities& phases, double zeta,
                                        const std::vector<double>& tau_grid);

}  // namespace erlangcev
