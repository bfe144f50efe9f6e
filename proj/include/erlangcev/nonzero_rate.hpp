#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "erlangcev/model.hpp"
#include "erlangcev/verification.hpp"

namespace erlangcev::nonzero_rate {

/// Thrown when the Picard iteration exhausts its cap; signals a
/// misconfigured grid or subinterval width.
class NoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integrating factor
///   F(t) = (cm/r) e^{rT} (1 - e^{-rt})
///        + (2b+1)(mu-r)^2 t / (4r)
///        + (2b+1)(mu-r)^2 / (8 b r^2) e^{-2brT} (1 - e^{2brt}),
/// with the analytic beta->0 limit (the last two terms cancel) taken
/// below beta = 1e-8. Requires r > 0.
double integrating_factor(const ModelParams& params, double t);

/// Optimal investment amount
///   a*(t,s) = [(mu-r) + (1 - e^{2 b r (t-T)}) (mu-r)^2/(2r)]
///             / (sigma^2 s^{2b} m e^{r(T-t)}).
/// The exponent carries (t-T); this is the sign the maximizer formula
/// produces and the one consistent with the r->0 limit mu + b mu^2 (T-t).
double strategy(const ModelParams& params, double t, double s);

/// Verification conditions with iota = 4(mu-r)^2/sigma^2.
ConditionReport verify_conditions(const ModelParams& params);

struct SubintervalStats {
    int iterations;
    double final_delta;  // sup-norm change at the last iteration
    double max_ratio;    // largest ratio of successive sup-norm changes
};

struct PicardReport {
    int subinterval_count;
    double delta;  // subinterval width, <= 1/(2 zbar lbar)
    double zbar;
    double lambdabar;
    std::vector<SubintervalStats> subintervals;
};

/// Grid solution of the time-varying phi system for r > 0. phi is
/// computed on a uniform grid, processed subinterval by subinterval
/// backward from T with the contractive decoupling map; off-grid
/// evaluation is cubic Hermite with derivatives from the ODE right-hand
/// side. Phases are 1-based.
class Solution {
public:
    Solution(ModelParams params, PhaseIntensities phases, ClaimDistribution dist,
             double grid_step);

    const std::vector<double>& grid() const { return grid_; }
    double phi_node(std::size_t node, int phase) const;
    double z_node(std::size_t node) const { return z_[node]; }

    double phi(double t, int phase) const;
    double psi(double t, int phase) const;
    double value(double t, double x, double s, int phase) const;

    const PicardReport& report() const { return report_; }
    int n() const { return phases_.n(); }
    const ModelParams& params() const { return params_; }
    const PhaseIntensities& phases() const { return phases_; }

private:
    double phi_derivative(std::size_t node, int phase) const;
    void solve_grid();

    ModelParams params_;
    PhaseIntensities phases_;
    ClaimDistribution dist_;
    std::vector<double> grid_;            // M+1 uniform nodes on [0, T]
    double step_ = 0;
    std::vector<double> z_;               // z(t) at nodes
    std::vector<std::vector<double>> phi_;  // [phase][node]
    PicardReport report_;
};

/// Builds the solution; default grid step is T/2000.
Solution picard_solve(const ModelParams& params, const PhaseIntensities& phases,
                      const ClaimDistribution& dist, double grid_step = 0.0);

}  // namespace erlangcev::nonzero_rate
