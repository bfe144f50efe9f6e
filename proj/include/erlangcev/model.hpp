#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace erlangcev {

/// Market and preference constants. Units: rates in 1/year, c in
/// currency/year, m in 1/currency, T in years.
struct ModelParams {
    double mu;     // risky drift, must exceed r
    double r;      // risk-free rate, >= 0
    double sigma;  // volatility scale, > 0
    double beta;   // CEV elasticity, >= 0 (0 recovers GBM)
    double c;      // premium rate, > 0
    double m;      // absolute risk aversion, > 0
    double T;      // horizon, > 0
};

/// Thrown when E[e^{theta Y}] does not exist at the requested argument.
class DivergentMgf : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExponentialClaim {
    double kappa;  // rate, > 0
};

struct UniformClaim {
    double a;  // lower support, >= 0
    double b;  // upper support, > a
};

struct DeterministicClaim {
    double y;  // fixed claim size, >= 0
};

/// Tabulated density on a uniform grid of claim sizes; MGF and moments
/// are evaluated by composite Simpson quadrature. The table is
/// normalized internally, so mgf(., 0) == 1 regardless of how well the
/// samples integrate to one.
struct TableClaim {
    std::vector<double> y;    // ascending, uniformly spaced, >= 0
    std::vector<double> pdf;  // density samples, same length as y
};

using ClaimDistribution =
    std::variant<ExponentialClaim, UniformClaim, DeterministicClaim, TableClaim>;

/// E[e^{theta Y}]. Throws DivergentMgf outside the convergence domain.
double mgf(const ClaimDistribution& dist, double theta);

/// E[Y], used by the net-profit condition.
double claim_mean(const ClaimDistribution& dist);

/// The vector (lambda_1, ..., lambda_n) of the Erlang(n) phase chain.
struct PhaseIntensities {
    std::vector<double> lambdas;

    int n() const { return static_cast<int>(lambdas.size()); }
    double max_lambda() const;
    /// Sum of 1/lambda_i: the mean interclaim time.
    double mean_interclaim() const;
};

/// z(t) = E[e^{m Y e^{r(T-t)}}]; nonincreasing in t, >= 1.
double z_of_t(const ClaimDistribution& dist, const ModelParams& params, double t);

struct ValidationCheck {
    std::string name;
    bool passed;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const;
};

/// Checks the model assumptions: basic parameter domain, mu > r, the
/// net-profit condition c > E(Y)/sum(1/lambda_i), MGF finiteness at
/// m e^{rT}, and for exponential claims m e^{rT} < kappa. Returns a
/// report; callers decide whether failures are fatal.
ValidationReport validate(const ModelParams& params, const ClaimDistribution& dist,
                          const PhaseIntensities& phases);

}  // namespace erlangcev
