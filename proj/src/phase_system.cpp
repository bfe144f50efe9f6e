#include "erlangcev/phase_system.hpp"

#include <cmath>
#include <stdexcept>

namespace erlangcev {

namespace {

Eigen::MatrixXd build_pattern(const PhaseIntensities& phases, double corner_scale) {
    const int n = phases.n();
    if (n < 1) throw std::invalid_argument("need at least one phase");
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        q(i, i) = phases.lambdas[i];
        if (i + 1 < n) q(i, i + 1) = -phases.lambdas[i];
    }
    // n = 1 merges the corner into the diagonal: lambda_1 (1 - zeta).
    q(n - 1, 0) -= phases.lambdas[n - 1] * corner_scale;
    return q;
}

double one_norm(const Eigen::MatrixXd& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

Eigen::MatrixXd pade_solve(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
    return (v - u).partialPivLu().solve(v + u);
}

// Pade orders 3/5/7/9 share the same evaluation shape.
Eigen::MatrixXd expm_small(const Eigen::MatrixXd& a, const std::vector<double>& b) {
    const int n = static_cast<int>(a.rows());
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = a * a;
    Eigen::MatrixXd even = b[0] * identity;
    Eigen::MatrixXd odd = b[1] * identity;
    Eigen::MatrixXd power = identity;
    for (std::size_t k = 2; k < b.size(); k += 2) {
        power = power * a2;
        even += b[k] * power;
        if (k + 1 < b.size()) odd += b[k + 1] * power;
    }
    return pade_solve(a * odd, even);
}

Eigen::MatrixXd expm_13(const Eigen::MatrixXd& a) {
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    const int n = static_cast<int>(a.rows());
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = a * a;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a2 * a4;
    const Eigen::MatrixXd u =
        a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
             b[3] * a2 + b[1] * identity);
    const Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                              b[4] * a4 + b[2] * a2 + b[0] * identity;
    return pade_solve(u, v);
}

}  // namespace

Eigen::MatrixXd build_q_hat(const PhaseIntensities& phases, double zeta) {
    return build_pattern(phases, zeta);
}

Eigen::MatrixXd build_q_t(const PhaseIntensities& phases, double z_value) {
    return build_pattern(phases, z_value);
}

// Higham-style scaling and squaring.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix_exp needs a square matrix");
    if (!a.allFinite()) throw std::invalid_argument("matrix_exp needs finite entries");

    const double norm = one_norm(a);
    static const std::vector<double> b3 = {120, 60, 12, 1};
    static const std::vector<double> b5 = {30240, 15120, 3360, 420, 30, 1};
    static const std::vector<double> b7 = {17297280, 8648640, 1995840, 277200,
                                           25200,    1512,    56,      1};
    static const std::vector<double> b9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
    if (norm <= 1.495585217958292e-2) return expm_small(a, b3);
    if (norm <= 2.539398330063230e-1) return expm_small(a, b5);
    if (norm <= 9.504178996162932e-1) return expm_small(a, b7);
    if (norm <= 2.097847961257068) return expm_small(a, b9);

    const double theta13 = 5.371920351148152;
    int squarings = 0;
    Eigen::MatrixXd scaled = a;
    if (norm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
        scaled /= std::ldexp(1.0, squarings);
    }
    Eigen::MatrixXd result = expm_13(scaled);
    for (int k = 0; k < squarings; ++k) result = result * result;
    return result;
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a, double t) { return matrix_exp((a * t).eval()); }

NonnegativityReport check_nonnegativity(const PhaseIntensities& phases, double zeta,
                                        const std::vector<double>& tau_grid) {
    const Eigen::MatrixXd q = build_q_hat(phases, zeta);
    double min_entry = 0.0;  // tau = 0 gives the identity
    for (double tau : tau_grid) {
        const Eigen::MatrixXd e = matrix_exp(q, tau);
        min_entry = std::min(min_entry, e.minCoeff());
    }
    return {min_entry, min_entry >= -1e-12};
}

}  // namespace erlangcev
