#include "erlangcev/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace erlangcev {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_table(const TableClaim& tbl) {
    if (tbl.y.size() != tbl.pdf.size() || tbl.y.size() < 3)
        throw std::invalid_argument("TableClaim needs >= 3 matching samples");
    const double h = tbl.y[1] - tbl.y[0];
    if (h <= 0) throw std::invalid_argument("TableClaim grid must ascend");
    for (std::size_t i = 1; i + 1 < tbl.y.size(); ++i) {
        const double hi = tbl.y[i + 1] - tbl.y[i];
        if (std::abs(hi - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw std::invalid_argument("TableClaim grid must be uniform");
    }
    if (tbl.y.front() < 0) throw std::invalid_argument("claim support must be nonnegative");
}

// Composite Simpson over the table; a leftover interval gets one
// trapezoid panel.
double table_quadrature(const TableClaim& tbl, const std::vector<double>& values) {
    const std::size_t m = tbl.y.size() - 1;  // interval count
    const double h = tbl.y[1] - tbl.y[0];
    double total = 0.0;
    const std::size_t pairs = m / 2;
    for (std::size_t p = 0; p < pairs; ++p) {
        const std::size_t j = 2 * p;
        total += h / 3.0 * (values[j] + 4.0 * values[j + 1] + values[j + 2]);
    }
    if (m % 2 == 1) total += h / 2.0 * (values[m - 1] + values[m]);
    return total;
}

double table_moment(const TableClaim& tbl, const std::function<double(double)>& g) {
    check_table(tbl);
    std::vector<double> num(tbl.y.size()), den(tbl.pdf);
    for (std::size_t i = 0; i < tbl.y.size(); ++i) num[i] = g(tbl.y[i]) * tbl.pdf[i];
    const double mass = table_quadrature(tbl, den);
    if (mass <= 0) throw std::invalid_argument("TableClaim density has no mass");
    return table_quadrature(tbl, num) / mass;
}

}  // namespace

double mgf(const ClaimDistribution& dist, double theta) {
    return std::visit(
        Overloaded{
            [&](const ExponentialClaim& e) -> double {
                if (theta >= e.kappa) {
                    std::ostringstream msg;
                    msg << "MGF diverges: theta = " << theta << " >= kappa = " << e.kappa;
                    throw DivergentMgf(msg.str());
                }
                return e.kappa / (e.kappa - theta);
            },
            [&](const UniformClaim& u) -> double {
                if (std::abs(theta) < 1e-8) {
                    // series branch avoids the 0/0 at theta = 0
                    const double s1 = u.a + u.b;
                    const double s2 = u.a * u.a + u.a * u.b + u.b * u.b;
                    return 1.0 + theta * s1 / 2.0 + theta * theta * s2 / 6.0;
                }
                // e^{ta}(e^{t(b-a)}-1)/(t(b-a)); expm1 keeps accuracy near 0
                const double span = theta * (u.b - u.a);
                return std::exp(theta * u.a) * std::expm1(span) / span;
            },
            [&](const DeterministicClaim& d) -> double { return std::exp(theta * d.y); },
            [&](const TableClaim& tbl) -> double {
                return table_moment(tbl, [&](double y) { return std::exp(theta * y); });
            }},
        dist);
}

double claim_mean(const ClaimDistribution& dist) {
    return std::visit(Overloaded{[](const ExponentialClaim& e) { return 1.0 / e.kappa; },
                                 [](const UniformClaim& u) { return (u.a + u.b) / 2.0; },
                                 [](const DeterministicClaim& d) { return d.y; },
                                 [](const TableClaim& tbl) {
                                     return table_moment(tbl, [](double y) { return y; });
                                 }},
                      dist);
}

double PhaseIntensities::max_lambda() const {
    return *std::max_element(lambdas.begin(), lambdas.end());
}

double PhaseIntensities::mean_interclaim() const {
    double total = 0.0;
    for (double l : lambdas) total += 1.0 / l;
    return total;
}

double z_of_t(const ClaimDistribution& dist, const ModelParams& params, double t) {
    return mgf(dist, params.m * std::exp(params.r * (params.T - t)));
}

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.passed; });
}

ValidationReport validate(const ModelParams& params, const ClaimDistribution& dist,
                          const PhaseIntensities& phases) {
    ValidationReport report;
    auto add = [&](std::string name, bool ok, std::string detail) {
        report.checks.push_back({std::move(name), ok, std::move(detail)});
    };

    {
        bool ok = params.sigma > 0 && params.beta >= 0 && params.m > 0 && params.c > 0 &&
                  params.T > 0 && params.r >= 0 && phases.n() >= 1;
        for (double l : phases.lambdas) ok = ok && l > 0;
        add("basic-domain", ok, "sigma>0, beta>=0, m>0, c>0, T>0, r>=0, lambdas>0");
    }

    {
        std::ostringstream d;
        d << "mu = " << params.mu << " vs r = " << params.r;
        add("mu-gt-r", params.mu > params.r, d.str());
    }

    {
        const double ey = claim_mean(dist);
        const double bound = ey / phases.mean_interclaim();
        std::ostringstream d;
        d << "c = " << params.c << " vs E(Y)/sum(1/lambda) = " << bound;
        add("net-profit", params.c > bound, d.str());
    }

    {
        const double theta = params.m * std::exp(params.r * params.T);
        bool ok = true;
        std::ostringstream d;
        try {
            const double v = mgf(dist, theta);
            d << "E[e^{m e^{rT} Y}] = " << v;
        } catch (const DivergentMgf& e) {
            ok = false;
            d << e.what();
        }
        add("mgf-finite", ok, d.str());
        if (const auto* e = std::get_if<ExponentialClaim>(&dist)) {
            std::ostringstream d2;
            d2 << "m e^{rT} = " << theta << " vs kappa = " << e->kappa;
            add("exponential-claim-domain", theta < e->kappa, d2.str());
        }
    }

    return report;
}

}  // namespace erlangcev
