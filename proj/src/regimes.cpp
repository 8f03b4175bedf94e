#include "coxcap/regimes.hpp"

#include <cmath>

#include "coxcap/errors.hpp"

namespace coxcap {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::I: return "I";
        case Regime::II: return "II";
        case Regime::III: return "III";
        case Regime::IV: return "IV";
        case Regime::V: return "V";
    }
    return "?";
}

namespace {

void check_ranges(double alpha, double gamma, double delta, double nu) {
    if (!(alpha > 2.0))
        throw invalid_parameter_error("scaling_exponent: alpha must be > 2, got " +
                                      std::to_string(alpha));
    if (!(gamma >= 0.0))
        throw invalid_parameter_error("scaling_exponent: gamma must be >= 0, got " +
                                      std::to_string(gamma));
    if (!(delta > 2.0))
        throw invalid_parameter_error("scaling_exponent: delta must be > 2, got " +
                                      std::to_string(delta));
    if (!(nu > 0.0 && nu < 1.0))
        throw invalid_parameter_error("scaling_exponent: nu must be in (0,1), got " +
                                      std::to_string(nu));
}

}  // namespace

double beta_exponent(double alpha, double gamma, double delta, double nu) {
    (void)alpha;
    return 1.0 - nu - delta * (gamma - 0.5 * nu);
}

RegimeReport scaling_exponent(double alpha, double gamma, double delta, double nu) {
    check_ranges(alpha, gamma, delta, nu);

    RegimeReport rep;
    rep.beta = beta_exponent(alpha, gamma, delta, nu);

    BranchTrace& tr = rep.branch_trace;
    const double ag = alpha * gamma;
    tr.alpha_gamma_margin = 1.0 - ag;
    tr.alpha_gamma_le_one = ag <= 1.0;
    tr.alpha_margin = 3.0 - alpha;
    tr.alpha_le_three = alpha <= 3.0;

    if (tr.alpha_gamma_le_one) {
        rep.e_c = 1.0;
        rep.regime = Regime::I;
        return rep;
    }
    if (tr.alpha_le_three) {
        rep.e_c = 2.0 - ag;
        rep.regime = Regime::I;
        return rep;
    }

    const double lhs = (1.0 - 2.0 * gamma) / (alpha - 2.0);
    const double rhs = gamma - 0.5 * nu;
    tr.bandwidth_margin = lhs - rhs;
    tr.bandwidth_condition = lhs >= rhs;
    if (tr.bandwidth_condition) {
        rep.e_c = (alpha - 1.0 - ag) / (alpha - 2.0);
        rep.regime = Regime::II;
        return rep;
    }

    tr.beta_positive = rep.beta > 0.0;
    const double first = 2.0 - ag + (alpha - 3.0) * 0.5 * nu;
    const double second = tr.beta_positive
                              ? gamma + rep.beta * (alpha - 1.0) / (alpha - 2.0)
                              : gamma + rep.beta * (alpha + 1.0) / 2.0;
    tr.max_margin = first - second;
    if (first >= second) {
        // ties sit on the boundary where the label is immaterial for e_C;
        // they are deterministically filed under III
        tr.winning_term = 1;
        rep.e_c = first;
        rep.regime = Regime::III;
    } else {
        tr.winning_term = 2;
        rep.e_c = second;
        rep.regime = tr.beta_positive ? Regime::IV : Regime::V;
    }
    return rep;
}

RegimeMap regime_map(double alpha_min, double alpha_max, double gamma_min, double gamma_max,
                     int steps, double nu, double delta) {
    if (!(alpha_min <= alpha_max) || !(gamma_min <= gamma_max))
        throw invalid_parameter_error("regime_map: empty parameter range");
    if (steps < 2) throw invalid_parameter_error("regime_map: steps must be >= 2");

    RegimeMap map;
    map.alphas.reserve(steps);
    map.gammas.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / (steps - 1);
        map.alphas.push_back(alpha_min + t * (alpha_max - alpha_min));
        map.gammas.push_back(gamma_min + t * (gamma_max - gamma_min));
    }
    map.cells.reserve(static_cast<std::size_t>(steps) * steps);
    for (double a : map.alphas)
        for (double g : map.gammas)
            map.cells.push_back(scaling_exponent(a, g, delta, nu));
    return map;
}

}  // namespace coxcap
