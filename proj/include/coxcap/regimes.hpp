#pragma once

#include <string>
#include <vector>

namespace coxcap {

enum class Regime { I = 1, II, III, IV, V };

std::string to_string(Regime r);

// Conditions evaluated on the way to a regime, with signed margins so
// callers can spot fragile classifications near a boundary.
struct BranchTrace {
    bool alpha_gamma_le_one = false;
    double alpha_gamma_margin = 0.0;  // 1 - alpha*gamma
    bool alpha_le_three = false;
    double alpha_margin = 0.0;        // 3 - alpha
    bool bandwidth_condition = false; // (1-2*gamma)/(alpha-2) >= gamma - nu/2
    double bandwidth_margin = 0.0;    // lhs - rhs
    bool beta_positive = false;
    int winning_term = 0;             // 0: no max involved, 1: first term, 2: second
    double max_margin = 0.0;          // first - second, when a max was evaluated
};

struct RegimeReport {
    double beta = 0.0;
    double e_c = 0.0;
    Regime regime = Regime::I;
    BranchTrace branch_trace;
};

// beta = 1 - nu - delta*(gamma - nu/2)
double beta_exponent(double alpha, double gamma, double delta, double nu);

// Capacity scaling exponent and regime. Branch conditions are compared
// exactly (no epsilon); ties at the max are labelled III.
RegimeReport scaling_exponent(double alpha, double gamma, double delta, double nu);

struct RegimeMap {
    std::vector<double> alphas;
    std::vector<double> gammas;
    std::vector<RegimeReport> cells;  // row-major: cells[a * gammas.size() + g]

    const RegimeReport& at(std::size_t a, std::size_t g) const {
        return cells[a * gammas.size() + g];
    }
};

// Rasterizes scaling_exponent over [alpha_min, alpha_max] x [gamma_min,
// gamma_max] with `steps` points per axis, endpoints included.
RegimeMap regime_map(double alpha_min, double alpha_max, double gamma_min, double gamma_max,
                     int steps, double nu, double delta);

}  // namespace coxcap
