#pragma once

namespace coxcap {

// Inputs for the homogeneous-network achievable-capacity formulas used as
// the building block for infrastructure capacities and hierarchy
// bottleneck checks. Constant prefactors are 1; downstream comparisons
// are ratio- or exponent-based.
struct HppParams {
    double edge = 1.0;     // region edge (or radius) L
    double psi = 0.0;      // intensity, nodes per unit area
    double alpha = 4.0;    // path-loss exponent
    double epsilon = 0.0;  // slack exponent, in [0, 0.1)

    double nbar() const { return psi * edge * edge; }
    void validate() const;
};

struct CapacityEstimate {
    int case_id = 0;       // 1..4
    double value = 0.0;    // bits/slot, order sense
    double nbar = 0.0;
};

// Branch selection, top-down first match:
//   1: Nbar >= L^alpha
//   2: Nbar <  L^alpha and alpha < 3
//   3: Nbar <  L^alpha and alpha >= 3 and psi > 1
//   4: alpha >= 3 and psi <= 1
// The asymptotic conditions psi = omega(1) / O(1) collapse to the numeric
// threshold psi > 1, which keeps cases 3 and 4 continuous.
int select_case(const HppParams& hpp);

// Case values:
//   1: Nbar^(1-eps)
//   2: Nbar^(2-eps) * L^-alpha
//   3: Nbar^-eps * L * psi^((alpha-1)/(alpha-2))
//   4: Nbar^-eps * L * psi^((alpha+1)/2)
// Empty system (psi = 0) yields 0.
CapacityEstimate hpp_capacity(const HppParams& hpp);

}  // namespace coxcap
