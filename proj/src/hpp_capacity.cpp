#include "coxcap/hpp_capacity.hpp"

#include <cmath>
#include <string>

#include "coxcap/errors.hpp"

namespace coxcap {

void HppParams::validate() const {
    if (!(edge > 0.0))
        throw invalid_parameter_error("HppParams: edge must be > 0, got " + std::to_string(edge));
    if (!(psi >= 0.0))
        throw invalid_parameter_error("HppParams: psi must be >= 0, got " + std::to_string(psi));
    if (!(alpha > 2.0))
        throw invalid_parameter_error("HppParams: alpha must be > 2, got " + std::to_string(alpha));
    if (!(epsilon >= 0.0 && epsilon < 0.1))
        throw invalid_parameter_error("HppParams: epsilon must be in [0, 0.1), got " +
                                      std::to_string(epsilon));
}

int select_case(const HppParams& hpp) {
    hpp.validate();
    const double nbar = hpp.nbar();
    const double l_alpha = std::pow(hpp.edge, hpp.alpha);
    if (nbar >= l_alpha) return 1;
    if (hpp.alpha < 3.0) return 2;
    if (hpp.psi > 1.0) return 3;
    return 4;
}

CapacityEstimate hpp_capacity(const HppParams& hpp) {
    CapacityEstimate est;
    est.case_id = select_case(hpp);
    est.nbar = hpp.nbar();
    if (hpp.psi == 0.0) {
        est.value = 0.0;
        return est;
    }
    const double nbar = est.nbar;
    switch (est.case_id) {
        case 1:
            est.value = std::pow(nbar, 1.0 - hpp.epsilon);
            break;
        case 2:
            est.value = std::pow(nbar, 2.0 - hpp.epsilon) * std::pow(hpp.edge, -hpp.alpha);
            break;
        case 3:
            est.value = std::pow(nbar, -hpp.epsilon) * hpp.edge *
                        std::pow(hpp.psi, (hpp.alpha - 1.0) / (hpp.alpha - 2.0));
            break;
        case 4:
            est.value = std::pow(nbar, -hpp.epsilon) * hpp.edge *
                        std::pow(hpp.psi, (hpp.alpha + 1.0) / 2.0);
            break;
    }
    return est;
}

}  // namespace coxcap
