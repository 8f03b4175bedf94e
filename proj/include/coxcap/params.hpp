#pragma once

#include <cmath>
#include <cstdint>

#include "coxcap/errors.hpp"

namespace coxcap {

// Scaling-law parameter tuple plus simulation knobs. The derived scales
// (edge, cluster count, cluster size, centre spacing) are computed on
// demand so they can never drift out of sync with the exponents.
struct ModelParams {
    double n = 1e4;          // expected node count
    double gamma = 0.25;     // area exponent, edge = n^gamma
    double nu = 0.5;         // cluster exponent, m = n^nu, q = n^(1-nu)
    double delta = 2.5;      // kernel decay exponent
    double alpha = 4.0;      // path-loss exponent
    double power = 1.0;      // per-node power budget
    double mu = 0.5;         // hierarchy radius constant, d1 = mu * d_c
    std::uint64_t seed = 1;  // master reproducibility seed

    double edge() const { return std::pow(n, gamma); }
    double cluster_count() const { return std::pow(n, nu); }
    double cluster_size() const { return std::pow(n, 1.0 - nu); }
    // Typical centre spacing d_c = L / sqrt(m) = n^(gamma - nu/2).
    double centre_spacing() const { return std::pow(n, gamma - 0.5 * nu); }

    void validate() const;
};

struct ChannelParams {
    double gain = 1.0;    // constant gain G
    double noise = 1.0;   // noise variance N0 per symbol
    double alpha = 4.0;   // path-loss exponent, mirrors ModelParams.alpha

    void validate() const;
};

inline void ModelParams::validate() const {
    if (!(n >= 1.0))
        throw invalid_parameter_error("n must be >= 1, got " + std::to_string(n));
    if (!(gamma >= 0.0))
        throw invalid_parameter_error("gamma must be >= 0, got " + std::to_string(gamma));
    if (!(nu > 0.0 && nu < 1.0))
        throw invalid_parameter_error("nu must be in (0,1), got " + std::to_string(nu));
    if (!(delta > 2.0))
        throw invalid_parameter_error("delta must be > 2, got " + std::to_string(delta));
    if (!(alpha > 2.0))
        throw invalid_parameter_error("alpha must be > 2, got " + std::to_string(alpha));
    if (!(mu > 0.0 && mu < 0.6))
        throw invalid_parameter_error("mu must be in (0, 0.6), got " + std::to_string(mu));
    if (!(power > 0.0))
        throw invalid_parameter_error("power must be > 0, got " + std::to_string(power));
}

inline void ChannelParams::validate() const {
    if (!(gain > 0.0))
        throw invalid_parameter_error("gain must be > 0, got " + std::to_string(gain));
    if (!(noise > 0.0))
        throw invalid_parameter_error("noise must be > 0, got " + std::to_string(noise));
    if (!(alpha > 2.0))
        throw invalid_parameter_error("alpha must be > 2, got " + std::to_string(alpha));
}

}  // namespace coxcap
