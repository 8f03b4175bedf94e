#pragma once

#include <stdexcept>
#include <string>

namespace coxcap {

struct invalid_parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct invalid_geometry_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when no candidate strip position satisfies emptiness + centre
// clearance. Carries the best candidate seen so the caller can decide
// whether to retry with a smaller width.
struct no_strip_found_error : std::runtime_error {
    no_strip_found_error(const std::string& what, double best_position,
                         int best_axis, std::size_t best_offending)
        : std::runtime_error(what),
          best_position(best_position),
          best_axis(best_axis),
          best_offending(best_offending) {}

    double best_position = 0.0;
    int best_axis = 0;  // 0 = vertical, 1 = horizontal
    std::size_t best_offending = 0;
};

struct infeasible_thinning_error : std::runtime_error {
    infeasible_thinning_error(const std::string& what, double measured_phi_inf)
        : std::runtime_error(what), measured_phi_inf(measured_phi_inf) {}

    double measured_phi_inf = 0.0;
};

struct wrong_condition_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct too_few_nodes_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_partition_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct supercritical_mu_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct fit_failure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace coxcap
