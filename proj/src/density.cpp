#include "coxcap/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "coxcap/parallel.hpp"

namespace coxcap {

std::string to_string(DensityCondition c) {
    switch (c) {
        case DensityCondition::cluster_dense: return "cluster-dense";
        case DensityCondition::cluster_sparse: return "cluster-sparse";
        case DensityCondition::critical: return "critical";
    }
    return "?";
}

double compute_dc(const ModelParams& params) {
    params.validate();
    return params.centre_spacing();
}

double compute_eta(const ModelParams& params) {
    const double m = params.cluster_count();
    return compute_dc(params) * std::sqrt(std::log(m));
}

DensityCondition classify_density_condition(const ModelParams& params) {
    params.validate();
    if (params.gamma < 0.5 * params.nu) return DensityCondition::cluster_dense;
    if (params.gamma > 0.5 * params.nu) return DensityCondition::cluster_sparse;
    return DensityCondition::critical;
}

double default_grid_resolution(const ModelParams& params) {
    return std::min(0.1, compute_dc(params) / 10.0);
}

namespace {

template <typename Field>
IntensityExtrema grid_extrema(const Topology& topology, double grid_resolution, Field field) {
    if (!(grid_resolution > 0.0) || grid_resolution > topology.edge)
        throw invalid_parameter_error("intensity_extrema: grid_resolution must be in (0, L], got " +
                                      std::to_string(grid_resolution));
    if (topology.centres.empty()) return {0.0, 0.0};

    const double edge = topology.edge;
    const std::size_t steps =
        static_cast<std::size_t>(std::ceil(edge / grid_resolution - 1e-12));

    std::vector<double> row_min(steps, std::numeric_limits<double>::infinity());
    std::vector<double> row_max(steps, -std::numeric_limits<double>::infinity());

    parallel_for_blocks(steps, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double x = static_cast<double>(i) * grid_resolution;
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t j = 0; j < steps; ++j) {
                const double y = static_cast<double>(j) * grid_resolution;
                const double v = field(topology, Point{x, y});
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            row_min[i] = lo;
            row_max[i] = hi;
        }
    });

    IntensityExtrema ex;
    ex.phi_inf = *std::min_element(row_min.begin(), row_min.end());
    ex.phi_sup = *std::max_element(row_max.begin(), row_max.end());
    return ex;
}

}  // namespace

IntensityExtrema intensity_extrema(const Topology& topology, double grid_resolution) {
    return grid_extrema(topology, grid_resolution,
                        [](const Topology& t, const Point& p) { return local_intensity(t, p); });
}

IntensityExtrema sampling_intensity_extrema(const Topology& topology, double grid_resolution) {
    return grid_extrema(topology, grid_resolution, [](const Topology& t, const Point& p) {
        return sampling_intensity(t, p);
    });
}

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

}  // namespace

DensityReport verify_lemma1(const ModelParams& params, int replicas, double grid_resolution) {
    params.validate();
    if (replicas < 1)
        throw invalid_parameter_error("verify_lemma1: replicas must be >= 1");

    DensityReport report;
    report.d_c = compute_dc(params);
    report.eta = compute_eta(params);
    report.condition = classify_density_condition(params);
    report.grid_resolution = grid_resolution;
    report.replicas = replicas;

    const double m = params.cluster_count();
    const double q = params.cluster_size();
    const double L = params.edge();
    const double log_m = std::log(m);
    const double eta_arg = report.d_c * std::sqrt(std::max(log_m, 0.0));
    report.plateau_saturated = eta_arg < 1.0;

    std::vector<double> infs, sups;
    infs.reserve(replicas);
    sups.reserve(replicas);

    double fit_lower = std::numeric_limits<double>::infinity();
    double fit_upper = 0.0;

    RngStream master(params.seed);
    for (int r = 0; r < replicas; ++r) {
        ModelParams p = params;
        p.seed = master.derive(stream_tag::replica, static_cast<std::uint64_t>(r)).key();
        const Topology topo = sample_topology(p);
        const IntensityExtrema ex = intensity_extrema(topo, grid_resolution);
        infs.push_back(ex.phi_inf);
        sups.push_back(ex.phi_sup);

        if (report.condition == DensityCondition::cluster_dense) {
            fit_lower = std::min(fit_lower, ex.phi_inf * L * L / params.n);
            fit_upper = std::max(fit_upper, ex.phi_sup * L * L / params.n);
        } else if (report.condition == DensityCondition::cluster_sparse) {
            const double lower_ref = q * log_m * kernel_s(std::max(eta_arg, 0.0), params.delta);
            const double upper_ref = q * log_m;
            if (lower_ref > 0.0) fit_lower = std::min(fit_lower, ex.phi_inf / lower_ref);
            if (upper_ref > 0.0) fit_upper = std::max(fit_upper, ex.phi_sup / upper_ref);
        }
    }

    report.phi_inf = median_of(infs);
    report.phi_sup = median_of(sups);

    if (report.condition == DensityCondition::critical) {
        report.verifiable = false;  // no prediction on the boundary
        report.fit_lower = 0.0;
        report.fit_upper = 0.0;
    } else {
        report.fit_lower = std::isfinite(fit_lower) ? fit_lower : 0.0;
        report.fit_upper = fit_upper;
    }
    return report;
}

}  // namespace coxcap
