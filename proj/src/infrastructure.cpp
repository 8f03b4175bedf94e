#include "coxcap/infrastructure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coxcap/errors.hpp"
#include "coxcap/hpp_capacity.hpp"
#include "coxcap/parallel.hpp"

namespace coxcap {

std::string to_string(InfrastructureKind k) {
    switch (k) {
        case InfrastructureKind::dense: return "dense";
        case InfrastructureKind::clusters_core: return "clusters-core";
        case InfrastructureKind::sparse: return "sparse";
    }
    return "?";
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::global_mimo: return "I-global-MIMO";
        case Strategy::super_cluster: return "II-super-cluster";
        case Strategy::inter_cluster: return "III-inter-cluster";
        case Strategy::sub_cluster: return "IV-sub-cluster";
        case Strategy::multi_hop: return "V-multi-hop";
    }
    return "?";
}

namespace {

double capped_grid_resolution(const ModelParams& params) {
    double res = std::max(default_grid_resolution(params), params.edge() / 256.0);
    return std::min(res, params.edge());
}

// Independent retention of the given nodes at probability target/Phi(X_i).
std::vector<std::size_t> thin_members(const Topology& topology,
                                      const std::vector<std::size_t>& candidates,
                                      double target_intensity, const RngStream& rng) {
    std::vector<char> keep(candidates.size(), 0);
    parallel_for_blocks(candidates.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t node = candidates[i];
            const double phi = sampling_intensity(topology, topology.nodes[node].pos);
            const double p = phi > 0.0 ? std::min(1.0, target_intensity / phi) : 0.0;
            RngStream node_stream = rng.derive(stream_tag::thinning, node);
            keep[i] = node_stream.uniform() < p ? 1 : 0;
        }
    });
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (keep[i]) members.push_back(candidates[i]);
    return members;
}

std::vector<std::size_t> all_node_indices(const Topology& topology) {
    std::vector<std::size_t> idx(topology.node_count());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return idx;
}

}  // namespace

Infrastructure thin_to_hpp(const Topology& topology, double phi0, RngStream& rng,
                           double measured_phi_inf) {
    if (!(phi0 >= 0.0))
        throw invalid_parameter_error("thin_to_hpp: phi0 must be >= 0");
    if (measured_phi_inf < 0.0) {
        measured_phi_inf =
            topology.centres.empty()
                ? 0.0
                : sampling_intensity_extrema(topology,
                                             capped_grid_resolution(topology.params))
                      .phi_inf;
    }
    if (phi0 > 0.0 && phi0 > measured_phi_inf)
        throw infeasible_thinning_error(
            "thin_to_hpp: phi0 = " + std::to_string(phi0) +
                " exceeds the measured intensity minimum " + std::to_string(measured_phi_inf),
            measured_phi_inf);

    Infrastructure infra;
    infra.kind = InfrastructureKind::dense;
    infra.target_intensity = phi0;
    infra.phi_inf_measured = measured_phi_inf;
    infra.kernel_mass = kernel_normalization(topology.params);
    if (phi0 > 0.0)
        infra.members = thin_members(topology, all_node_indices(topology), phi0, rng);
    return infra;
}

Infrastructure dense_infrastructure(const Topology& topology) {
    const ModelParams& params = topology.params;
    if (classify_density_condition(params) != DensityCondition::cluster_dense)
        throw wrong_condition_error(
            "dense_infrastructure requires the cluster-dense condition (gamma < nu/2)");
    const double phi_inf =
        topology.centres.empty()
            ? 0.0
            : sampling_intensity_extrema(topology, capped_grid_resolution(params)).phi_inf;
    RngStream rng = RngStream(params.seed).derive(stream_tag::thinning, 0);
    Infrastructure infra = thin_to_hpp(topology, phi_inf, rng, phi_inf);
    infra.kind = InfrastructureKind::dense;
    return infra;
}

Infrastructure clusters_core_infrastructure(const Topology& topology, double R) {
    if (!(R > 0.0))
        throw invalid_parameter_error("clusters_core_infrastructure: R must be > 0");
    Infrastructure infra;
    infra.kind = InfrastructureKind::clusters_core;
    infra.core_radius = R;
    const double edge = topology.edge;
    for (std::size_t i = 0; i < topology.node_count(); ++i) {
        const Node& nd = topology.nodes[i];
        if (torus_distance(nd.pos, topology.centres[nd.parent], edge) <= R)
            infra.members.push_back(i);
    }
    // not an HPP; record the empirical density for capacity cross-checks
    infra.target_intensity = static_cast<double>(infra.members.size()) / (edge * edge);
    return infra;
}

Infrastructure sparse_infrastructure(const Topology& topology, const ModelParams& params) {
    if (classify_density_condition(params) != DensityCondition::cluster_sparse)
        throw wrong_condition_error(
            "sparse_infrastructure requires the cluster-sparse condition (gamma > nu/2)");
    const double beta = beta_exponent(params.alpha, params.gamma, params.delta, params.nu);
    const double phi_beta = std::pow(params.n, beta);
    const double phi_inf =
        topology.centres.empty()
            ? 0.0
            : sampling_intensity_extrema(topology, capped_grid_resolution(params)).phi_inf;
    const double phi0 = std::min(phi_inf, phi_beta);
    RngStream rng = RngStream(params.seed).derive(stream_tag::thinning, 1);
    Infrastructure infra = thin_to_hpp(topology, phi0, rng, phi_inf);
    infra.kind = InfrastructureKind::sparse;
    infra.phi_beta = phi_beta;
    return infra;
}

TransportPlan choose_transport_plan(const ModelParams& params, const RegimeReport& regime,
                                    double phi_inf, double c_v) {
    params.validate();
    const double L = params.edge();
    const double dc = compute_dc(params);
    const double log_n = std::log(params.n);
    const DensityCondition condition = classify_density_condition(params);

    if (phi_inf < 0.0) {
        // closed-form intensity proxy
        phi_inf = condition == DensityCondition::cluster_sparse
                      ? std::pow(params.n, regime.beta)
                      : params.n / (L * L);
    }
    const double phi0 = condition == DensityCondition::cluster_sparse
                            ? std::min(phi_inf, std::pow(params.n, regime.beta))
                            : phi_inf;

    TransportPlan plan;
    plan.strategy = static_cast<Strategy>(static_cast<int>(regime.regime));

    double l = L;
    double relevant_intensity = params.n / (L * L);
    switch (plan.strategy) {
        case Strategy::global_mimo:
            l = L;
            break;
        case Strategy::super_cluster:
            l = dc * log_n;
            break;
        case Strategy::inter_cluster:
            l = dc * std::sqrt(log_n);
            break;
        case Strategy::sub_cluster:
            // geometric mean: o(d_c) and omega(phi_inf^-1/2)
            l = std::sqrt(dc / std::sqrt(std::max(phi_inf, 1e-300)));
            relevant_intensity = phi0;
            break;
        case Strategy::multi_hop:
            l = c_v * std::sqrt(log_n) / std::sqrt(std::max(phi0, 1e-300));
            relevant_intensity = phi0;
            break;
    }

    switch (plan.strategy) {
        case Strategy::global_mimo:
        case Strategy::super_cluster:
            plan.infrastructure_kind = condition == DensityCondition::cluster_sparse
                                           ? InfrastructureKind::clusters_core
                                           : InfrastructureKind::dense;
            break;
        case Strategy::inter_cluster:
            plan.infrastructure_kind = InfrastructureKind::clusters_core;
            break;
        case Strategy::sub_cluster:
        case Strategy::multi_hop:
            plan.infrastructure_kind = InfrastructureKind::sparse;
            break;
    }

    // clamp to [smallest edge with expected >= 1 member per cell, L]
    const double l_min =
        relevant_intensity > 0.0 ? 1.0 / std::sqrt(relevant_intensity) : L;
    double clamped_l = std::min(std::max(l, std::min(l_min, L)), L);
    plan.clamped = clamped_l != l;
    plan.cell_edge = clamped_l;
    plan.cells_per_side = std::max(1, static_cast<int>(std::lround(L / clamped_l)));
    plan.degenerate =
        plan.clamped || (plan.cells_per_side == 1 && plan.strategy != Strategy::global_mimo);
    return plan;
}

FlowSet assign_flows(const Topology& topology, RngStream& rng) {
    const std::size_t n = topology.node_count();
    if (n < 2)
        throw too_few_nodes_error("assign_flows: need at least 2 nodes, have " +
                                  std::to_string(n));
    FlowSet flows;
    flows.destination_of.resize(n);

    // Rejection: uniform permutations until none has a fixed point. The
    // acceptance probability is >= 1/3 for every n >= 2.
    for (int attempt = 0; attempt < 256; ++attempt) {
        for (std::size_t i = 0; i < n; ++i) flows.destination_of[i] = i;
        for (std::size_t i = n - 1; i > 0; --i) {
            const std::size_t j = rng.uniform_index(i + 1);
            std::swap(flows.destination_of[i], flows.destination_of[j]);
        }
        bool fixed_point = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (flows.destination_of[i] == i) {
                fixed_point = true;
                break;
            }
        }
        if (!fixed_point) return flows;
    }
    // unreachable in practice; fall back to a cyclic shift
    for (std::size_t i = 0; i < n; ++i) flows.destination_of[i] = (i + 1) % n;
    return flows;
}

namespace {

inline int cell_of(double coord, double edge_eff, int cps) {
    int c = static_cast<int>(coord / edge_eff);
    return c >= cps ? cps - 1 : c;
}

// shorter wrap direction: +1 forward, -1 backward; forward on ties
inline int ring_step(int from, int to, int cps) {
    const int fwd = (to - from + cps) % cps;
    const int bwd = cps - fwd;
    return fwd <= bwd ? 1 : -1;
}

}  // namespace

LoadReport route_cells(const TransportPlan& plan, const Topology& topology,
                       const FlowSet& flows) {
    if (plan.cells_per_side < 1)
        throw invalid_parameter_error("route_cells: cells_per_side must be >= 1");
    const int cps = plan.cells_per_side;
    const double edge_eff = topology.edge / cps;

    LoadReport report;
    report.cells_per_side = cps;
    report.per_cell_load.assign(static_cast<std::size_t>(cps) * cps, 0);
    report.hop_counts.reserve(flows.size());

    for (std::size_t src = 0; src < flows.size(); ++src) {
        const std::size_t dst = flows.destination_of[src];
        const int sx = cell_of(topology.nodes[src].pos.x, edge_eff, cps);
        const int sy = cell_of(topology.nodes[src].pos.y, edge_eff, cps);
        const int dx = cell_of(topology.nodes[dst].pos.x, edge_eff, cps);
        const int dy = cell_of(topology.nodes[dst].pos.y, edge_eff, cps);

        std::uint32_t cells_visited = 0;
        // horizontal segment at the source row, then vertical at the
        // destination column; the corner cell is visited once
        int cx = sx;
        const int step_x = ring_step(sx, dx, cps);
        while (true) {
            report.per_cell_load[static_cast<std::size_t>(cx) * cps + sy]++;
            ++cells_visited;
            if (cx == dx) break;
            cx = (cx + step_x + cps) % cps;
        }
        int cy = sy;
        const int step_y = ring_step(sy, dy, cps);
        while (cy != dy) {
            cy = (cy + step_y + cps) % cps;
            report.per_cell_load[static_cast<std::size_t>(dx) * cps + cy]++;
            ++cells_visited;
        }
        report.hop_counts.push_back(cells_visited);
    }

    std::uint64_t total = 0;
    for (std::uint32_t v : report.per_cell_load) {
        total += v;
        report.max_load = std::max(report.max_load, v);
    }
    report.mean_load = static_cast<double>(total) / report.per_cell_load.size();
    return report;
}

LoadReport estimate_throughput(const TransportPlan& plan, const Topology& topology,
                               const Infrastructure& infrastructure, const LoadReport& loads,
                               const ModelParams& params) {
    LoadReport report = loads;
    const int cps = plan.cells_per_side;
    const double edge_eff = topology.edge / cps;

    std::vector<std::uint32_t> members(static_cast<std::size_t>(cps) * cps, 0);
    for (std::size_t idx : infrastructure.members) {
        const int cx = cell_of(topology.nodes[idx].pos.x, edge_eff, cps);
        const int cy = cell_of(topology.nodes[idx].pos.y, edge_eff, cps);
        members[static_cast<std::size_t>(cx) * cps + cy]++;
    }

    const double link_gain = params.power * std::pow(edge_eff, -params.alpha);
    auto hop_rate = [&](int cx, int cy) {
        if (plan.strategy == Strategy::multi_hop) return std::min(1.0, link_gain);
        const double ntx = members[static_cast<std::size_t>(cx) * cps + cy];
        if (ntx == 0.0) return 0.0;
        double nrx = ntx;
        const int xm = (cx + cps - 1) % cps, xp = (cx + 1) % cps;
        const int ym = (cy + cps - 1) % cps, yp = (cy + 1) % cps;
        nrx = std::min(nrx, static_cast<double>(members[static_cast<std::size_t>(xm) * cps + cy]));
        nrx = std::min(nrx, static_cast<double>(members[static_cast<std::size_t>(xp) * cps + cy]));
        nrx = std::min(nrx, static_cast<double>(members[static_cast<std::size_t>(cx) * cps + ym]));
        nrx = std::min(nrx, static_cast<double>(members[static_cast<std::size_t>(cx) * cps + yp]));
        if (cps == 1) nrx = ntx;
        return std::min(ntx, nrx) * std::min(1.0, link_gain * ntx);
    };

    double lambda = std::numeric_limits<double>::infinity();
    double max_rate = 0.0;
    bool any_loaded = false;
    for (int cx = 0; cx < cps; ++cx) {
        for (int cy = 0; cy < cps; ++cy) {
            const double rate = hop_rate(cx, cy);
            max_rate = std::max(max_rate, rate);
            const std::uint32_t load = report.per_cell_load[static_cast<std::size_t>(cx) * cps + cy];
            if (load > 0) {
                any_loaded = true;
                lambda = std::min(lambda, rate / load);
            }
        }
    }
    if (!any_loaded) {
        // lambda is undefined without traffic; report the capped sentinel
        report.zero_load_degenerate = true;
        lambda = max_rate;
    }
    report.lambda = lambda / 3.0;  // three phases of equal duration
    report.capacity = static_cast<double>(topology.node_count()) * report.lambda;

    HppParams hpp;
    hpp.edge = topology.edge;
    hpp.psi = infrastructure.target_intensity;
    hpp.alpha = params.alpha;
    hpp.epsilon = 0.0;
    const double reference = hpp_capacity(hpp).value;
    report.cross_check_ratio = reference > 0.0 ? report.capacity / reference : 0.0;
    report.throughput_complete = true;
    return report;
}

}  // namespace coxcap
