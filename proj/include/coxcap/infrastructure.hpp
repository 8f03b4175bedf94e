#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coxcap/density.hpp"
#include "coxcap/regimes.hpp"
#include "coxcap/topology.hpp"

namespace coxcap {

enum class InfrastructureKind { dense, clusters_core, sparse };

std::string to_string(InfrastructureKind k);

struct Infrastructure {
    InfrastructureKind kind = InfrastructureKind::dense;
    std::vector<std::size_t> members;  // node indices into the topology
    double target_intensity = 0.0;     // thinning target (empirical density for clusters-core)
    double core_radius = 0.0;          // clusters-core only
    double phi_inf_measured = 0.0;     // measured minimum intensity used by the thinning
    double phi_beta = 0.0;             // theoretical n^beta target (sparse only)
    // intensities carry the unnormalized-kernel scale; expected retained
    // count is target_intensity * L^2 / kernel_mass
    double kernel_mass = 0.0;
};

struct FlowSet {
    // pairs[i] = destination node of source node i: a uniformly random
    // permutation conditioned on having no fixed points.
    std::vector<std::size_t> destination_of;

    std::size_t size() const { return destination_of.size(); }
};

enum class Strategy {
    global_mimo = 1,        // regime I
    super_cluster = 2,      // regime II
    inter_cluster = 3,      // regime III
    sub_cluster = 4,        // regime IV
    multi_hop = 5,          // regime V
};

std::string to_string(Strategy s);

struct TransportPlan {
    Strategy strategy = Strategy::global_mimo;
    double cell_edge = 0.0;       // prescribed edge l after clamping
    InfrastructureKind infrastructure_kind = InfrastructureKind::dense;
    int cells_per_side = 1;
    bool clamped = false;     // l left [l_min, L]
    bool degenerate = false;  // clamped, or a hopping strategy collapsed to one cell
};

struct LoadReport {
    std::vector<std::uint32_t> per_cell_load;  // row-major cells_per_side^2
    int cells_per_side = 1;
    std::uint32_t max_load = 0;
    double mean_load = 0.0;
    std::vector<std::uint32_t> hop_counts;     // per flow: path length in cells
    // completed by estimate_throughput:
    double lambda = 0.0;            // per-flow rate lambda(n)
    double capacity = 0.0;          // C(n) = N * lambda(n)
    double cross_check_ratio = 0.0; // capacity / hpp_capacity(infrastructure)
    bool zero_load_degenerate = false;
    bool throughput_complete = false;
};

// Independent thinning with per-node probability phi0 / Phi(X_i); the
// retained set realizes an HPP of intensity phi0 whenever phi0 is below
// the true intensity minimum. measured_phi_inf < 0 means "measure it
// here" (grid capped at 256 points per side).
Infrastructure thin_to_hpp(const Topology& topology, double phi0, RngStream& rng,
                           double measured_phi_inf = -1.0);

// Cluster-dense main infrastructure: thinning at the measured intensity
// minimum; cardinality Theta(n).
Infrastructure dense_infrastructure(const Topology& topology);

// Nodes within torus distance R of their parent centre; cardinality Theta(n).
Infrastructure clusters_core_infrastructure(const Topology& topology, double R = 1.0);

// Cluster-sparse main infrastructure: thinning at min(measured phi_inf, n^beta).
Infrastructure sparse_infrastructure(const Topology& topology, const ModelParams& params);

// Cell edge and infrastructure choice per regime. phi_inf < 0 uses the
// closed-form intensity proxy (n^beta cluster-sparse, n/L^2 otherwise).
TransportPlan choose_transport_plan(const ModelParams& params, const RegimeReport& regime,
                                    double phi_inf = -1.0, double c_v = 1.0);

// Random flow endpoints: each node is source of exactly one flow and
// destination of exactly one, no self-pairs.
FlowSet assign_flows(const Topology& topology, RngStream& rng);

// Routes each flow along cells: horizontal ring segment first (shorter
// wrap direction), then vertical. Loads count distinct cells per flow.
LoadReport route_cells(const TransportPlan& plan, const Topology& topology,
                       const FlowSet& flows);

// Completes the report with the hop-rate model
//   cooperative: R = min(Ntx, Nrx) * min(1, P * l^-alpha * Ntx)
//   multi-hop:   R = min(1, P * l^-alpha)
// lambda = (1/3) * min over loaded cells of R/load (three equal-duration
// phases), C = N * lambda.
LoadReport estimate_throughput(const TransportPlan& plan, const Topology& topology,
                               const Infrastructure& infrastructure, const LoadReport& loads,
                               const ModelParams& params);

}  // namespace coxcap
