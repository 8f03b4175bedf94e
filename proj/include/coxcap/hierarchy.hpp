#pragma once

#include <cstdint>
#include <vector>

#include "coxcap/infrastructure.hpp"
#include "coxcap/topology.hpp"

namespace coxcap {

// One connected component of the Gilbert model at the layer's radius:
// the union of balls of radius d_k around its centres.
struct Component {
    std::vector<std::size_t> centre_indices;    // sorted
    double area = 0.0;                          // Monte Carlo estimate of the union
    double zeta = 0.0;                          // area / (M * pi * d_k^2)
    std::vector<std::size_t> nested_children;   // indices into the next layer's components
};

struct DomainLayer {
    int k = 0;
    double d_k = 0.0;       // layer radius; layer 0 covers the whole area
    double lambda_k = 0.0;  // layer intensity
    std::vector<Component> components;
    std::vector<std::size_t> infrastructure;  // thinned member node indices
};

struct Hierarchy {
    std::vector<DomainLayer> layers;  // k = 0 .. built depth
    int k_max = 1;                    // closed-form depth
    double mu = 0.0;
    bool truncated = false;  // thinning became infeasible before k_max
    int truncated_at = -1;   // first layer index that could not be built
};

// d_1 = mu * d_c, d_k = d_1 * 2^(-(k-1)/delta) for k = 1..K_max.
std::vector<double> layer_radii(const ModelParams& params);

// K_max = 1 + floor(log2(q * ln(m) / lambda1)), clamped to [1, 64].
int k_max(const ModelParams& params, double lambda1);

// Connected components of the Gilbert graph on the centres with edges at
// torus distance <= 2*d_k, via grid-bucketed union-find. Per-component
// centre lists are sorted; components ordered by smallest centre index.
std::vector<std::vector<std::size_t>> components_at_radius(const std::vector<Point>& centres,
                                                           double d_k, double edge);

struct AreaEstimate {
    double area = 0.0;
    double zeta = 0.0;
};

// Monte Carlo area of the union of balls of radius d_k around the given
// centres (one component), sampling the component's lifted bounding box.
AreaEstimate area_estimates(const std::vector<Point>& centres,
                            const std::vector<std::size_t>& component, double d_k, double edge,
                            std::size_t samples, RngStream& rng);

struct HierarchyOptions {
    std::size_t area_samples = 100000;
};

// Builds the nested-domain hierarchy for a cluster-sparse topology:
// layer 0 is the whole area carrying the main sparse infrastructure; for
// k >= 1 the members are nodes within d_k of a centre, thinned to
// lambda_k = q * d_k^-delta = 2^(k-1) * lambda_1. Layers whose lambda_k
// exceeds the measured minimum member intensity are truncated away with
// an explicit flag.
Hierarchy build_hierarchy(const Topology& topology, const ModelParams& params,
                          const HierarchyOptions& options = {});

struct BottleneckEntry {
    int layer = 0;               // parent layer k
    std::size_t parent = 0;      // component index within the parent layer
    double parent_capacity = 0.0;
    double children_capacity = 0.0;
    bool ok = true;
};

struct BottleneckReport {
    std::vector<BottleneckEntry> entries;
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::vector<double> layer_totals;
    bool layer0_is_bottleneck = true;
};

// Per-component capacities (edge = sqrt(area), psi = lambda_k, eps = 0.01)
// and the child-aggregate vs parent comparison for every parent
// component. Violations are reported, not fatal: the underlying claim is
// asymptotic.
BottleneckReport bottleneck_check(const Hierarchy& hierarchy, const ModelParams& params);

}  // namespace coxcap
