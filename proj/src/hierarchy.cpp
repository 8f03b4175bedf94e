#include "coxcap/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "coxcap/errors.hpp"
#include "coxcap/hpp_capacity.hpp"
#include "coxcap/parallel.hpp"

namespace coxcap {

std::vector<double> layer_radii(const ModelParams& params) {
    if (!(params.mu < 0.6))
        throw supercritical_mu_error(
            "layer_radii: mu = " + std::to_string(params.mu) +
            " is at or above the percolation threshold mu* ~ 0.6");
    params.validate();
    const double d1 = params.mu * compute_dc(params);
    const double lambda1 = params.cluster_size() * std::pow(d1, -params.delta);
    const int kmax = k_max(params, lambda1);
    std::vector<double> radii;
    radii.reserve(kmax);
    for (int k = 1; k <= kmax; ++k)
        radii.push_back(d1 * std::pow(2.0, -(k - 1) / params.delta));
    return radii;
}

int k_max(const ModelParams& params, double lambda1) {
    if (!(lambda1 > 0.0))
        throw invalid_parameter_error("k_max: lambda1 must be > 0");
    const double q = params.cluster_size();
    const double log_m = std::log(params.cluster_count());
    const double ratio = q * log_m / lambda1;
    int k = 1;
    if (ratio > 1.0) k = 1 + static_cast<int>(std::floor(std::log2(ratio)));
    if (k < 1) k = 1;
    if (k > 64) k = 64;
    return k;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);  // keep the smaller index as root
        parent[b] = a;
    }
};

std::vector<std::vector<std::size_t>> groups_from(UnionFind& uf) {
    const std::size_t n = uf.parent.size();
    std::vector<std::vector<std::size_t>> by_root(n);
    for (std::size_t i = 0; i < n; ++i) by_root[uf.find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> comps;
    for (auto& g : by_root)
        if (!g.empty()) comps.push_back(std::move(g));  // already sorted and ordered by root
    return comps;
}

}  // namespace

std::vector<std::vector<std::size_t>> components_at_radius(const std::vector<Point>& centres,
                                                           double d_k, double edge) {
    if (!(d_k > 0.0))
        throw invalid_parameter_error("components_at_radius: d_k must be > 0");
    const std::size_t m = centres.size();
    if (m == 0) return {};

    UnionFind uf(m);
    const double reach = 2.0 * d_k;
    const double reach2 = reach * reach;

    const int ncell = static_cast<int>(std::floor(edge / reach));
    if (ncell < 3) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (torus_distance_squared(centres[i], centres[j], edge) <= reach2)
                    uf.unite(i, j);
        return groups_from(uf);
    }

    // grid buckets: neighbours within 2*d_k live in the 3x3 cell block
    const double cell = edge / ncell;
    std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(ncell) * ncell);
    auto bucket_of = [&](const Point& p) {
        int cx = static_cast<int>(p.x / cell);
        int cy = static_cast<int>(p.y / cell);
        if (cx >= ncell) cx = ncell - 1;
        if (cy >= ncell) cy = ncell - 1;
        return static_cast<std::size_t>(cx) * ncell + cy;
    };
    for (std::size_t i = 0; i < m; ++i) buckets[bucket_of(centres[i])].push_back(i);

    for (int cx = 0; cx < ncell; ++cx) {
        for (int cy = 0; cy < ncell; ++cy) {
            const auto& own = buckets[static_cast<std::size_t>(cx) * ncell + cy];
            if (own.empty()) continue;
            for (int ox = -1; ox <= 1; ++ox) {
                for (int oy = -1; oy <= 1; ++oy) {
                    const int nx = (cx + ox + ncell) % ncell;
                    const int ny = (cy + oy + ncell) % ncell;
                    const auto& other = buckets[static_cast<std::size_t>(nx) * ncell + ny];
                    for (std::size_t i : own)
                        for (std::size_t j : other)
                            if (i < j &&
                                torus_distance_squared(centres[i], centres[j], edge) <= reach2)
                                uf.unite(i, j);
                }
            }
        }
    }
    return groups_from(uf);
}

AreaEstimate area_estimates(const std::vector<Point>& centres,
                            const std::vector<std::size_t>& component, double d_k, double edge,
                            std::size_t samples, RngStream& rng) {
    if (samples < 10000)
        throw invalid_parameter_error("area_estimates: need at least 1e4 samples");
    AreaEstimate est;
    if (component.empty()) return est;

    // Lift the component's centres into the plane by BFS over the Gilbert
    // adjacency, so the union of balls can be sampled without wrap.
    const std::size_t s = component.size();
    std::vector<Point> lifted(s);
    std::vector<char> seen(s, 0);
    lifted[0] = centres[component[0]];
    seen[0] = 1;
    std::vector<std::size_t> queue{0};
    const double reach2 = 4.0 * d_k * d_k;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const std::size_t cur = queue[qi];
        const Point pc = centres[component[cur]];
        for (std::size_t j = 0; j < s; ++j) {
            if (seen[j]) continue;
            const Point pj = centres[component[j]];
            if (torus_distance_squared(pc, pj, edge) <= reach2) {
                lifted[j] = {lifted[cur].x + torus_delta(pc.x, pj.x, edge),
                             lifted[cur].y + torus_delta(pc.y, pj.y, edge)};
                seen[j] = 1;
                queue.push_back(j);
            }
        }
    }

    double lo_x = lifted[0].x, hi_x = lifted[0].x;
    double lo_y = lifted[0].y, hi_y = lifted[0].y;
    for (const Point& p : lifted) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    lo_x -= d_k;
    hi_x += d_k;
    lo_y -= d_k;
    hi_y += d_k;

    const double d2 = d_k * d_k;
    std::size_t hits = 0;
    if (hi_x - lo_x >= edge || hi_y - lo_y >= edge) {
        // component wraps most of the torus: sample the torus directly
        for (std::size_t i = 0; i < samples; ++i) {
            const Point p{rng.uniform(0.0, edge), rng.uniform(0.0, edge)};
            for (std::size_t j : component) {
                if (torus_distance_squared(p, centres[j], edge) <= d2) {
                    ++hits;
                    break;
                }
            }
        }
        est.area = edge * edge * static_cast<double>(hits) / static_cast<double>(samples);
    } else {
        const double box = (hi_x - lo_x) * (hi_y - lo_y);
        for (std::size_t i = 0; i < samples; ++i) {
            const double x = rng.uniform(lo_x, hi_x);
            const double y = rng.uniform(lo_y, hi_y);
            for (const Point& c : lifted) {
                const double dx = x - c.x, dy = y - c.y;
                if (dx * dx + dy * dy <= d2) {
                    ++hits;
                    break;
                }
            }
        }
        est.area = box * static_cast<double>(hits) / static_cast<double>(samples);
    }
    est.zeta = est.area / (static_cast<double>(s) * M_PI * d2);
    return est;
}

Hierarchy build_hierarchy(const Topology& topology, const ModelParams& params,
                          const HierarchyOptions& options) {
    params.validate();
    if (classify_density_condition(params) != DensityCondition::cluster_sparse)
        throw wrong_condition_error(
            "build_hierarchy requires the cluster-sparse condition (gamma > nu/2)");

    Hierarchy h;
    h.mu = params.mu;

    const double edge = topology.edge;
    const std::vector<double> radii = layer_radii(params);
    h.k_max = static_cast<int>(radii.size());
    const double lambda1 = params.cluster_size() * std::pow(radii[0], -params.delta);

    // layer 0: whole area, main sparse infrastructure
    Infrastructure main = sparse_infrastructure(topology, params);
    DomainLayer layer0;
    layer0.k = 0;
    layer0.d_k = 0.0;
    layer0.lambda_k = main.target_intensity;
    layer0.infrastructure = main.members;
    Component whole;
    whole.centre_indices.resize(topology.centre_count());
    std::iota(whole.centre_indices.begin(), whole.centre_indices.end(), std::size_t{0});
    whole.area = edge * edge;
    whole.zeta = 0.0;  // not a union of layer balls
    layer0.components.push_back(std::move(whole));
    h.layers.push_back(std::move(layer0));

    // distance to the closest centre, and the intensity, per node (reused
    // across layers)
    const std::size_t n_nodes = topology.node_count();
    std::vector<double> d_min(n_nodes, std::numeric_limits<double>::infinity());
    std::vector<double> phi(n_nodes, 0.0);
    parallel_for_blocks(n_nodes, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Point& p = topology.nodes[i].pos;
            double best = std::numeric_limits<double>::infinity();
            for (const Point& c : topology.centres)
                best = std::min(best, torus_distance_squared(p, c, edge));
            d_min[i] = std::sqrt(best);
            phi[i] = sampling_intensity(topology, p);
        }
    });

    RngStream master(params.seed);
    std::vector<std::size_t> centre_to_parent_comp;  // previous layer's component per centre

    for (int k = 1; k <= h.k_max; ++k) {
        const double d_k = radii[static_cast<std::size_t>(k - 1)];
        const double lambda_k = lambda1 * std::pow(2.0, k - 1);

        std::vector<std::size_t> member_candidates;
        double min_phi = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_nodes; ++i) {
            if (d_min[i] <= d_k) {
                member_candidates.push_back(i);
                min_phi = std::min(min_phi, phi[i]);
            }
        }
        if (!member_candidates.empty() && lambda_k > min_phi) {
            h.truncated = true;
            h.truncated_at = k;
            break;
        }

        DomainLayer layer;
        layer.k = k;
        layer.d_k = d_k;
        layer.lambda_k = lambda_k;

        RngStream layer_stream = master.derive(stream_tag::layer, static_cast<std::uint64_t>(k));
        for (std::size_t i : member_candidates) {
            const double p = phi[i] > 0.0 ? lambda_k / phi[i] : 0.0;
            if (layer_stream.derive(stream_tag::thinning, i).uniform() < p)
                layer.infrastructure.push_back(i);
        }

        const auto comps = components_at_radius(topology.centres, d_k, edge);
        layer.components.reserve(comps.size());
        RngStream area_stream = master.derive(stream_tag::area_mc, static_cast<std::uint64_t>(k));
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            Component comp;
            comp.centre_indices = comps[ci];
            RngStream comp_stream = area_stream.derive(stream_tag::area_mc, ci);
            const AreaEstimate est = area_estimates(topology.centres, comp.centre_indices, d_k,
                                                    edge, options.area_samples, comp_stream);
            comp.area = est.area;
            comp.zeta = est.zeta;
            layer.components.push_back(std::move(comp));
        }

        // containment: every component of this layer nests inside the
        // previous layer's component holding its centres
        std::vector<std::size_t> centre_to_comp(topology.centre_count(), 0);
        for (std::size_t ci = 0; ci < layer.components.size(); ++ci)
            for (std::size_t c : layer.components[ci].centre_indices) centre_to_comp[c] = ci;

        DomainLayer& prev = h.layers.back();
        if (k == 1) {
            for (std::size_t ci = 0; ci < layer.components.size(); ++ci)
                prev.components[0].nested_children.push_back(ci);
        } else {
            for (std::size_t ci = 0; ci < layer.components.size(); ++ci) {
                const std::size_t parent =
                    centre_to_parent_comp[layer.components[ci].centre_indices[0]];
                prev.components[parent].nested_children.push_back(ci);
            }
        }
        centre_to_parent_comp = std::move(centre_to_comp);
        h.layers.push_back(std::move(layer));
    }
    return h;
}

BottleneckReport bottleneck_check(const Hierarchy& hierarchy, const ModelParams& params) {
    BottleneckReport report;
    const std::size_t depth = hierarchy.layers.size();

    // capacity per component, per layer
    std::vector<std::vector<double>> caps(depth);
    for (std::size_t k = 0; k < depth; ++k) {
        const DomainLayer& layer = hierarchy.layers[k];
        caps[k].reserve(layer.components.size());
        double total = 0.0;
        for (const Component& comp : layer.components) {
            HppParams hpp;
            hpp.edge = std::sqrt(std::max(comp.area, 0.0));
            hpp.psi = layer.lambda_k;
            hpp.alpha = params.alpha;
            hpp.epsilon = 0.01;
            const double value = hpp.edge > 0.0 ? hpp_capacity(hpp).value : 0.0;
            caps[k].push_back(value);
            total += value;
        }
        report.layer_totals.push_back(total);
    }

    for (std::size_t k = 0; k + 1 < depth; ++k) {
        const DomainLayer& layer = hierarchy.layers[k];
        for (std::size_t ci = 0; ci < layer.components.size(); ++ci) {
            const Component& comp = layer.components[ci];
            if (comp.nested_children.empty()) continue;
            double child_sum = 0.0;
            for (std::size_t child : comp.nested_children) child_sum += caps[k + 1][child];
            BottleneckEntry entry;
            entry.layer = static_cast<int>(k);
            entry.parent = ci;
            entry.parent_capacity = caps[k][ci];
            entry.children_capacity = child_sum;
            entry.ok = child_sum >= caps[k][ci];
            report.checks++;
            if (!entry.ok) report.violations++;
            report.entries.push_back(entry);
        }
    }

    for (std::size_t k = 1; k < report.layer_totals.size(); ++k)
        if (report.layer_totals[k] < report.layer_totals[0]) report.layer0_is_bottleneck = false;
    return report;
}

}  // namespace coxcap
