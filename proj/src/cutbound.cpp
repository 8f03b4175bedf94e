#include "coxcap/cutbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coxcap/errors.hpp"
#include "coxcap/parallel.hpp"

namespace coxcap {

std::string to_string(StripAxis a) {
    return a == StripAxis::vertical ? "vertical" : "horizontal";
}

double strip_width(const ModelParams& params, DensityCondition condition, double c_delta) {
    params.validate();
    if (!(c_delta > 0.0))
        throw invalid_parameter_error("strip_width: c_delta must be > 0");
    if (condition == DensityCondition::cluster_sparse) {
        const double q = params.cluster_size();
        const double dc = compute_dc(params);
        const double s_dc = kernel_s(dc, params.delta);
        return c_delta / std::sqrt(q * s_dc * std::log(params.n));
    }
    // cluster-dense; the critical condition falls back here as well
    return c_delta * params.edge() / std::sqrt(params.n);
}

namespace {

// Statistics of sorted coordinates inside a (possibly wrapped) arc
// starting at `a`: element count and the largest offset (x - a) mod L.
struct ArcStats {
    std::size_t count = 0;
    double max_rel = 0.0;
};

ArcStats arc_stats(const std::vector<double>& sorted, double a, double len, double edge,
                   bool closed_end) {
    ArcStats st;
    if (sorted.empty() || len <= 0.0) return st;
    if (len >= edge) {
        st.count = sorted.size();
        st.max_rel = len;
        return st;
    }
    a = wrap_coordinate(a, edge);
    const double end = a + len;

    auto piece = [&](double lo, double hi, double rel_shift) {
        auto it_lo = std::lower_bound(sorted.begin(), sorted.end(), lo);
        auto it_hi = closed_end ? std::upper_bound(sorted.begin(), sorted.end(), hi)
                                : std::lower_bound(sorted.begin(), sorted.end(), hi);
        if (it_lo < it_hi) {
            st.count += static_cast<std::size_t>(it_hi - it_lo);
            st.max_rel = std::max(st.max_rel, *(it_hi - 1) - a + rel_shift);
        }
    };

    if (end <= edge) {
        piece(a, end, 0.0);
    } else {
        piece(a, edge, 0.0);
        piece(0.0, end - edge, edge);
    }
    return st;
}

double axis_coord(const Node& n, StripAxis axis) {
    return axis == StripAxis::vertical ? n.pos.x : n.pos.y;
}
double axis_coord(const Point& p, StripAxis axis) {
    return axis == StripAxis::vertical ? p.x : p.y;
}
double off_axis_coord(const Point& p, StripAxis axis) {
    return axis == StripAxis::vertical ? p.y : p.x;
}

struct CutPartition {
    std::vector<std::size_t> sources;
    std::vector<std::size_t> dests;
};

// Splits the nodes into the two rings delimited by the strip and its
// antipodal twin. Throws if any node sits inside a strip interior or a
// centre violates the clearance.
CutPartition partition_nodes(const Topology& topology, const CutStrip& strip) {
    const double L = topology.edge;
    const double w = strip.width;
    const double half = 0.5 * L;
    CutPartition part;
    part.sources.reserve(topology.nodes.size() / 2 + 1);
    part.dests.reserve(topology.nodes.size() / 2 + 1);

    for (std::size_t i = 0; i < topology.nodes.size(); ++i) {
        double rel = std::fmod(axis_coord(topology.nodes[i], strip.axis) - strip.position, L);
        if (rel < 0.0) rel += L;
        if (rel < w || (rel >= half && rel < half + w))
            throw invalid_partition_error("cut strip interior contains node " +
                                          std::to_string(i));
        if (rel < half)
            part.sources.push_back(i);
        else
            part.dests.push_back(i);
    }
    for (std::size_t j = 0; j < topology.centres.size(); ++j) {
        const double cc = axis_coord(topology.centres[j], strip.axis);
        const double d1 = circle_point_to_arc_distance(cc, strip.position, w, L);
        const double d2 =
            circle_point_to_arc_distance(cc, strip.position + half, w, L);
        if (!(d1 > strip.clearance) || !(d2 > strip.clearance))
            throw invalid_partition_error("cut strip violates centre clearance at centre " +
                                          std::to_string(j));
    }
    return part;
}

// d^-alpha on squared distances, with fast paths for the common
// half-integer exponents.
enum class PowKind { generic, a25, a3, a35, a4, a5, a6 };

PowKind classify_pow(double alpha) {
    if (alpha == 2.5) return PowKind::a25;
    if (alpha == 3.0) return PowKind::a3;
    if (alpha == 3.5) return PowKind::a35;
    if (alpha == 4.0) return PowKind::a4;
    if (alpha == 5.0) return PowKind::a5;
    if (alpha == 6.0) return PowKind::a6;
    return PowKind::generic;
}

template <PowKind K>
inline double inv_pow_r2(double r2, double half_alpha) {
    if constexpr (K == PowKind::a25) return 1.0 / (r2 * std::sqrt(std::sqrt(r2)));
    if constexpr (K == PowKind::a3) return 1.0 / (r2 * std::sqrt(r2));
    if constexpr (K == PowKind::a35)
        return 1.0 / (r2 * std::sqrt(r2) * std::sqrt(std::sqrt(r2)));
    if constexpr (K == PowKind::a4) return 1.0 / (r2 * r2);
    if constexpr (K == PowKind::a5) return 1.0 / (r2 * r2 * std::sqrt(r2));
    if constexpr (K == PowKind::a6) return 1.0 / (r2 * r2 * r2);
    return std::pow(r2, -half_alpha);
}

template <PowKind K>
void row_sums_impl(const std::vector<double>& sx, const std::vector<double>& sy,
                   const std::vector<double>& dx, const std::vector<double>& dy, double L,
                   double half_alpha, std::vector<double>& rows) {
    const std::size_t nd = dx.size();
    // branch-free wrap keeps the loop body straight-line; coordinates are
    // in [0, L) so min(|d|, L - |d|) is the wrap distance
    parallel_for_blocks(sx.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double xi = sx[i];
            const double yi = sy[i];
            double acc = 0.0;
            for (std::size_t j = 0; j < nd; ++j) {
                double ax = std::fabs(xi - dx[j]);
                ax = std::min(ax, L - ax);
                double ay = std::fabs(yi - dy[j]);
                ay = std::min(ay, L - ay);
                const double r2 = ax * ax + ay * ay;
                acc += inv_pow_r2<K>(r2, half_alpha);
            }
            rows[i] = acc;
        }
    });
}

// Per-source sums over all destinations. Parallel over sources with
// per-index writes, so the result is independent of the worker count.
std::vector<double> source_row_sums(const Topology& topology, const CutPartition& part,
                                    double alpha) {
    std::vector<double> sx, sy, dx, dy;
    sx.reserve(part.sources.size());
    sy.reserve(part.sources.size());
    dx.reserve(part.dests.size());
    dy.reserve(part.dests.size());
    for (std::size_t i : part.sources) {
        sx.push_back(topology.nodes[i].pos.x);
        sy.push_back(topology.nodes[i].pos.y);
    }
    for (std::size_t k : part.dests) {
        dx.push_back(topology.nodes[k].pos.x);
        dy.push_back(topology.nodes[k].pos.y);
    }
    std::vector<double> rows(part.sources.size(), 0.0);
    if (part.sources.empty() || part.dests.empty()) return rows;

    const double ha = 0.5 * alpha;
    switch (classify_pow(alpha)) {
        case PowKind::a25: row_sums_impl<PowKind::a25>(sx, sy, dx, dy, topology.edge, ha, rows); break;
        case PowKind::a3: row_sums_impl<PowKind::a3>(sx, sy, dx, dy, topology.edge, ha, rows); break;
        case PowKind::a35: row_sums_impl<PowKind::a35>(sx, sy, dx, dy, topology.edge, ha, rows); break;
        case PowKind::a4: row_sums_impl<PowKind::a4>(sx, sy, dx, dy, topology.edge, ha, rows); break;
        case PowKind::a5: row_sums_impl<PowKind::a5>(sx, sy, dx, dy, topology.edge, ha, rows); break;
        case PowKind::a6: row_sums_impl<PowKind::a6>(sx, sy, dx, dy, topology.edge, ha, rows); break;
        case PowKind::generic:
            row_sums_impl<PowKind::generic>(sx, sy, dx, dy, topology.edge, ha, rows);
            break;
    }
    return rows;
}

std::vector<Band> bands_from_rows(const Topology& topology, const CutStrip& strip,
                                  const ModelParams& params, double phi_inf,
                                  const CutPartition& part, const std::vector<double>& rows) {
    const double L = topology.edge;
    const double dc = compute_dc(params);
    double e1 = 0.25 * L;
    double e2 = dc * std::sqrt(std::log(params.n));
    double e3 = dc;
    double e4 = phi_inf > 0.0 ? 1.0 / std::sqrt(phi_inf)
                              : std::numeric_limits<double>::infinity();
    e2 = std::min(e2, e1);
    e3 = std::min(e3, e2);
    e4 = std::min(e4, e3);

    std::vector<Band> bands(5);
    const double inf = std::numeric_limits<double>::infinity();
    bands[0] = {1, e1, inf, 0.0, 0};
    bands[1] = {2, e2, e1, 0.0, 0};
    bands[2] = {3, e3, e2, 0.0, 0};
    bands[3] = {4, e4, e3, 0.0, 0};
    bands[4] = {5, 0.0, e4, 0.0, 0};

    std::vector<std::vector<double>> contrib(5);
    for (std::size_t s = 0; s < part.sources.size(); ++s) {
        const double coord = axis_coord(topology.nodes[part.sources[s]], strip.axis);
        const double dist =
            circle_point_to_arc_distance(coord, strip.position, strip.width, L);
        int b;
        if (dist > e1) b = 0;
        else if (dist > e2) b = 1;
        else if (dist > e3) b = 2;
        else if (dist > e4) b = 3;
        else b = 4;
        contrib[b].push_back(rows[s]);
        bands[b].source_count++;
    }
    for (int b = 0; b < 5; ++b)
        bands[b].contribution = params.power * pairwise_sum(contrib[b]);
    return bands;
}

}  // namespace

CutStrip find_empty_strip(const Topology& topology, double width, double clearance_g,
                          AxisChoice axis_choice) {
    const double L = topology.edge;
    if (!(width > 0.0))
        throw invalid_parameter_error("find_empty_strip: width must be > 0");
    if (!(width < 0.5 * L))
        throw invalid_parameter_error(
            "find_empty_strip: width must be < L/2 so the two strips stay disjoint");
    if (!(clearance_g >= 0.0))
        throw invalid_parameter_error("find_empty_strip: clearance constant must be >= 0");

    const double clearance = clearance_g * compute_dc(topology.params);
    const double step = 0.25 * width;
    const double half = 0.5 * L;

    std::size_t best_offending = std::numeric_limits<std::size_t>::max();
    double best_position = 0.0;
    int best_axis = 0;

    for (StripAxis axis : {StripAxis::vertical, StripAxis::horizontal}) {
        if (axis_choice == AxisChoice::vertical_only && axis != StripAxis::vertical) continue;
        if (axis_choice == AxisChoice::horizontal_only && axis != StripAxis::horizontal) continue;
        std::vector<double> node_coords;
        node_coords.reserve(topology.nodes.size());
        for (const Node& n : topology.nodes) node_coords.push_back(axis_coord(n, axis));
        std::sort(node_coords.begin(), node_coords.end());

        std::vector<double> centre_coords;
        centre_coords.reserve(topology.centres.size());
        for (const Point& c : topology.centres) centre_coords.push_back(axis_coord(c, axis));
        std::sort(centre_coords.begin(), centre_coords.end());

        // Wide clearance on a small torus: no position can clear the centres.
        if (!centre_coords.empty() && width + 2.0 * clearance >= L) continue;

        std::uint64_t k = 0;
        while (true) {
            const double pos = static_cast<double>(k) * step;
            if (pos >= L) break;

            // Blocking elements for this candidate, with the offset each
            // one's clearing requirement carries relative to pos.
            double max_rel = -1.0;
            std::size_t offending = 0;

            const ArcStats n1 = arc_stats(node_coords, pos, width, L, false);
            if (n1.count) {
                offending += n1.count;
                max_rel = std::max(max_rel, n1.max_rel);
            }
            const ArcStats n2 = arc_stats(node_coords, pos + half, width, L, false);
            if (n2.count) {
                offending += n2.count;
                max_rel = std::max(max_rel, n2.max_rel);
            }
            const ArcStats c1 =
                arc_stats(centre_coords, pos - clearance, width + 2.0 * clearance, L, true);
            if (c1.count) max_rel = std::max(max_rel, c1.max_rel);
            const ArcStats c2 = arc_stats(centre_coords, pos + half - clearance,
                                          width + 2.0 * clearance, L, true);
            if (c2.count) max_rel = std::max(max_rel, c2.max_rel);

            if (max_rel < 0.0) {
                CutStrip strip;
                strip.axis = axis;
                strip.position = pos;
                strip.width = width;
                strip.clearance = clearance;
                return strip;
            }

            if (offending < best_offending) {
                best_offending = offending;
                best_position = pos;
                best_axis = axis == StripAxis::vertical ? 0 : 1;
            }

            // Jump past the furthest blocker; every candidate in between
            // provably fails too.
            const double target = pos + max_rel;
            if (target >= L) break;
            const std::uint64_t next_k = static_cast<std::uint64_t>(target / step) + 1;
            k = next_k > k ? next_k : k + 1;
        }
    }

    throw no_strip_found_error(
        "no empty strip of width " + std::to_string(width) + " with clearance " +
            std::to_string(clearance_g) + "*d_c found; best candidate had " +
            std::to_string(best_offending) + " offending nodes",
        best_position, best_axis, best_offending);
}

CutStrip find_empty_strip_adaptive(const Topology& topology, double width, double clearance_g,
                                   int max_halvings, int* halvings_used, AxisChoice axis) {
    double w = width;
    for (int h = 0;; ++h) {
        try {
            CutStrip strip = find_empty_strip(topology, w, clearance_g, axis);
            if (halvings_used) *halvings_used = h;
            return strip;
        } catch (const no_strip_found_error&) {
            if (h >= max_halvings) throw;
            w *= 0.5;
        }
    }
}

double power_transfer_exact(const Topology& topology, const CutStrip& strip, double P,
                            double alpha) {
    if (!(alpha > 2.0))
        throw invalid_parameter_error("power_transfer_exact: alpha must be > 2");
    const CutPartition part = partition_nodes(topology, strip);
    if (part.sources.empty() || part.dests.empty()) return 0.0;
    const std::vector<double> rows = source_row_sums(topology, part, alpha);
    return P * pairwise_sum(rows);
}

namespace {

double squarelet_transfer_impl(const Topology& topology, const CutStrip& strip,
                               double squarelet_edge, double alpha, double power) {
    if (!(squarelet_edge > 0.0))
        throw invalid_parameter_error("power_transfer_squarelet: squarelet_edge must be > 0");
    const double L = topology.edge;
    const double half = 0.5 * L;
    const double ring_len = half - strip.width;
    const CutPartition part = partition_nodes(topology, strip);
    if (part.sources.empty() || part.dests.empty()) return 0.0;

    const std::size_t ncols = static_cast<std::size_t>(std::ceil(ring_len / squarelet_edge));
    const std::size_t nrows = static_cast<std::size_t>(std::ceil(L / squarelet_edge));

    const double startS = strip.position + strip.width;
    const double startD = strip.position + half + strip.width;

    auto bucket = [&](const std::vector<std::size_t>& idx, double ring_start,
                      std::vector<std::size_t>& counts) {
        counts.assign(ncols * nrows, 0);
        for (std::size_t i : idx) {
            const Point& p = topology.nodes[i].pos;
            double local = std::fmod(axis_coord(p, strip.axis) - ring_start, L);
            if (local < 0.0) local += L;
            std::size_t col = static_cast<std::size_t>(local / squarelet_edge);
            if (col >= ncols) col = ncols - 1;
            std::size_t row =
                static_cast<std::size_t>(off_axis_coord(p, strip.axis) / squarelet_edge);
            if (row >= nrows) row = nrows - 1;
            counts[col * nrows + row]++;
        }
    };

    std::vector<std::size_t> countsS, countsD;
    bucket(part.sources, startS, countsS);
    bucket(part.dests, startD, countsD);

    const double ha = 0.5 * alpha;
    const PowKind kind = classify_pow(alpha);
    auto inv_pow = [&](double r2) {
        switch (kind) {
            case PowKind::a25: return inv_pow_r2<PowKind::a25>(r2, ha);
            case PowKind::a3: return inv_pow_r2<PowKind::a3>(r2, ha);
            case PowKind::a35: return inv_pow_r2<PowKind::a35>(r2, ha);
            case PowKind::a4: return inv_pow_r2<PowKind::a4>(r2, ha);
            case PowKind::a5: return inv_pow_r2<PowKind::a5>(r2, ha);
            case PowKind::a6: return inv_pow_r2<PowKind::a6>(r2, ha);
            case PowKind::generic: return inv_pow_r2<PowKind::generic>(r2, ha);
        }
        return 0.0;
    };

    auto col_arc = [&](double ring_start, std::size_t col, double& start, double& len) {
        start = ring_start + static_cast<double>(col) * squarelet_edge;
        len = std::min(squarelet_edge, ring_len - static_cast<double>(col) * squarelet_edge);
    };
    auto row_arc = [&](std::size_t row, double& start, double& len) {
        start = static_cast<double>(row) * squarelet_edge;
        len = std::min(squarelet_edge, L - start);
    };

    struct Box {
        double col_start, col_len, row_start, row_len;
        double count;
    };
    auto occupied = [&](const std::vector<std::size_t>& counts, double ring_start) {
        std::vector<Box> boxes;
        for (std::size_t c = 0; c < ncols; ++c) {
            for (std::size_t r = 0; r < nrows; ++r) {
                const std::size_t u = counts[c * nrows + r];
                if (u == 0) continue;
                Box b;
                col_arc(ring_start, c, b.col_start, b.col_len);
                row_arc(r, b.row_start, b.row_len);
                b.count = static_cast<double>(u);
                boxes.push_back(b);
            }
        }
        return boxes;
    };
    const std::vector<Box> boxesS = occupied(countsS, startS);
    const std::vector<Box> boxesD = occupied(countsD, startD);

    std::vector<double> partials;
    partials.reserve(boxesS.size());
    for (const Box& a : boxesS) {
        double acc = 0.0;
        for (const Box& b : boxesD) {
            const double dxm =
                circle_arc_to_arc_distance(a.col_start, a.col_len, b.col_start, b.col_len, L);
            const double dym =
                circle_arc_to_arc_distance(a.row_start, a.row_len, b.row_start, b.row_len, L);
            const double r2 = dxm * dxm + dym * dym;
            if (!(r2 > 0.0))
                throw invalid_partition_error("squarelet pair at distance 0 across the cut");
            acc += inv_pow(r2) * a.count * b.count;
        }
        partials.push_back(acc);
    }
    return power * pairwise_sum(partials);
}

}  // namespace

double power_transfer_squarelet(const Topology& topology, const CutStrip& strip,
                                double squarelet_edge) {
    return squarelet_transfer_impl(topology, strip, squarelet_edge, topology.params.alpha,
                                   topology.params.power);
}

std::vector<Band> band_decomposition(const Topology& topology, const CutStrip& strip,
                                     const ModelParams& params, double phi_inf) {
    const CutPartition part = partition_nodes(topology, strip);
    const std::vector<double> rows = source_row_sums(topology, part, params.alpha);
    return bands_from_rows(topology, strip, params, phi_inf, part, rows);
}

CutBoundResult capacity_upper_bound(const Topology& topology, const ModelParams& params,
                                    const CutBoundConfig& config) {
    params.validate();
    CutBoundResult result;
    result.condition = classify_density_condition(params);
    result.critical_fallback = result.condition == DensityCondition::critical;

    const double width0 = strip_width(params, result.condition, config.c_delta);
    result.strip = find_empty_strip_adaptive(topology, width0, config.clearance_g,
                                             config.max_width_halvings,
                                             &result.width_halvings, config.axis);

    const CutPartition part = partition_nodes(topology, result.strip);
    result.n_sources = part.sources.size();
    result.n_dests = part.dests.size();

    const std::vector<double> rows = source_row_sums(topology, part, params.alpha);
    result.p_exact = params.power * pairwise_sum(rows);

    double res = std::max(default_grid_resolution(params),
                          topology.edge / static_cast<double>(config.phi_grid_cap));
    res = std::min(res, topology.edge);
    const IntensityExtrema ex =
        topology.centres.empty() ? IntensityExtrema{} : intensity_extrema(topology, res);
    result.phi_inf = ex.phi_inf;

    result.bands = bands_from_rows(topology, result.strip, params, result.phi_inf, part, rows);

    const double sq_edge =
        config.squarelet_edge > 0.0 ? config.squarelet_edge : topology.edge / 16.0;
    result.p_squarelet =
        squarelet_transfer_impl(topology, result.strip, sq_edge, params.alpha, params.power);

    result.polylog_multiplier_exponent = 5;
    return result;
}

}  // namespace coxcap
