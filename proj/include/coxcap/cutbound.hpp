#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coxcap/density.hpp"
#include "coxcap/topology.hpp"

namespace coxcap {

enum class StripAxis { vertical, horizontal };

std::string to_string(StripAxis a);

// An empty cut strip. A single strip does not disconnect a torus, so the
// cut is the strip plus its antipodal twin at position + L/2; both must be
// empty of nodes and clear of centres. The two remaining rings are the
// source and destination sides.
struct CutStrip {
    StripAxis axis = StripAxis::vertical;
    double position = 0.0;   // coordinate of the strip's lower edge
    double width = 0.0;
    double clearance = 0.0;  // g * d_c centre exclusion distance
};

struct Band {
    int label = 0;        // 1..5, matching the per-regime dominant distance bands
    double lo = 0.0;      // distance interval [lo, hi) to the primary strip
    double hi = 0.0;
    double contribution = 0.0;  // this band's share of p_exact
    std::size_t source_count = 0;
};

struct CutBoundResult {
    CutStrip strip;
    double p_exact = 0.0;
    double p_squarelet = 0.0;
    // The bounding constant's poly-log factor is carried symbolically and
    // never folded into the numeric value.
    int polylog_multiplier_exponent = 5;
    std::vector<Band> bands;
    std::size_t n_sources = 0;
    std::size_t n_dests = 0;
    DensityCondition condition = DensityCondition::critical;
    double phi_inf = 0.0;          // estimate used for the innermost band edge
    bool critical_fallback = false;  // critical condition used the dense width formula
    int width_halvings = 0;          // adaptive retries taken before a strip was found
};

// Prescribed strip width:
//   cluster-sparse: c_delta * (q * s(d_c) * ln n)^(-1/2)
//   cluster-dense:  c_delta * L / sqrt(n)
// The critical condition falls back to the cluster-dense formula.
double strip_width(const ModelParams& params, DensityCondition condition, double c_delta = 1.0);

enum class AxisChoice { automatic, vertical_only, horizontal_only };

// Scans candidate strip positions (vertical axis first, then horizontal,
// positions ascending on an offset grid of step width/4) and returns the
// first position where both the strip and its antipodal twin are empty of
// nodes and every centre is farther than g*d_c from both.
// Throws no_strip_found_error (with the best candidate) when none
// qualifies; the caller may retry with a smaller width, since the
// existence guarantee is only asymptotic.
CutStrip find_empty_strip(const Topology& topology, double width, double clearance_g,
                          AxisChoice axis = AxisChoice::automatic);

// Convenience retry loop: halves the width until a strip is found or
// max_halvings is exhausted (the last failure is rethrown).
CutStrip find_empty_strip_adaptive(const Topology& topology, double width, double clearance_g,
                                   int max_halvings, int* halvings_used = nullptr,
                                   AxisChoice axis = AxisChoice::automatic);

// Exact power transfer P * sum_{i in S, k in D} d_ik^-alpha across the
// cut. Either side empty yields 0.
double power_transfer_exact(const Topology& topology, const CutStrip& strip, double P,
                            double alpha);

// Squarelet over-estimate: partitions each side into squarelets of the
// given edge and returns P * sum_{h,k} dmin_hk^-alpha * U(A_k) * U(B_h)
// with actual node counts U and minimum torus distance between squarelet
// closures. Structurally >= power_transfer_exact.
double power_transfer_squarelet(const Topology& topology, const CutStrip& strip,
                                double squarelet_edge);

// Partitions sources by torus distance to the primary strip into five
// bands with edges {L/4, d_c*sqrt(ln n), d_c, phi_inf^(-1/2)} (clamped to
// be non-increasing going inward; degenerate bands get zero width) and
// attributes each source's exact row sum to its band.
std::vector<Band> band_decomposition(const Topology& topology, const CutStrip& strip,
                                     const ModelParams& params, double phi_inf);

struct CutBoundConfig {
    double c_delta = 1.0;
    double clearance_g = 0.1;
    double squarelet_edge = 0.0;  // 0 = auto (L/16)
    int max_width_halvings = 0;   // 0 = no retry; capacity_upper_bound propagates failures
    AxisChoice axis = AxisChoice::automatic;
    // grid cap for the phi_inf estimate used by the band edges
    std::size_t phi_grid_cap = 256;
};

// Orchestrates width -> strip search -> exact/squarelet transfer -> band
// decomposition. NoStripFound propagates (subject to the configured
// retry budget).
CutBoundResult capacity_upper_bound(const Topology& topology, const ModelParams& params,
                                    const CutBoundConfig& config = {});

}  // namespace coxcap
