#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coxcap/geometry.hpp"
#include "coxcap/params.hpp"
#include "coxcap/rng.hpp"

namespace coxcap {

// Power-law dispersion kernel s(rho) = min(1, rho^-delta).
// Unnormalized by design: the normalizing integral is a constant-order
// factor and every downstream comparison is ratio- or exponent-based, so
// intensity values carry a constant multiplicative slack.
double kernel_s(double rho, double delta);

struct Node {
    Point pos;
    std::uint32_t parent = 0;  // index into Topology::centres
};

// One realization of the shot-noise Cox process on the torus [0, L)^2.
// Immutable after construction.
struct Topology {
    double edge = 0.0;
    std::vector<Point> centres;
    std::vector<Node> nodes;
    ModelParams params;

    std::size_t centre_count() const { return centres.size(); }
    std::size_t node_count() const { return nodes.size(); }
};

// Cluster-centre process: count ~ Poisson(n^nu), positions i.i.d. uniform.
std::vector<Point> sample_centres(const ModelParams& params, RngStream& rng);

// One cluster's node cloud around `centre`: count ~ Poisson(n^(1-nu)),
// radius by inverse CDF of rho*s(rho) truncated at L/2, angle uniform,
// wrapped onto the torus. The truncated tail mass beyond L/2 is dropped.
std::vector<Point> sample_cluster_nodes(const Point& centre, const ModelParams& params,
                                        RngStream& rng);

// Superposition of the per-centre processes. Each centre's cloud is drawn
// from a sub-stream derived from (master seed, cluster tag, centre index),
// so the output is independent of generation order.
Topology sample_topology(const ModelParams& params, RngStream& rng);
Topology sample_topology(const ModelParams& params);  // stream from params.seed

// Conditional intensity field at xi given the centre set:
// q * sum_j s(torus_distance(xi, c_j)).
double local_intensity(const Topology& topology, const Point& xi);

// Same field restricted to centres within torus distance L/2: the radial
// sampler truncates there, so this (and only this) is proportional to the
// true conditional intensity of the generated points. The thinning paths
// use it; local_intensity keeps the untruncated sum.
double sampling_intensity(const Topology& topology, const Point& xi);

// Normalization of the truncated radial density: 2*pi*radial_mass(L/2).
// The sampler places q * s(d)/kernel_normalization points per unit area
// at distance d, so a thinning target phi0 (in the unnormalized intensity
// scale used throughout) retains phi0 * L^2 / kernel_normalization nodes
// in expectation.
double kernel_normalization(const ModelParams& params);

// Radial sampling internals, exposed for reuse and for statistical checks.
// Mass of rho*s(rho) on [0, r], and total on [0, r_max].
double radial_mass(double r, double delta);
// Quantile of the radial density truncated at r_max: r with mass(r) = u * mass(r_max).
double radial_quantile(double u, double delta, double r_max);

// Line-oriented text serialization.
// Header: SNCP v1 L=<L> n=<n> gamma=<g> nu=<nu> delta=<d> seed=<seed>
// Records: "C <idx> <x> <y>" per centre, "N <idx> <parent> <x> <y>" per node.
// Coordinates use 17 significant digits so reload is bit-exact.
void save_topology(const Topology& topology, std::ostream& out);
void save_topology_file(const Topology& topology, const std::string& path);
// The file format carries only the generative parameters; alpha, power and
// mu of the returned params keep the supplied defaults.
Topology load_topology(std::istream& in, const ModelParams& defaults = {});
Topology load_topology_file(const std::string& path, const ModelParams& defaults = {});

}  // namespace coxcap
