#include "coxcap/topology.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "coxcap/errors.hpp"

namespace coxcap {

double kernel_s(double rho, double delta) {
    if (!(delta > 2.0))
        throw invalid_parameter_error(
            "kernel_s: delta must be > 2 (integral over growing areas diverges), got " +
            std::to_string(delta));
    if (rho < 0.0)
        throw invalid_parameter_error("kernel_s: rho must be >= 0, got " + std::to_string(rho));
    if (rho <= 1.0) return 1.0;
    return std::pow(rho, -delta);
}

double radial_mass(double r, double delta) {
    // integral of rho * min(1, rho^-delta) from 0 to r
    if (r <= 0.0) return 0.0;
    if (r <= 1.0) return 0.5 * r * r;
    // 1/2 + (1 - r^(2-delta)) / (delta - 2)
    return 0.5 + (1.0 - std::pow(r, 2.0 - delta)) / (delta - 2.0);
}

double radial_quantile(double u, double delta, double r_max) {
    const double total = radial_mass(r_max, delta);
    const double target = u * total;
    const double plateau = radial_mass(std::fmin(1.0, r_max), delta);
    if (target <= plateau) return std::sqrt(2.0 * target);
    // invert 1/2 + (1 - r^(2-delta))/(delta-2) = target
    const double inner = 1.0 - (delta - 2.0) * (target - 0.5);
    return std::pow(inner, 1.0 / (2.0 - delta));
}

std::vector<Point> sample_centres(const ModelParams& params, RngStream& rng) {
    params.validate();
    const double edge = params.edge();
    const std::uint64_t count = rng.poisson(params.cluster_count());
    std::vector<Point> centres;
    centres.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double x = rng.uniform(0.0, edge);
        const double y = rng.uniform(0.0, edge);
        centres.push_back({x, y});
    }
    return centres;
}

std::vector<Point> sample_cluster_nodes(const Point& centre, const ModelParams& params,
                                        RngStream& rng) {
    const double edge = params.edge();
    const double r_max = 0.5 * edge;
    const std::uint64_t count = rng.poisson(params.cluster_size());
    std::vector<Point> nodes;
    nodes.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double r = radial_quantile(rng.uniform(), params.delta, r_max);
        const double theta = rng.uniform(0.0, 2.0 * M_PI);
        Point p{centre.x + r * std::cos(theta), centre.y + r * std::sin(theta)};
        nodes.push_back(wrap_point(p, edge));
    }
    return nodes;
}

Topology sample_topology(const ModelParams& params, RngStream& rng) {
    params.validate();
    Topology topo;
    topo.params = params;
    topo.edge = params.edge();

    RngStream centre_stream = rng.derive(stream_tag::centres, 0);
    topo.centres = sample_centres(params, centre_stream);

    for (std::size_t j = 0; j < topo.centres.size(); ++j) {
        RngStream cluster_stream = rng.derive(stream_tag::cluster, j);
        const auto cloud = sample_cluster_nodes(topo.centres[j], params, cluster_stream);
        for (const Point& p : cloud)
            topo.nodes.push_back({p, static_cast<std::uint32_t>(j)});
    }
    return topo;
}

Topology sample_topology(const ModelParams& params) {
    RngStream rng(params.seed);
    return sample_topology(params, rng);
}

double local_intensity(const Topology& topology, const Point& xi) {
    const double q = topology.params.cluster_size();
    const double delta = topology.params.delta;
    const double edge = topology.edge;
    double acc = 0.0;
    for (const Point& c : topology.centres) {
        const double r2 = torus_distance_squared(xi, c, edge);
        if (r2 <= 1.0) {
            acc += 1.0;
        } else {
            acc += std::pow(r2, -0.5 * delta);
        }
    }
    return q * acc;
}

double sampling_intensity(const Topology& topology, const Point& xi) {
    const double q = topology.params.cluster_size();
    const double delta = topology.params.delta;
    const double edge = topology.edge;
    const double cut2 = 0.25 * edge * edge;
    double acc = 0.0;
    for (const Point& c : topology.centres) {
        const double r2 = torus_distance_squared(xi, c, edge);
        if (r2 > cut2) continue;
        if (r2 <= 1.0) {
            acc += 1.0;
        } else {
            acc += std::pow(r2, -0.5 * delta);
        }
    }
    return q * acc;
}

double kernel_normalization(const ModelParams& params) {
    return 2.0 * M_PI * radial_mass(0.5 * params.edge(), params.delta);
}

namespace {

void append_g17(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

void save_topology(const Topology& topology, std::ostream& out) {
    std::string line;
    line.reserve(128);
    line = "SNCP v1 L=";
    append_g17(line, topology.edge);
    line += " n=";
    append_g17(line, topology.params.n);
    line += " gamma=";
    append_g17(line, topology.params.gamma);
    line += " nu=";
    append_g17(line, topology.params.nu);
    line += " delta=";
    append_g17(line, topology.params.delta);
    line += " seed=";
    line += std::to_string(topology.params.seed);
    line += '\n';
    out << line;

    for (std::size_t j = 0; j < topology.centres.size(); ++j) {
        line = "C ";
        line += std::to_string(j);
        line += ' ';
        append_g17(line, topology.centres[j].x);
        line += ' ';
        append_g17(line, topology.centres[j].y);
        line += '\n';
        out << line;
    }
    for (std::size_t i = 0; i < topology.nodes.size(); ++i) {
        line = "N ";
        line += std::to_string(i);
        line += ' ';
        line += std::to_string(topology.nodes[i].parent);
        line += ' ';
        append_g17(line, topology.nodes[i].pos.x);
        line += ' ';
        append_g17(line, topology.nodes[i].pos.y);
        line += '\n';
        out << line;
    }
}

void save_topology_file(const Topology& topology, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    save_topology(topology, out);
    if (!out) throw io_error("write failed: " + path);
}

Topology load_topology(std::istream& in, const ModelParams& defaults) {
    Topology topo;
    topo.params = defaults;

    std::string header;
    if (!std::getline(in, header)) throw io_error("topology stream: missing header");
    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "SNCP" || version != "v1")
        throw io_error("topology stream: bad header '" + header + "'");
    std::string kv;
    while (hs >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw io_error("topology header: bad field '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "L") topo.edge = std::stod(val);
        else if (key == "n") topo.params.n = std::stod(val);
        else if (key == "gamma") topo.params.gamma = std::stod(val);
        else if (key == "nu") topo.params.nu = std::stod(val);
        else if (key == "delta") topo.params.delta = std::stod(val);
        else if (key == "seed") topo.params.seed = std::stoull(val);
        else throw io_error("topology header: unknown field '" + key + "'");
    }

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        char kind;
        ls >> kind;
        if (kind == 'C') {
            std::size_t idx;
            Point p;
            ls >> idx >> p.x >> p.y;
            if (!ls) throw io_error("topology stream: bad centre record '" + line + "'");
            if (idx != topo.centres.size())
                throw io_error("topology stream: centre index out of order in '" + line + "'");
            topo.centres.push_back(p);
        } else if (kind == 'N') {
            std::size_t idx;
            Node nd;
            ls >> idx >> nd.parent >> nd.pos.x >> nd.pos.y;
            if (!ls) throw io_error("topology stream: bad node record '" + line + "'");
            if (idx != topo.nodes.size())
                throw io_error("topology stream: node index out of order in '" + line + "'");
            if (nd.parent >= topo.centres.size())
                throw io_error("topology stream: node parent out of range in '" + line + "'");
            topo.nodes.push_back(nd);
        } else {
            throw io_error("topology stream: unknown record '" + line + "'");
        }
    }
    return topo;
}

Topology load_topology_file(const std::string& path, const ModelParams& defaults) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open for reading: " + path);
    return load_topology(in, defaults);
}

}  // namespace coxcap
