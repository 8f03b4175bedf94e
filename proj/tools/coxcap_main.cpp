#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coxcap/harness.hpp"

using namespace coxcap;

namespace {

struct CliOptions {
    ModelParams params;
    std::string out = "-";

    // intensity
    int replicas = 1;
    double grid_res = -1.0;

    // classify
    bool map_mode = false;
    double alpha_min = 2.05, alpha_max = 6.0;
    double gamma_min = 0.0, gamma_max = 1.0;
    int steps = 101;

    // cutbound
    std::string in_path;
    double squarelet_edge = 0.0;
    double clearance_g = 0.1;
    double c_delta = 1.0;
    std::string axis = "auto";
    int max_halvings = 0;

    // infra
    std::string kind = "auto";
    double core_radius = 1.0;
    double phi0 = -1.0;
    std::string cells_out;
    double c_v = 1.0;

    // hierarchy
    std::size_t area_samples = 100000;
    std::string components_out;

    // sweep
    std::string quantity = "cut-upper-bound";
    double n_min = 4096.0, n_max = 131072.0;
    int n_points = 6;
    std::vector<double> n_values;
    int sweep_replicas = 1;
    bool print_fit = false;
};

AxisChoice parse_axis(const std::string& axis) {
    if (axis == "auto") return AxisChoice::automatic;
    if (axis == "vertical") return AxisChoice::vertical_only;
    if (axis == "horizontal") return AxisChoice::horizontal_only;
    throw invalid_parameter_error("--axis must be auto, vertical or horizontal");
}

Topology load_or_sample(const CliOptions& opt) {
    if (!opt.in_path.empty()) return load_topology_file(opt.in_path, opt.params);
    return sample_topology(opt.params);
}

std::vector<double> sweep_n_values(const CliOptions& opt) {
    if (!opt.n_values.empty()) return opt.n_values;
    std::vector<double> values;
    if (opt.n_points < 2) throw invalid_parameter_error("--n-points must be >= 2");
    for (int i = 0; i < opt.n_points; ++i) {
        const double t = static_cast<double>(i) / (opt.n_points - 1);
        values.push_back(opt.n_min * std::pow(opt.n_max / opt.n_min, t));
    }
    return values;
}

int cmd_generate(const CliOptions& opt) {
    const Topology topo = sample_topology(opt.params);
    if (opt.out.empty() || opt.out == "-") {
        save_topology(topo, std::cout);
    } else {
        save_topology_file(topo, opt.out);
    }
    return 0;
}

int cmd_intensity(const CliOptions& opt) {
    const double res = opt.grid_res > 0.0 ? opt.grid_res : default_grid_resolution(opt.params);
    const DensityReport report = verify_lemma1(opt.params, opt.replicas, res);
    write_text_file(opt.out, density_report_json(report));
    return 0;
}

int cmd_classify(const CliOptions& opt) {
    if (opt.map_mode) {
        const RegimeMap map = regime_map(opt.alpha_min, opt.alpha_max, opt.gamma_min,
                                         opt.gamma_max, opt.steps, opt.params.nu,
                                         opt.params.delta);
        std::ostringstream buf;
        emit_regime_map_csv(map, opt.params.nu, opt.params.delta, buf);
        write_text_file(opt.out, buf.str());
        return 0;
    }
    const RegimeReport report = scaling_exponent(opt.params.alpha, opt.params.gamma,
                                                 opt.params.delta, opt.params.nu);
    write_text_file(opt.out, regime_report_json(report));
    return 0;
}

int cmd_cutbound(const CliOptions& opt) {
    const Topology topo = load_or_sample(opt);
    CutBoundConfig cfg;
    cfg.c_delta = opt.c_delta;
    cfg.clearance_g = opt.clearance_g;
    cfg.squarelet_edge = opt.squarelet_edge;
    cfg.max_width_halvings = opt.max_halvings;
    cfg.axis = parse_axis(opt.axis);
    try {
        const CutBoundResult result = capacity_upper_bound(topo, opt.params, cfg);
        write_text_file(opt.out, cut_bound_json(result));
    } catch (const no_strip_found_error& e) {
        std::cerr << "cutbound: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int cmd_infra(const CliOptions& opt) {
    const Topology topo = load_or_sample(opt);
    const RegimeReport regime = scaling_exponent(opt.params.alpha, opt.params.gamma,
                                                 opt.params.delta, opt.params.nu);
    const TransportPlan plan = choose_transport_plan(opt.params, regime, -1.0, opt.c_v);

    Infrastructure infra;
    std::string kind = opt.kind;
    if (kind == "auto") {
        switch (plan.infrastructure_kind) {
            case InfrastructureKind::dense: kind = "dense"; break;
            case InfrastructureKind::clusters_core: kind = "core"; break;
            case InfrastructureKind::sparse: kind = "sparse"; break;
        }
    }
    if (opt.phi0 >= 0.0) {
        RngStream rng = RngStream(opt.params.seed).derive(stream_tag::thinning, 2);
        infra = thin_to_hpp(topo, opt.phi0, rng);
    } else if (kind == "dense") {
        infra = dense_infrastructure(topo);
    } else if (kind == "core") {
        infra = clusters_core_infrastructure(topo, opt.core_radius);
    } else if (kind == "sparse") {
        infra = sparse_infrastructure(topo, opt.params);
    } else {
        throw invalid_parameter_error("--kind must be auto, dense, core or sparse");
    }

    RngStream flow_stream = RngStream(opt.params.seed).derive(stream_tag::flows, 0);
    const FlowSet flows = assign_flows(topo, flow_stream);
    const LoadReport loads = route_cells(plan, topo, flows);
    const LoadReport report = estimate_throughput(plan, topo, infra, loads, opt.params);

    write_text_file(opt.out, load_report_json(report, plan));
    if (!opt.cells_out.empty()) {
        std::ostringstream buf;
        emit_cell_loads_csv(report, buf);
        write_text_file(opt.cells_out, buf.str());
    }
    return 0;
}

int cmd_hierarchy(const CliOptions& opt) {
    const Topology topo = load_or_sample(opt);
    HierarchyOptions options;
    options.area_samples = opt.area_samples;
    const Hierarchy h = build_hierarchy(topo, opt.params, options);
    const BottleneckReport bottleneck = bottleneck_check(h, opt.params);

    std::ostringstream buf;
    emit_hierarchy_layers_csv(h, opt.params, buf);
    write_text_file(opt.out, buf.str());
    if (!opt.components_out.empty())
        write_text_file(opt.components_out, hierarchy_json(h, bottleneck));

    std::cout << (bottleneck.violations == 0 ? "BOTTLENECK PASS" : "BOTTLENECK FAIL") << " ("
              << bottleneck.violations << "/" << bottleneck.checks
              << " parent components violated; layer0_is_bottleneck="
              << (bottleneck.layer0_is_bottleneck ? "yes" : "no") << ")\n";
    return 0;
}

int cmd_sweep(const CliOptions& opt) {
    SweepSpec spec;
    spec.base = opt.params;
    spec.quantity = sweep_quantity_from_string(opt.quantity);
    spec.n_values = sweep_n_values(opt);
    spec.replicas = opt.sweep_replicas;
    spec.cut_config.c_delta = opt.c_delta;
    spec.cut_config.clearance_g = opt.clearance_g;
    spec.cut_config.squarelet_edge = opt.squarelet_edge;
    spec.cut_config.max_width_halvings = opt.max_halvings > 0 ? opt.max_halvings : 48;
    spec.cut_config.axis = parse_axis(opt.axis);
    spec.core_radius = opt.core_radius;
    spec.c_v = opt.c_v;

    SweepResult result;
    if (opt.out.empty() || opt.out == "-") {
        emit_sweep_header(spec, std::cout);
        result = run_sweep(spec, &std::cout);
    } else {
        std::ofstream out(opt.out);
        if (!out) throw io_error("cannot open for writing: " + opt.out);
        emit_sweep_header(spec, out);
        result = run_sweep(spec, &out);  // rows stream as they complete
        if (!out) throw io_error("write failed: " + opt.out);
    }

    if (opt.print_fit) {
        try {
            const RegimeReport regime = scaling_exponent(opt.params.alpha, opt.params.gamma,
                                                         opt.params.delta, opt.params.nu);
            const ExponentFit fit = fit_exponent(result.rows, regime.e_c);
            std::cout << exponent_fit_json(fit);
        } catch (const fit_failure_error& e) {
            std::cerr << "sweep: " << e.what() << "\n";
        }
    }
    return result.had_failures ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coxcap: capacity scaling toolkit for clustered random networks"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value file mirroring the flags; flags win on conflict");

    CliOptions opt;
    app.add_option("--n", opt.params.n, "expected node count")->capture_default_str();
    app.add_option("--gamma", opt.params.gamma, "area exponent (L = n^gamma)")
        ->capture_default_str();
    app.add_option("--nu", opt.params.nu, "cluster exponent (m = n^nu)")->capture_default_str();
    app.add_option("--delta", opt.params.delta, "kernel decay exponent")->capture_default_str();
    app.add_option("--alpha", opt.params.alpha, "path-loss exponent")->capture_default_str();
    app.add_option("--power", opt.params.power, "per-node power budget")->capture_default_str();
    app.add_option("--mu", opt.params.mu, "hierarchy radius constant")->capture_default_str();
    app.add_option("--seed", opt.params.seed, "master reproducibility seed")
        ->capture_default_str();
    app.add_option("--out", opt.out, "output path ('-' = stdout)")->capture_default_str();

    CLI::App* generate = app.add_subcommand("generate", "sample a topology and write it");

    CLI::App* intensity =
        app.add_subcommand("intensity", "intensity extrema and pinch-constant fits");
    intensity->add_option("--replicas", opt.replicas, "seeded replicas for the fits")
        ->capture_default_str();
    intensity->add_option("--grid-res", opt.grid_res,
                          "evaluation step (default: min(0.1, d_c/10))");

    CLI::App* classify = app.add_subcommand("classify", "closed-form regime classification");
    classify->add_flag("--map", opt.map_mode, "emit a CSV map over (alpha, gamma)");
    classify->add_option("--alpha-min", opt.alpha_min)->capture_default_str();
    classify->add_option("--alpha-max", opt.alpha_max)->capture_default_str();
    classify->add_option("--gamma-min", opt.gamma_min)->capture_default_str();
    classify->add_option("--gamma-max", opt.gamma_max)->capture_default_str();
    classify->add_option("--steps", opt.steps, "grid points per axis")->capture_default_str();

    CLI::App* cutbound = app.add_subcommand("cutbound", "cut strip and power-transfer bound");
    cutbound->add_option("--in", opt.in_path, "load a topology file instead of sampling");
    cutbound->add_option("--squarelet-edge", opt.squarelet_edge, "0 = auto (L/16)")
        ->capture_default_str();
    cutbound->add_option("--g", opt.clearance_g, "centre clearance constant")
        ->capture_default_str();
    cutbound->add_option("--c-delta", opt.c_delta, "strip width constant")->capture_default_str();
    cutbound->add_option("--axis", opt.axis, "auto|vertical|horizontal")->capture_default_str();
    cutbound->add_option("--max-halvings", opt.max_halvings, "width retries on failure")
        ->capture_default_str();

    CLI::App* infra = app.add_subcommand("infra", "infrastructure, routing and throughput");
    infra->add_option("--in", opt.in_path, "load a topology file instead of sampling");
    infra->add_option("--kind", opt.kind, "auto|dense|core|sparse")->capture_default_str();
    infra->add_option("--R", opt.core_radius, "clusters-core radius")->capture_default_str();
    infra->add_option("--phi0", opt.phi0, "explicit thinning target intensity");
    infra->add_option("--cells-out", opt.cells_out, "per-cell load CSV path");
    infra->add_option("--c-v", opt.c_v, "multi-hop cell constant")->capture_default_str();

    CLI::App* hierarchy = app.add_subcommand("hierarchy", "nested-domain access structure");
    hierarchy->add_option("--in", opt.in_path, "load a topology file instead of sampling");
    hierarchy->add_option("--samples", opt.area_samples, "Monte Carlo samples per component area")
        ->capture_default_str();
    hierarchy->add_option("--components-out", opt.components_out, "per-component JSON path");

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweeps and exponent regression");
    sweep->add_option("--quantity", opt.quantity,
                      "cut-upper-bound|lower-bound-throughput|infrastructure-size|k-max")
        ->capture_default_str();
    sweep->add_option("--n-min", opt.n_min)->capture_default_str();
    sweep->add_option("--n-max", opt.n_max)->capture_default_str();
    sweep->add_option("--n-points", opt.n_points, "geometric grid points")->capture_default_str();
    sweep->add_option("--n-values", opt.n_values, "explicit n list (overrides the grid)");
    sweep->add_option("--replicas", opt.sweep_replicas)->capture_default_str();
    sweep->add_option("--c-delta", opt.c_delta)->capture_default_str();
    sweep->add_option("--g", opt.clearance_g)->capture_default_str();
    sweep->add_option("--max-halvings", opt.max_halvings, "0 = sweep default (48)")
        ->capture_default_str();
    sweep->add_option("--R", opt.core_radius)->capture_default_str();
    sweep->add_option("--c-v", opt.c_v)->capture_default_str();
    sweep->add_flag("--fit", opt.print_fit, "print the exponent fit JSON to stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        opt.params.validate();
        if (generate->parsed()) return cmd_generate(opt);
        if (intensity->parsed()) return cmd_intensity(opt);
        if (classify->parsed()) return cmd_classify(opt);
        if (cutbound->parsed()) return cmd_cutbound(opt);
        if (infra->parsed()) return cmd_infra(opt);
        if (hierarchy->parsed()) return cmd_hierarchy(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
    } catch (const invalid_parameter_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const invalid_geometry_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const supercritical_mu_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
