#include "coxcap/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "coxcap/errors.hpp"

namespace coxcap {

using nlohmann::json;

std::string to_string(SweepQuantity q) {
    switch (q) {
        case SweepQuantity::cut_upper_bound: return "cut-upper-bound";
        case SweepQuantity::lower_bound_throughput: return "lower-bound-throughput";
        case SweepQuantity::infrastructure_size: return "infrastructure-size";
        case SweepQuantity::k_max: return "k-max";
    }
    return "?";
}

SweepQuantity sweep_quantity_from_string(const std::string& name) {
    if (name == "cut-upper-bound") return SweepQuantity::cut_upper_bound;
    if (name == "lower-bound-throughput") return SweepQuantity::lower_bound_throughput;
    if (name == "infrastructure-size") return SweepQuantity::infrastructure_size;
    if (name == "k-max") return SweepQuantity::k_max;
    throw invalid_parameter_error("unknown sweep quantity '" + name + "'");
}

void SweepSpec::validate() const {
    base.validate();
    if (n_values.size() < 2)
        throw invalid_parameter_error("sweep: need at least 2 n values");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (!(n_values[i] > n_values[i - 1]))
            throw invalid_parameter_error("sweep: n values must be strictly increasing");
    if (replicas < 1) throw invalid_parameter_error("sweep: replicas must be >= 1");
}

namespace {

Infrastructure build_plan_infrastructure(const Topology& topology, const ModelParams& params,
                                         const TransportPlan& plan, double core_radius) {
    switch (plan.infrastructure_kind) {
        case InfrastructureKind::dense: return dense_infrastructure(topology);
        case InfrastructureKind::clusters_core:
            return clusters_core_infrastructure(topology, core_radius);
        case InfrastructureKind::sparse: return sparse_infrastructure(topology, params);
    }
    throw invalid_parameter_error("unknown infrastructure kind");
}

double evaluate_point(const SweepSpec& spec, const ModelParams& p) {
    switch (spec.quantity) {
        case SweepQuantity::k_max: {
            const double d1 = p.mu * compute_dc(p);
            const double lambda1 = p.cluster_size() * std::pow(d1, -p.delta);
            return static_cast<double>(k_max(p, lambda1));
        }
        case SweepQuantity::cut_upper_bound: {
            const Topology topo = sample_topology(p);
            const CutBoundResult res = capacity_upper_bound(topo, p, spec.cut_config);
            // Eq.-style power transfer alone is power-limited; the trivial
            // per-flow rate cap bounds the cut capacity by the node count,
            // which is what carries the alpha*gamma <= 1 row.
            const double nodes = static_cast<double>(res.n_sources + res.n_dests);
            return std::min(res.p_exact, nodes);
        }
        case SweepQuantity::infrastructure_size: {
            const Topology topo = sample_topology(p);
            const RegimeReport regime = scaling_exponent(p.alpha, p.gamma, p.delta, p.nu);
            const TransportPlan plan = choose_transport_plan(p, regime, -1.0, spec.c_v);
            const Infrastructure infra =
                build_plan_infrastructure(topo, p, plan, spec.core_radius);
            return static_cast<double>(infra.members.size());
        }
        case SweepQuantity::lower_bound_throughput: {
            const Topology topo = sample_topology(p);
            const RegimeReport regime = scaling_exponent(p.alpha, p.gamma, p.delta, p.nu);
            const TransportPlan plan = choose_transport_plan(p, regime, -1.0, spec.c_v);
            const Infrastructure infra =
                build_plan_infrastructure(topo, p, plan, spec.core_radius);
            RngStream flow_stream = RngStream(p.seed).derive(stream_tag::flows, 0);
            const FlowSet flows = assign_flows(topo, flow_stream);
            const LoadReport loads = route_cells(plan, topo, flows);
            const LoadReport report = estimate_throughput(plan, topo, infra, loads, p);
            return report.capacity;
        }
    }
    throw invalid_parameter_error("unknown sweep quantity");
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, std::ostream* stream) {
    spec.validate();
    SweepResult result;
    result.rows.reserve(spec.n_values.size() * static_cast<std::size_t>(spec.replicas));

    RngStream master(spec.base.seed);
    for (std::size_t ni = 0; ni < spec.n_values.size(); ++ni) {
        RngStream n_stream = master.derive(stream_tag::sweep, ni);
        for (int r = 0; r < spec.replicas; ++r) {
            ModelParams p = spec.base;
            p.n = spec.n_values[ni];
            p.seed = n_stream.derive(stream_tag::replica, static_cast<std::uint64_t>(r)).key();

            SweepRow row;
            row.n = p.n;
            row.replica = r;
            try {
                row.value = evaluate_point(spec, p);
            } catch (const std::exception& e) {
                row.ok = false;
                row.reason = e.what();
                result.had_failures = true;
            }
            if (stream) emit_sweep_row(row, *stream);
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

ExponentFit fit_exponent(const std::vector<SweepRow>& rows) {
    ExponentFit fit;
    std::map<double, std::vector<double>> by_n;
    for (const SweepRow& row : rows) {
        if (!row.ok) {
            fit.excluded_values++;
            continue;
        }
        if (!(row.value > 0.0)) {
            fit.excluded_values++;  // nonpositive values have no log
            continue;
        }
        by_n[row.n].push_back(row.value);
    }

    std::vector<double> xs, ys;
    for (auto& [n, values] : by_n) {
        std::sort(values.begin(), values.end());
        const std::size_t k = values.size() / 2;
        const double median =
            values.size() % 2 ? values[k] : 0.5 * (values[k - 1] + values[k]);
        if (!(median > 0.0)) continue;
        xs.push_back(std::log(n));
        ys.push_back(std::log(median));
    }
    if (xs.size() < 2)
        throw fit_failure_error("fit_exponent: need data at >= 2 distinct n, have " +
                                std::to_string(xs.size()));

    fit.used_points = static_cast<int>(xs.size());
    const double count = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy > 0.0) {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
            ss_res += e * e;
        }
        double r2 = 1.0 - ss_res / syy;
        fit.r_squared = std::min(1.0, std::max(0.0, r2));
    } else {
        fit.r_squared = 1.0;  // exact (constant) fit
    }
    return fit;
}

ExponentFit fit_exponent(const std::vector<SweepRow>& rows, double predicted_e_c) {
    ExponentFit fit = fit_exponent(rows);
    fit.predicted_e_c = predicted_e_c;
    fit.deviation = fit.slope - predicted_e_c;
    fit.has_prediction = true;
    return fit;
}

std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

void emit_params_header(const ModelParams& p, std::ostream& out) {
    out << "# n=" << format_g12(p.n) << " gamma=" << format_g12(p.gamma)
        << " nu=" << format_g12(p.nu) << " delta=" << format_g12(p.delta)
        << " alpha=" << format_g12(p.alpha) << " power=" << format_g12(p.power)
        << " mu=" << format_g12(p.mu) << " seed=" << p.seed << "\n";
}

}  // namespace

void emit_sweep_header(const SweepSpec& spec, std::ostream& out) {
    out << "# coxcap sweep v1\n";
    emit_params_header(spec.base, out);
    out << "# quantity=" << to_string(spec.quantity) << " replicas=" << spec.replicas << "\n";
    out << "n,replica,value,ok,reason\n";
}

void emit_sweep_row(const SweepRow& row, std::ostream& out) {
    out << format_g12(row.n) << ',' << row.replica << ',' << format_g12(row.value) << ','
        << (row.ok ? 1 : 0) << ',' << row.reason << "\n";
}

void emit_sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows,
                    std::ostream& out) {
    emit_sweep_header(spec, out);
    for (const SweepRow& row : rows) emit_sweep_row(row, out);
}

std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
    std::vector<SweepRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("n,replica", 0) == 0) continue;
        std::istringstream ls(line);
        SweepRow row;
        std::string field;
        std::getline(ls, field, ',');
        row.n = std::stod(field);
        std::getline(ls, field, ',');
        row.replica = std::stoi(field);
        std::getline(ls, field, ',');
        row.value = std::stod(field);
        std::getline(ls, field, ',');
        row.ok = field == "1";
        std::getline(ls, row.reason);
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit_regime_map_csv(const RegimeMap& map, double nu, double delta, std::ostream& out) {
    out << "# coxcap regime map v1\n";
    out << "# nu=" << format_g12(nu) << " delta=" << format_g12(delta) << "\n";
    out << "alpha,gamma,beta,e_C,regime\n";
    for (std::size_t a = 0; a < map.alphas.size(); ++a) {
        for (std::size_t g = 0; g < map.gammas.size(); ++g) {
            const RegimeReport& rep = map.at(a, g);
            out << format_g12(map.alphas[a]) << ',' << format_g12(map.gammas[g]) << ','
                << format_g12(rep.beta) << ',' << format_g12(rep.e_c) << ','
                << to_string(rep.regime) << "\n";
        }
    }
}

void emit_hierarchy_layers_csv(const Hierarchy& hierarchy, const ModelParams& params,
                               std::ostream& out) {
    out << "# coxcap hierarchy layers v1\n";
    emit_params_header(params, out);
    out << "k,d_k,lambda_k,J_k,max_centres,min_area,max_area\n";
    for (const DomainLayer& layer : hierarchy.layers) {
        std::size_t max_centres = 0;
        double min_area = 0.0, max_area = 0.0;
        if (!layer.components.empty()) {
            min_area = layer.components[0].area;
            for (const Component& comp : layer.components) {
                max_centres = std::max(max_centres, comp.centre_indices.size());
                min_area = std::min(min_area, comp.area);
                max_area = std::max(max_area, comp.area);
            }
        }
        out << layer.k << ',' << format_g12(layer.d_k) << ',' << format_g12(layer.lambda_k)
            << ',' << layer.components.size() << ',' << max_centres << ','
            << format_g12(min_area) << ',' << format_g12(max_area) << "\n";
    }
}

void emit_cell_loads_csv(const LoadReport& report, std::ostream& out) {
    const int cps = report.cells_per_side;
    for (int y = cps - 1; y >= 0; --y) {
        for (int x = 0; x < cps; ++x) {
            if (x) out << ',';
            out << report.per_cell_load[static_cast<std::size_t>(x) * cps + y];
        }
        out << "\n";
    }
}

namespace {

json params_json(const ModelParams& p) {
    return json{{"n", p.n},         {"gamma", p.gamma}, {"nu", p.nu},
                {"delta", p.delta}, {"alpha", p.alpha}, {"power", p.power},
                {"mu", p.mu},       {"seed", p.seed}};
}

}  // namespace

std::string density_report_json(const DensityReport& report) {
    json j{{"d_c", report.d_c},
           {"eta", report.eta},
           {"condition", to_string(report.condition)},
           {"phi_inf", report.phi_inf},
           {"phi_sup", report.phi_sup},
           {"fit_lower", report.fit_lower},
           {"fit_upper", report.fit_upper},
           {"grid_resolution", report.grid_resolution},
           {"replicas", report.replicas},
           {"verifiable", report.verifiable},
           {"plateau_saturated", report.plateau_saturated}};
    return j.dump(2) + "\n";
}

std::string regime_report_json(const RegimeReport& report) {
    json j{{"beta", report.beta},
           {"e_C", report.e_c},
           {"regime", to_string(report.regime)},
           {"branch_trace",
            json{{"alpha_gamma_le_one", report.branch_trace.alpha_gamma_le_one},
                 {"alpha_gamma_margin", report.branch_trace.alpha_gamma_margin},
                 {"alpha_le_three", report.branch_trace.alpha_le_three},
                 {"alpha_margin", report.branch_trace.alpha_margin},
                 {"bandwidth_condition", report.branch_trace.bandwidth_condition},
                 {"bandwidth_margin", report.branch_trace.bandwidth_margin},
                 {"beta_positive", report.branch_trace.beta_positive},
                 {"winning_term", report.branch_trace.winning_term},
                 {"max_margin", report.branch_trace.max_margin}}}};
    return j.dump(2) + "\n";
}

std::string cut_bound_json(const CutBoundResult& result) {
    json bands = json::array();
    for (const Band& b : result.bands) {
        bands.push_back(json{{"band", b.label},
                             {"lo", b.lo},
                             {"hi", std::isfinite(b.hi) ? json(b.hi) : json()},
                             {"contribution", b.contribution},
                             {"sources", b.source_count}});
    }
    json j{{"strip",
            json{{"axis", to_string(result.strip.axis)},
                 {"position", result.strip.position},
                 {"width", result.strip.width},
                 {"clearance", result.strip.clearance}}},
           {"p_exact", result.p_exact},
           {"p_squarelet", result.p_squarelet},
           {"polylog_multiplier_exponent", result.polylog_multiplier_exponent},
           {"bands", bands},
           {"n_sources", result.n_sources},
           {"n_dests", result.n_dests},
           {"condition", to_string(result.condition)},
           {"phi_inf", result.phi_inf},
           {"critical_fallback", result.critical_fallback},
           {"width_halvings", result.width_halvings}};
    return j.dump(2) + "\n";
}

std::string load_report_json(const LoadReport& report, const TransportPlan& plan) {
    json j{{"strategy", to_string(plan.strategy)},
           {"infrastructure", to_string(plan.infrastructure_kind)},
           {"cell_edge", plan.cell_edge},
           {"cells_per_side", plan.cells_per_side},
           {"clamped", plan.clamped},
           {"max_load", report.max_load},
           {"mean_load", report.mean_load},
           {"flows", report.hop_counts.size()},
           {"lambda", report.lambda},
           {"capacity", report.capacity},
           {"cross_check_ratio", report.cross_check_ratio},
           {"zero_load_degenerate", report.zero_load_degenerate}};
    return j.dump(2) + "\n";
}

std::string hierarchy_json(const Hierarchy& hierarchy, const BottleneckReport& bottleneck) {
    json layers = json::array();
    for (const DomainLayer& layer : hierarchy.layers) {
        json comps = json::array();
        for (const Component& comp : layer.components) {
            comps.push_back(json{{"centres", comp.centre_indices},
                                 {"area", comp.area},
                                 {"zeta", comp.zeta},
                                 {"children", comp.nested_children}});
        }
        layers.push_back(json{{"k", layer.k},
                              {"d_k", layer.d_k},
                              {"lambda_k", layer.lambda_k},
                              {"members", layer.infrastructure.size()},
                              {"components", comps}});
    }
    json j{{"k_max", hierarchy.k_max},
           {"mu", hierarchy.mu},
           {"truncated", hierarchy.truncated},
           {"truncated_at", hierarchy.truncated_at},
           {"layers", layers},
           {"bottleneck",
            json{{"checks", bottleneck.checks},
                 {"violations", bottleneck.violations},
                 {"layer0_is_bottleneck", bottleneck.layer0_is_bottleneck},
                 {"layer_totals", bottleneck.layer_totals}}}};
    return j.dump(2) + "\n";
}

std::string exponent_fit_json(const ExponentFit& fit) {
    json j{{"slope", fit.slope},
           {"intercept", fit.intercept},
           {"r_squared", fit.r_squared},
           {"used_points", fit.used_points},
           {"excluded_values", fit.excluded_values}};
    if (fit.has_prediction) {
        j["predicted_e_C"] = fit.predicted_e_c;
        j["deviation"] = fit.deviation;
    }
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw io_error("write failed: " + path);
}

}  // namespace coxcap
