#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coxcap/cutbound.hpp"
#include "coxcap/hierarchy.hpp"
#include "coxcap/infrastructure.hpp"
#include "coxcap/regimes.hpp"

namespace coxcap {

enum class SweepQuantity { cut_upper_bound, lower_bound_throughput, infrastructure_size, k_max };

std::string to_string(SweepQuantity q);
SweepQuantity sweep_quantity_from_string(const std::string& name);

struct SweepSpec {
    ModelParams base;
    std::vector<double> n_values;  // strictly increasing, >= 2 points
    int replicas = 1;
    SweepQuantity quantity = SweepQuantity::cut_upper_bound;
    std::string out_path;  // empty = stdout handled by the caller

    CutBoundConfig cut_config = default_sweep_cut_config();
    double core_radius = 1.0;  // clusters-core R for infrastructure sizing
    double c_v = 1.0;          // multi-hop cell constant

    static CutBoundConfig default_sweep_cut_config() {
        CutBoundConfig cfg;
        // straight empty strips at the prescribed width are an asymptotic
        // guarantee; the sweep retries with halved widths at finite n
        cfg.max_width_halvings = 48;
        return cfg;
    }

    void validate() const;
};

struct SweepRow {
    double n = 0.0;
    int replica = 0;
    double value = 0.0;
    bool ok = true;
    std::string reason;  // failure reason for missing values
};

struct SweepResult {
    std::vector<SweepRow> rows;
    bool had_failures = false;
};

// Evaluates the chosen quantity per (n, replica) with seeds derived from
// the base seed. Per-point failures are recorded as missing rows and
// never abort the sweep. Rows are produced in (n, replica) order; when
// `stream` is given each row is written as soon as it is computed.
SweepResult run_sweep(const SweepSpec& spec, std::ostream* stream = nullptr);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double predicted_e_c = 0.0;
    double deviation = 0.0;
    bool has_prediction = false;
    int used_points = 0;      // distinct n values entering the regression
    int excluded_values = 0;  // nonpositive or failed samples dropped
};

// Least-squares slope of log(median value per n) against log n.
ExponentFit fit_exponent(const std::vector<SweepRow>& rows);
ExponentFit fit_exponent(const std::vector<SweepRow>& rows, double predicted_e_c);

// ---- report emission ----------------------------------------------------
// CSV tables open with a '#' header block echoing the full parameter set
// and seed; all numeric fields use 12 significant digits.

std::string format_g12(double v);

void emit_sweep_header(const SweepSpec& spec, std::ostream& out);
void emit_sweep_row(const SweepRow& row, std::ostream& out);
void emit_sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows, std::ostream& out);
std::vector<SweepRow> parse_sweep_csv(std::istream& in);

void emit_regime_map_csv(const RegimeMap& map, double nu, double delta, std::ostream& out);

void emit_hierarchy_layers_csv(const Hierarchy& hierarchy, const ModelParams& params,
                               std::ostream& out);

void emit_cell_loads_csv(const LoadReport& report, std::ostream& out);

// JSON renderings of the structured reports.
std::string density_report_json(const DensityReport& report);
std::string regime_report_json(const RegimeReport& report);
std::string cut_bound_json(const CutBoundResult& result);
std::string load_report_json(const LoadReport& report, const TransportPlan& plan);
std::string hierarchy_json(const Hierarchy& hierarchy, const BottleneckReport& bottleneck);
std::string exponent_fit_json(const ExponentFit& fit);

// Writes `content` to `path` ("-" or empty = stdout).
void write_text_file(const std::string& path, const std::string& content);

}  // namespace coxcap
