// Acceptance suite: one criterion per function, one pass/fail line each.
// Usage: coxcap_acceptance [--cli PATH] [criterion numbers...]
// With no numbers, every criterion runs. Exit 0 iff all selected pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "coxcap/harness.hpp"
#include "test_util.hpp"

using namespace coxcap;

namespace {

std::string g_cli_path;

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

ModelParams make_params(double n, double gamma, double nu, double delta, double alpha,
                        double mu, std::uint64_t seed) {
    ModelParams p;
    p.n = n;
    p.gamma = gamma;
    p.nu = nu;
    p.delta = delta;
    p.alpha = alpha;
    p.mu = mu;
    p.seed = seed;
    return p;
}

// ---- criterion 1: Table II reproduction --------------------------------

Check criterion1() {
    Check c;
    struct Expected {
        double alpha, gamma, nu, delta, e_c;
        Regime regime;
    };
    // hand-checked against the closed-form table; the sixth entry fixes an
    // arithmetic slip in its circulated value (first max-term is
    // 2 - 1.68 + 0.5*0.4 = 0.52 > 0.48, so the first term wins)
    const std::vector<Expected> cases{
        {2.5, 0.2, 0.3, 2.5, 1.0, Regime::I},
        {2.5, 0.6, 0.3, 2.5, 0.5, Regime::I},
        {4.0, 0.3, 0.3, 2.5, 0.9, Regime::II},
        {4.0, 0.5, 0.3, 2.5, 0.15, Regime::III},
        {4.0, 0.48, 0.9, 2.1, 0.5355, Regime::IV},
        {3.5, 0.48, 0.8, 2.5, 0.52, Regime::III},
        {6.0, 0.5, 0.3, 2.5, -0.1125, Regime::V},
    };
    for (const Expected& e : cases) {
        const RegimeReport rep = scaling_exponent(e.alpha, e.gamma, e.delta, e.nu);
        c.require(std::fabs(rep.e_c - e.e_c) <= 1e-12,
                  "e_C mismatch at alpha=" + std::to_string(e.alpha) +
                      " gamma=" + std::to_string(e.gamma) + ": got " + std::to_string(rep.e_c));
        c.require(rep.regime == e.regime,
                  "regime mismatch at alpha=" + std::to_string(e.alpha) +
                      " gamma=" + std::to_string(e.gamma) + ": got " + to_string(rep.regime));
    }

    // regime map structure at nu = 0.3, delta = 2.5
    const double nu = 0.3, delta = 2.5;
    const RegimeMap map = regime_map(2.05, 6.0, 0.0, 1.0, 101, nu, delta);
    for (std::size_t a = 0; a < map.alphas.size(); ++a) {
        for (std::size_t g = 0; g < map.gammas.size(); ++g) {
            const double alpha = map.alphas[a], gamma = map.gammas[g];
            const bool region_I = alpha * gamma <= 1.0 || alpha <= 3.0;
            if ((map.at(a, g).regime == Regime::I) != region_I) {
                c.require(false, "regime-I region mismatch at alpha=" + std::to_string(alpha) +
                                     " gamma=" + std::to_string(gamma));
            }
        }
    }
    // regime II hugs the printed boundary (1-2g)/(a-2) = g - nu/2
    for (double alpha = 3.05; alpha <= 6.0; alpha += 0.05) {
        const double gamma_star = (1.0 + (nu / 2.0) * (alpha - 2.0)) / alpha;
        const double lo = gamma_star - 1e-6, hi = gamma_star + 1e-6;
        if (lo * alpha > 1.0 && lo > 0.0 && hi < 1.0) {
            c.require(scaling_exponent(alpha, lo, delta, nu).regime == Regime::II,
                      "expected regime II just inside the boundary at alpha=" +
                          std::to_string(alpha));
            const Regime outer = scaling_exponent(alpha, hi, delta, nu).regime;
            c.require(outer != Regime::I && outer != Regime::II,
                      "expected regimes III-V just outside the boundary at alpha=" +
                          std::to_string(alpha));
        }
    }
    return c;
}

// ---- criterion 2: continuity and monotonicity --------------------------

Check criterion2() {
    Check c;
    RngStream rng(220108);
    const double tol = 1e-12;

    // alpha*gamma = 1: rows 1 and 2
    for (int i = 0; i < 1000; ++i) {
        const double alpha = 2.0 + rng.uniform(0.001, 4.0);
        const double gamma = 1.0 / alpha;
        const double row1 = 1.0;
        const double row2 = 2.0 - alpha * gamma;
        c.require(std::fabs(row1 - row2) <= tol, "rows 1/2 differ at the alpha*gamma=1 boundary");
    }
    // alpha = 3: rows 2 and 3
    int collected = 0;
    while (collected < 1000) {
        const double gamma = rng.uniform(1.0 / 3.0 + 1e-9, 0.4999);
        const double nu_min = std::max(1e-6, 2.0 * (3.0 * gamma - 1.0));
        if (nu_min >= 1.0) continue;
        const double nu = rng.uniform(nu_min, 1.0 - 1e-9);
        (void)nu;
        const double row2 = 2.0 - 3.0 * gamma;
        const double row3 = (3.0 - 1.0 - 3.0 * gamma) / (3.0 - 2.0);
        c.require(std::fabs(row2 - row3) <= tol, "rows 2/3 differ at the alpha=3 boundary");
        ++collected;
    }
    // (1-2g)/(a-2) = g - nu/2: row 3 against rows 4/5
    collected = 0;
    while (collected < 1000) {
        const double alpha = 3.0 + rng.uniform(0.001, 3.0);
        const double gamma = rng.uniform(1.0 / alpha + 1e-9, 0.4999);
        const double nu = 2.0 * (gamma - (1.0 - 2.0 * gamma) / (alpha - 2.0));
        if (!(nu > 1e-9 && nu < 1.0 - 1e-9)) continue;
        const double delta = 2.0 + rng.uniform(0.001, 2.0);
        const double row3 = (alpha - 1.0 - alpha * gamma) / (alpha - 2.0);
        const double beta = 1.0 - nu - delta * (gamma - 0.5 * nu);
        const double first = 2.0 - alpha * gamma + (alpha - 3.0) * 0.5 * nu;
        const double second = beta > 0.0 ? gamma + beta * (alpha - 1.0) / (alpha - 2.0)
                                         : gamma + beta * (alpha + 1.0) / 2.0;
        c.require(std::fabs(row3 - std::max(first, second)) <= tol,
                  "row 3 and rows 4/5 differ at the bandwidth boundary");
        ++collected;
    }
    // beta = 0: rows 4 and 5
    collected = 0;
    while (collected < 1000) {
        const double delta = 2.0 + rng.uniform(0.05, 2.0);
        const double gamma = rng.uniform(1.0 / delta + 1e-9, 0.4999);
        const double nu = (delta * gamma - 1.0) / (delta / 2.0 - 1.0);
        if (!(nu > 1e-9 && nu < 1.0 - 1e-9)) continue;
        const double alpha = std::max(3.0, 1.0 / gamma) + rng.uniform(0.001, 2.0);
        if ((1.0 - 2.0 * gamma) / (alpha - 2.0) >= gamma - 0.5 * nu) continue;
        const double beta = 1.0 - nu - delta * (gamma - 0.5 * nu);
        const double first = 2.0 - alpha * gamma + (alpha - 3.0) * 0.5 * nu;
        const double row4 = std::max(first, gamma + beta * (alpha - 1.0) / (alpha - 2.0));
        const double row5 = std::max(first, gamma + beta * (alpha + 1.0) / 2.0);
        c.require(std::fabs(row4 - row5) <= tol, "rows 4/5 differ at the beta=0 boundary");
        ++collected;
    }
    // ties of the max expression
    collected = 0;
    while (collected < 1000) {
        const double alpha = 3.0 + rng.uniform(0.001, 3.0);
        const double delta = 2.0 + rng.uniform(0.05, 2.0);
        const double nu = rng.uniform(0.05, 0.95);
        const bool beta_positive_branch = rng.uniform() < 0.5;
        const double coeff =
            beta_positive_branch ? (alpha - 1.0) / (alpha - 2.0) : (alpha + 1.0) / 2.0;
        // solve first(gamma) = second(gamma), both linear in gamma
        const double A = 2.0 + (alpha - 3.0) * 0.5 * nu - coeff * (1.0 - nu + delta * nu / 2.0);
        const double B = alpha + 1.0 - coeff * delta;
        if (std::fabs(B) < 1e-9) continue;
        const double gamma = A / B;
        if (!(gamma > 1.0 / alpha && gamma < 1.0)) continue;
        if ((1.0 - 2.0 * gamma) / (alpha - 2.0) >= gamma - 0.5 * nu) continue;
        const double beta = 1.0 - nu - delta * (gamma - 0.5 * nu);
        if (beta_positive_branch != (beta > 0.0)) continue;
        const double first = 2.0 - alpha * gamma + (alpha - 3.0) * 0.5 * nu;
        const double second = gamma + beta * coeff;
        c.require(std::fabs(first - second) <= 1e-9,
                  "constructed max tie is not a tie (solver drift)");
        const RegimeReport rep = scaling_exponent(alpha, gamma, delta, nu);
        c.require(std::fabs(rep.e_c - std::max(first, second)) <= tol,
                  "dispatched value differs from the max at a tie");
        ++collected;
    }

    // monotonicity on 1e5 random pairs differing in one coordinate
    std::size_t violations = 0;
    for (int i = 0; i < 100000; ++i) {
        const double alpha = 2.0 + rng.uniform(0.001, 4.0);
        const double gamma = rng.uniform(0.0, 1.0);
        const double delta = 2.0 + rng.uniform(0.001, 2.0);
        const double nu = rng.uniform(0.01, 0.99);
        const double base = scaling_exponent(alpha, gamma, delta, nu).e_c;
        const int coord = static_cast<int>(rng.uniform_index(4));
        double a2 = alpha, g2 = gamma, d2 = delta, n2 = nu;
        bool up;
        switch (coord) {
            case 0: a2 = 2.0 + rng.uniform(0.001, 4.0); up = a2 > alpha; break;
            case 1: g2 = rng.uniform(0.0, 1.0); up = g2 > gamma; break;
            case 2: d2 = 2.0 + rng.uniform(0.001, 2.0); up = d2 > delta; break;
            default: n2 = rng.uniform(0.01, 0.99); up = n2 > nu; break;
        }
        const double other = scaling_exponent(a2, g2, d2, n2).e_c;
        const double lo = up ? base : other;
        const double hi = up ? other : base;
        // non-increasing in alpha,gamma,delta; non-decreasing in nu
        const bool ok = coord == 3 ? hi >= lo - 1e-12 : hi <= lo + 1e-12;
        if (!ok) ++violations;
    }
    c.require(violations == 0, std::to_string(violations) + " monotonicity violations");
    c.note("5 boundaries x 1000 points, 1e5 monotonicity pairs");
    return c;
}

// ---- criterion 3: point-process statistics ------------------------------

Check criterion3() {
    Check c;

    // count law: mean N within 3 sigma of n over 200 replicas; the SNCP
    // count is overdispersed, Var(N) = n(1+q)
    {
        ModelParams p = make_params(1e4, 0.25, 0.6, 2.5, 4.0, 0.5, 30801);
        const double q = p.cluster_size();
        RngStream master(p.seed);
        const int reps = 200;
        double total = 0.0;
        for (int r = 0; r < reps; ++r) {
            ModelParams pr = p;
            pr.seed = master.derive(stream_tag::replica, r).key();
            total += static_cast<double>(sample_topology(pr).node_count());
        }
        const double mean = total / reps;
        const double sigma = std::sqrt(p.n * (1.0 + q) / reps);
        c.require(std::fabs(mean - p.n) <= 3.0 * sigma,
                  "count law: |mean - n| = " + std::to_string(std::fabs(mean - p.n)) + " > 3*" +
                      std::to_string(sigma));
        c.note("count mean " + format_g12(mean));
    }

    // radial law: KS < 0.02 at 1e5 node-parent distances
    {
        ModelParams p = make_params(1e6, 0.25, 0.5, 2.5, 4.0, 0.5, 30802);
        const double L = p.edge();
        const Point centre{L / 2, L / 2};
        RngStream master(p.seed);
        std::vector<double> radii;
        for (int r = 0; radii.size() < 100000; ++r) {
            RngStream stream = master.derive(stream_tag::cluster, r);
            for (const Point& pt : sample_cluster_nodes(centre, p, stream))
                radii.push_back(torus_distance(pt, centre, L));
        }
        const double r_max = L / 2;
        auto density = [&](double rho) { return rho * std::min(1.0, std::pow(rho, -p.delta)); };
        const int grid = 40000;
        std::vector<double> cum(grid + 1, 0.0);
        for (int i = 1; i <= grid; ++i)
            cum[i] = cum[i - 1] + testutil::simpson(density, r_max * (i - 1) / grid,
                                                    r_max * static_cast<double>(i) / grid, 4);
        auto cdf = [&](double r) {
            if (r <= 0.0) return 0.0;
            if (r >= r_max) return 1.0;
            const double t = r / r_max * grid;
            const int i = static_cast<int>(t);
            const double frac = t - i;
            return (cum[i] * (1.0 - frac) + cum[i + 1] * frac) / cum[grid];
        };
        const double ks = testutil::ks_statistic(radii, cdf);
        c.require(ks < 0.02, "radial KS = " + std::to_string(ks));
        c.note("radial KS " + format_g12(ks));
    }

    // thinning: quadrat variance/mean within [0.85, 1.15] in >= 95 of 100
    // replicas (32x32 grid; the 10x10 grid of the worked example has
    // sampling noise wider than the target interval)
    {
        ModelParams p = make_params(16384, 0.2, 0.6, 2.5, 4.0, 0.5, 30803);
        RngStream master(p.seed);
        int in_range = 0, usable = 0;
        for (int r = 0; r < 100; ++r) {
            ModelParams pr = p;
            pr.seed = master.derive(stream_tag::replica, r).key();
            const Topology topo = sample_topology(pr);
            const IntensityExtrema ex =
                sampling_intensity_extrema(topo, default_grid_resolution(pr));
            RngStream rng = master.derive(stream_tag::thinning, r);
            const Infrastructure infra = thin_to_hpp(topo, ex.phi_inf, rng, ex.phi_inf);
            if (infra.members.size() < 5000) continue;
            ++usable;
            std::vector<Point> pts;
            pts.reserve(infra.members.size());
            for (std::size_t i : infra.members) pts.push_back(topo.nodes[i].pos);
            const double vmr =
                testutil::variance_mean_ratio(testutil::quadrat_counts(pts, topo.edge, 32));
            if (vmr >= 0.85 && vmr <= 1.15) ++in_range;
        }
        c.require(usable >= 95, "only " + std::to_string(usable) + " replicas reached 5000 points");
        c.require(in_range >= static_cast<int>(std::ceil(0.95 * usable)),
                  "quadrat VMR in range for only " + std::to_string(in_range) + "/" +
                      std::to_string(usable));
        c.note("VMR in range " + std::to_string(in_range) + "/" + std::to_string(usable));
    }
    return c;
}

// ---- criterion 4: intensity pinch stability -----------------------------

Check criterion4() {
    Check c;

    // cluster-dense: G1/g1 <= 16 and stable within 2x across n doublings
    {
        std::vector<double> ratios;
        for (double n : {8192.0, 16384.0, 32768.0}) {
            ModelParams p = make_params(n, 0.2, 0.6, 2.5, 4.0, 0.5, 40801);
            const DensityReport rep = verify_lemma1(p, 8, default_grid_resolution(p));
            c.require(rep.fit_lower > 0.0, "g1 not positive at n=" + format_g12(n));
            const double ratio = rep.fit_upper / rep.fit_lower;
            c.require(ratio <= 16.0,
                      "G1/g1 = " + std::to_string(ratio) + " at n=" + format_g12(n));
            ratios.push_back(ratio);
        }
        const double spread = *std::max_element(ratios.begin(), ratios.end()) /
                              *std::min_element(ratios.begin(), ratios.end());
        c.require(spread <= 2.0, "G1/g1 spread across doublings = " + std::to_string(spread));
        c.note("dense G1/g1 " + format_g12(ratios[0]) + ", " + format_g12(ratios[1]) + ", " +
               format_g12(ratios[2]));
    }

    // cluster-sparse: phi_sup/phi_inf strictly increasing over the n sweep
    // in >= 90% of seeded sweeps
    {
        const std::vector<double> ns{4096, 8192, 16384, 32768, 65536, 131072};
        int monotone = 0;
        const int sweeps = 10;
        for (int s = 0; s < sweeps; ++s) {
            bool increasing = true;
            double prev = -1.0;
            for (double n : ns) {
                ModelParams p = make_params(n, 0.4, 0.3, 2.5, 4.0, 0.5, 40900 + s);
                const double res = std::min(0.5, compute_dc(p) / 10.0);
                // medians of 25 replicas: the per-replica extrema carry
                // ~40% multiplicative noise against a 1.54x growth per
                // doubling, so thin medians flip orderings too often
                const DensityReport rep = verify_lemma1(p, 25, res);
                if (!(rep.phi_inf > 0.0)) {
                    increasing = false;
                    break;
                }
                const double ratio = rep.phi_sup / rep.phi_inf;
                if (ratio <= prev) increasing = false;
                prev = ratio;
            }
            if (increasing) ++monotone;
        }
        c.require(monotone >= 9, "ratio increasing in only " + std::to_string(monotone) + "/10");
        c.note("sparse sup/inf monotone sweeps " + std::to_string(monotone) + "/10");
    }
    return c;
}

// ---- criterion 5: cut-bound ordering and oracle agreement ---------------

Check criterion5() {
    Check c;
    RngStream rng(50801);

    int ordered = 0, evaluated = 0;
    for (int i = 0; i < 110; ++i) {
        ModelParams p = make_params(500 + rng.uniform(0, 2500), rng.uniform(0.2, 0.5),
                                    rng.uniform(0.3, 0.7), 2.0 + rng.uniform(0.3, 1.5),
                                    2.0 + rng.uniform(0.3, 3.0), 0.5, rng.next_u64());
        const Topology topo = sample_topology(p);
        if (topo.node_count() < 4) continue;
        CutStrip strip;
        try {
            strip = find_empty_strip_adaptive(
                topo, strip_width(p, classify_density_condition(p)), 0.1, 24);
        } catch (const no_strip_found_error&) {
            continue;
        }
        ++evaluated;
        const double exact = power_transfer_exact(topo, strip, p.power, p.alpha);
        const double edge = topo.edge * rng.uniform(0.05, 0.25);
        const double squarelet = power_transfer_squarelet(topo, strip, edge);
        if (squarelet >= exact) ++ordered;  // exact assertion, no tolerance
        if (evaluated == 100) break;
    }
    c.require(evaluated >= 100, "only " + std::to_string(evaluated) + " instances had a strip");
    c.require(ordered == evaluated, "squarelet >= exact held on only " + std::to_string(ordered) +
                                        "/" + std::to_string(evaluated));
    c.note("ordering held on " + std::to_string(ordered) + "/" + std::to_string(evaluated));

    int matched = 0, tried = 0;
    for (int i = 0; i < 20; ++i) {
        ModelParams p = make_params(150 + rng.uniform(0, 350), rng.uniform(0.2, 0.45),
                                    rng.uniform(0.3, 0.7), 2.5, 2.0 + rng.uniform(0.3, 3.0), 0.5,
                                    rng.next_u64());
        const Topology topo = sample_topology(p);
        if (topo.node_count() < 4 || topo.node_count() > 500) continue;
        CutStrip strip;
        try {
            strip = find_empty_strip_adaptive(
                topo, strip_width(p, classify_density_condition(p)), 0.1, 24);
        } catch (const no_strip_found_error&) {
            continue;
        }
        ++tried;
        // independent S/D split and plain double loop
        std::vector<std::size_t> S, D;
        const double L = topo.edge;
        for (std::size_t k = 0; k < topo.node_count(); ++k) {
            const Point& pt = topo.nodes[k].pos;
            const double coord = strip.axis == StripAxis::vertical ? pt.x : pt.y;
            double rel = std::fmod(coord - strip.position, L);
            if (rel < 0) rel += L;
            if (rel >= strip.width && rel < 0.5 * L) S.push_back(k);
            else if (rel >= 0.5 * L + strip.width) D.push_back(k);
        }
        const double oracle = testutil::power_sum_oracle(topo, S, D, p.power, p.alpha);
        const double fast = power_transfer_exact(topo, strip, p.power, p.alpha);
        if (testutil::rel_err(oracle, fast) < 1e-12) ++matched;
    }
    c.require(tried >= 15, "too few oracle instances: " + std::to_string(tried));
    c.require(matched == tried,
              "oracle matched on " + std::to_string(matched) + "/" + std::to_string(tried));
    c.note("oracle matched on " + std::to_string(matched) + "/" + std::to_string(tried));
    return c;
}

// ---- criterion 6: exponent recovery -------------------------------------

Check criterion6() {
    Check c;
    const std::vector<double> ns{4096, 8192, 16384, 32768, 65536, 131072};

    // documented poly-log contamination of the regression over this n
    // range, from the synthetic check: one log factor shifts the slope by
    // about +0.10
    {
        std::vector<SweepRow> synth;
        for (double n : ns) {
            SweepRow row;
            row.n = n;
            row.value = std::sqrt(n) * std::log(n);
            synth.push_back(row);
        }
        const double drift = fit_exponent(synth).slope - 0.5;
        c.note("one-log synthetic drift " + format_g12(drift));
    }

    struct Config {
        double alpha, gamma, expected;
        std::uint64_t seed;
    };
    for (const Config& cfg : {Config{2.5, 0.6, 0.5, 60801}, Config{2.5, 0.2, 1.0, 60802}}) {
        SweepSpec spec;
        spec.base = make_params(1e4, cfg.gamma, 0.3, 2.5, cfg.alpha, 0.5, cfg.seed);
        spec.quantity = SweepQuantity::cut_upper_bound;
        spec.n_values = ns;
        spec.replicas = 20;
        const SweepResult res = run_sweep(spec);
        std::size_t failures = 0;
        for (const SweepRow& row : res.rows)
            if (!row.ok) ++failures;
        const ExponentFit fit = fit_exponent(res.rows, cfg.expected);
        c.require(std::fabs(fit.deviation) <= 0.15,
                  "slope " + format_g12(fit.slope) + " vs expected " + format_g12(cfg.expected) +
                      " at gamma=" + format_g12(cfg.gamma));
        c.note("gamma=" + format_g12(cfg.gamma) + " slope " + format_g12(fit.slope) + " (r2 " +
               format_g12(fit.r_squared) + ", " + std::to_string(failures) + " failures)");
    }
    return c;
}

// ---- criterion 7: Gilbert components vs BFS oracle ----------------------

Check criterion7() {
    Check c;
    RngStream rng(70801);
    int matched = 0;
    const int instances = 200;
    for (int i = 0; i < instances; ++i) {
        const double L = 10.0 + rng.uniform(0.0, 60.0);
        const std::size_t m = 1 + rng.uniform_index(500);
        std::vector<Point> centres;
        centres.reserve(m);
        for (std::size_t j = 0; j < m; ++j)
            centres.push_back({rng.uniform(0, L), rng.uniform(0, L)});
        const double d_k = rng.uniform(0.2, 4.0);
        auto fast = components_at_radius(centres, d_k, L);
        std::sort(fast.begin(), fast.end());
        const auto oracle = testutil::bfs_components_oracle(centres, d_k, L);
        if (fast == oracle) ++matched;
    }
    c.require(matched == instances,
              "partition matched on " + std::to_string(matched) + "/200 instances");
    c.note("matched " + std::to_string(matched) + "/200");
    return c;
}

// ---- criterion 8: hierarchy invariants ----------------------------------

Check criterion8() {
    Check c;

    // closed-form worked depth at the n=1e4 parameters
    {
        ModelParams p = make_params(1e4, 0.25, 0.3, 2.5, 4.0, 0.5, 1);
        const double d1 = p.mu * compute_dc(p);
        const double lambda1 = p.cluster_size() * std::pow(d1, -p.delta);
        c.require(k_max(p, lambda1) == 3,
                  "worked K_max = " + std::to_string(k_max(p, lambda1)) + ", expected 3");
    }

    auto run_seeds = [&](double n, int seeds, double& max_comp_over_log,
                         std::size_t& area_ok, std::size_t& area_total,
                         std::size_t& bn_ok, std::size_t& bn_total, bool check_invariants) {
        ModelParams base = make_params(n, 0.4, 0.3, 2.5, 4.0, 0.5, 80801);
        RngStream master(base.seed + static_cast<std::uint64_t>(n));
        max_comp_over_log = 0.0;
        for (int s = 0; s < seeds; ++s) {
            ModelParams p = base;
            p.seed = master.derive(stream_tag::replica, s).key();
            const Topology topo = sample_topology(p);
            HierarchyOptions opts;
            opts.area_samples = 100000;
            const Hierarchy h = build_hierarchy(topo, p, opts);

            if (check_invariants) {
                // exact nesting via per-node distance to the closest centre
                std::vector<double> d_min(topo.node_count(),
                                          std::numeric_limits<double>::infinity());
                for (std::size_t i = 0; i < topo.node_count(); ++i)
                    for (const Point& ctr : topo.centres)
                        d_min[i] = std::min(
                            d_min[i], torus_distance(topo.nodes[i].pos, ctr, topo.edge));
                for (std::size_t k = 1; k < h.layers.size(); ++k) {
                    for (std::size_t i = 0; i < topo.node_count(); ++i) {
                        const bool in_outer = d_min[i] <= h.layers[k - 1].d_k || k == 1;
                        const bool in_inner = d_min[i] <= h.layers[k].d_k;
                        if (in_inner && !in_outer)
                            c.require(false, "nesting violation at layer " + std::to_string(k));
                    }
                    for (std::size_t i : h.layers[k].infrastructure)
                        if (d_min[i] > h.layers[k].d_k)
                            c.require(false, "member outside its domain at layer " +
                                                 std::to_string(k));
                }
                for (std::size_t k = 2; k < h.layers.size(); ++k) {
                    if (testutil::rel_err(h.layers[k].lambda_k,
                                          2.0 * h.layers[k - 1].lambda_k) > 1e-12)
                        c.require(false, "lambda doubling violated at layer " + std::to_string(k));
                }
            }

            if (h.layers.size() >= 2) {
                const DomainLayer& layer1 = h.layers[1];
                const double log_n = std::log(p.n);
                const double pi_d2 = M_PI * layer1.d_k * layer1.d_k;
                for (const Component& comp : layer1.components) {
                    max_comp_over_log = std::max(
                        max_comp_over_log,
                        static_cast<double>(comp.centre_indices.size()) / log_n);
                    ++area_total;
                    // 1% slack on the lower edge covers the Monte Carlo
                    // noise of single-ball components (its exact area IS
                    // the endpoint)
                    if (comp.area >= pi_d2 * 0.99 && comp.area <= pi_d2 * log_n) ++area_ok;
                }
            }

            const BottleneckReport rep = bottleneck_check(h, p);
            bn_ok += rep.checks - rep.violations;
            bn_total += rep.checks;
        }
    };

    double c16 = 0.0, c15 = 0.0;
    std::size_t area_ok = 0, area_total = 0, bn_ok = 0, bn_total = 0;
    std::size_t dummy_ok = 0, dummy_total = 0, bn15_ok = 0, bn15_total = 0;
    run_seeds(65536.0, 100, c16, area_ok, area_total, bn_ok, bn_total, true);
    run_seeds(32768.0, 30, c15, dummy_ok, dummy_total, bn15_ok, bn15_total, false);

    c.require(area_total > 0, "no layer-1 components observed");
    c.require(static_cast<double>(area_ok) >= 0.95 * static_cast<double>(area_total),
              "areas in [pi d1^2, pi d1^2 ln n] for only " + std::to_string(area_ok) + "/" +
                  std::to_string(area_total));
    c.require(bn_total > 0, "no bottleneck checks ran");
    c.require(static_cast<double>(bn_ok) >= 0.9 * static_cast<double>(bn_total),
              "bottleneck monotonicity " + std::to_string(bn_ok) + "/" +
                  std::to_string(bn_total));
    c.require(c16 > 0.0 && c15 > 0.0, "missing layer-1 components in a sweep");
    const double stability = std::max(c16, c15) / std::min(c16, c15);
    c.require(stability <= 2.0,
              "max component / ln n unstable across doubling: " + std::to_string(stability));
    c.note("areas " + std::to_string(area_ok) + "/" + std::to_string(area_total) +
           ", bottleneck " + std::to_string(bn_ok) + "/" + std::to_string(bn_total) +
           ", C(2^16)=" + format_g12(c16) + " C(2^15)=" + format_g12(c15));
    return c;
}

// ---- criterion 9: end-to-end CLI determinism ----------------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Check criterion9() {
    Check c;
    if (g_cli_path.empty()) {
        c.require(false, "CLI path not provided (pass --cli PATH)");
        return c;
    }
    const std::string dir = "/tmp/coxcap_acceptance9";
    std::system(("mkdir -p " + dir).c_str());

    const std::vector<std::pair<std::string, std::string>> invocations{
        {"generate", "--n 3000 --gamma 0.25 --nu 0.4 --seed 90801 generate"},
        {"map", "--nu 0.3 --delta 2.5 classify --map --steps 41"},
        {"sweep", "--gamma 0.4 --nu 0.3 --alpha 4 --seed 90802 sweep --quantity "
                  "infrastructure-size --n-min 512 --n-max 2048 --n-points 3 --replicas 2"},
        {"hier", "--n 4096 --gamma 0.4 --nu 0.3 --seed 90803 hierarchy --samples 20000"},
        {"cut", "--n 2000 --gamma 0.25 --nu 0.3 --alpha 2.5 --seed 90804 cutbound "
                "--max-halvings 20"},
    };
    for (const auto& [name, args] : invocations) {
        const std::string f1 = dir + "/" + name + "_1.out";
        const std::string f2 = dir + "/" + name + "_2.out";
        const std::string base = "\"" + g_cli_path + "\" " + args;
        const int rc1 = std::system((base + " --out " + f1 + " >/dev/null 2>&1").c_str());
        const int rc2 = std::system((base + " --out " + f2 + " >/dev/null 2>&1").c_str());
        c.require(rc1 == 0 && rc2 == 0, name + ": CLI exited nonzero");
        const std::string a = slurp(f1), b = slurp(f2);
        c.require(!a.empty(), name + ": empty output");
        c.require(a == b, name + ": outputs differ between identical invocations");
    }
    c.note(std::to_string(invocations.size()) + " invocation pairs byte-identical");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) {
            g_cli_path = argv[++i];
        } else {
            selected.push_back(std::atoi(arg.c_str()));
        }
    }
    if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

    const std::map<int, std::pair<const char*, std::function<Check()>>> criteria{
        {1, {"Table II reproduction", criterion1}},
        {2, {"continuity and monotonicity", criterion2}},
        {3, {"point-process statistics", criterion3}},
        {4, {"intensity pinch stability", criterion4}},
        {5, {"cut-bound ordering and oracle agreement", criterion5}},
        {6, {"exponent recovery", criterion6}},
        {7, {"Gilbert components vs BFS oracle", criterion7}},
        {8, {"hierarchy invariants", criterion8}},
        {9, {"end-to-end CLI determinism", criterion9}},
    };

    bool all_pass = true;
    for (int id : selected) {
        const auto it = criteria.find(id);
        if (it == criteria.end()) {
            std::printf("[FAIL] criterion %d: unknown criterion\n", id);
            all_pass = false;
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Check result;
        try {
            result = it->second.second();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n", result.pass ? "PASS" : "FAIL", id,
                    it->second.first, secs, result.detail.empty() ? "" : " -- ",
                    result.detail.c_str());
        std::fflush(stdout);
        if (!result.pass) all_pass = false;
    }
    return all_pass ? 0 : 1;
}
