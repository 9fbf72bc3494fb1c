// spincavity — batch front-end for the spin-cavity entanglement studies
//
// Subcommands reproduce the reference studies with no overrides: parity-scan,
// chirality-scan, driving-scan, disorder, optimize, trotter. Every run writes
// its outputs plus a manifest.json holding the resolved configuration and its
// content hash, so any CSV can be regenerated from the manifest alone.
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical error, 4 optimization
// budget exhausted (result still written).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spincavity/disorder.hpp"
#include "spincavity/lindblad.hpp"
#include "spincavity/optimizer.hpp"
#include "spincavity/serialize.hpp"
#include "spincavity/stats.hpp"
#include "spincavity/studies.hpp"
#include "spincavity/svg.hpp"
#include "spincavity/trotter.hpp"

namespace fs = std::filesystem;
using namespace spincavity;

namespace {

constexpr double kPi = std::numbers::pi;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    int jobs = 0;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& opts, const std::string& default_out) {
    opts.out_dir = default_out;
    cmd->add_option("--config", opts.config_path, "model parameter JSON file");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--jobs", opts.jobs, "worker thread bound (0 = library default)");
    cmd->add_option("--set", opts.overrides, "override a config key, e.g. --set L=12")
        ->take_all();
}

json resolve_config(const CommonOpts& opts, const ModelParams& defaults) {
    json j = to_json(defaults);
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw ParameterError("cannot open config file " + opts.config_path);
        in >> j;
    }
    for (const std::string& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ParameterError("--set expects key=value, got '" + kv + "'");
        }
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        try {
            j[key] = json::parse(value);
        } catch (const json::parse_error&) {
            j[key] = value;
        }
    }
    return j;
}

void apply_jobs(const CommonOpts& opts) {
#ifdef _OPENMP
    if (opts.jobs > 0) omp_set_num_threads(opts.jobs);
#else
    (void)opts;
#endif
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const json& options, const CommonOpts& opts,
                    const std::vector<std::string>& outputs) {
    json m;
    m["command"] = command;
    m["seed"] = opts.seed;
    m["jobs"] = opts.jobs;
    m["config"] = config;
    m["options"] = options;
    m["config_sha1"] = sha1_hex(config.dump());
    m["outputs"] = outputs;
    std::ofstream out(dir / "manifest.json");
    out << m.dump(1) << '\n';
}

fs::path prepare_out(const CommonOpts& opts) {
    const fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    return dir;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// ------------------------------- parity-scan ---------------------------------

int cmd_parity_scan(const CommonOpts& opts, int lmin, int lmax, double t_end, double dt,
                    int heat_stride) {
    if (lmax < lmin) throw ParameterError("parity-scan: empty L range");
    apply_jobs(opts);
    const json config = resolve_config(opts, ModelParams::ordered_chain(10, {2, 8}, 0.1, kPi / 4));
    const ModelParams base = model_params_from_json(config);
    const double g = base.g_left.at(0);
    const double phi = base.phi.at(0);
    const auto dir = prepare_out(opts);

    const auto scan = parity_scan(lmin, lmax, g, phi, t_end, dt);
    {
        CsvWriter csv((dir / "parity_summary.csv").string());
        csv.header({"L", "C_m", "Jt_m"});
        for (const auto& pt : scan.points) {
            csv.row({static_cast<double>(pt.L), pt.c_max, pt.t_max});
        }
    }
    std::vector<std::vector<double>> heat;
    std::vector<double> heat_times;
    {
        CsvWriter csv((dir / "parity_heatmap.csv").string());
        csv.header({"L", "Jt", "C"});
        for (const auto& pt : scan.points) {
            std::vector<double> row;
            for (std::size_t i = 0; i < scan.times.size(); i += static_cast<std::size_t>(heat_stride)) {
                csv.row({static_cast<double>(pt.L), scan.times[i], pt.c[i]});
                row.push_back(pt.c[i]);
                if (pt.L == lmin) heat_times.push_back(scan.times[i]);
            }
            heat.push_back(std::move(row));
        }
    }
    {
        std::vector<double> ls;
        svg::Series cm{"C_m", {}, {}}, tm{"Jt_m / Jt_end", {}, {}};
        for (const auto& pt : scan.points) {
            ls.push_back(pt.L);
            cm.x.push_back(pt.L);
            cm.y.push_back(pt.c_max);
            tm.x.push_back(pt.L);
            tm.y.push_back(pt.t_max / t_end);
        }
        svg::line_chart((dir / "parity_summary.svg").string(), {cm, tm},
                        "Peak concurrence versus cavity length", "L", "C_m");
        svg::heatmap((dir / "parity_heatmap.svg").string(), heat_times, ls, heat,
                     "Concurrence versus time and cavity length", "Jt", "L");
    }
    write_manifest(dir, "parity-scan", config,
                   json{{"lmin", lmin}, {"lmax", lmax}, {"t_end", t_end}, {"dt", dt},
                        {"heat_stride", heat_stride}},
                   opts, {"parity_summary.csv", "parity_heatmap.csv", "parity_summary.svg",
                          "parity_heatmap.svg"});
    for (const auto& pt : scan.points) {
        std::cout << "L=" << pt.L << "  C_m=" << fmt(pt.c_max) << "  Jt_m=" << fmt(pt.t_max)
                  << '\n';
    }
    return 0;
}

// ------------------------------ chirality-scan --------------------------------

int cmd_chirality_scan(const CommonOpts& opts, int n_phi, double t_end, double dt,
                       int heat_stride) {
    if (n_phi < 1) throw ParameterError("chirality-scan: need at least one phase");
    apply_jobs(opts);
    const json config = resolve_config(opts, ModelParams::ordered_chain(6, {2, 5}, 0.1, 0.0));
    const ModelParams base = model_params_from_json(config);
    const auto dir = prepare_out(opts);

    std::vector<double> phis;
    for (int i = 0; i < n_phi; ++i) {
        phis.push_back(n_phi == 1 ? 0.0 : kPi / 2 * i / (n_phi - 1));
    }
    const auto scan = chirality_scan(phis, base.L, base.pos, base.g_left.at(0), t_end, dt);
    {
        CsvWriter csv((dir / "chirality_summary.csv").string());
        csv.header({"phi", "C_m", "Jt_m"});
        for (const auto& pt : scan.points) csv.row({pt.phi, pt.c_max, pt.t_max});
    }
    std::vector<std::vector<double>> heat;
    std::vector<double> heat_times;
    {
        CsvWriter csv((dir / "chirality_heatmap.csv").string());
        csv.header({"phi", "Jt", "C"});
        for (const auto& pt : scan.points) {
            std::vector<double> row;
            for (std::size_t i = 0; i < scan.times.size(); i += static_cast<std::size_t>(heat_stride)) {
                csv.row({pt.phi, scan.times[i], pt.c[i]});
                row.push_back(pt.c[i]);
                if (&pt == &scan.points.front()) heat_times.push_back(scan.times[i]);
            }
            heat.push_back(std::move(row));
        }
    }
    // symmetry of the pattern about phi = pi/4
    double symmetry_dev = 0.0;
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
        const std::size_t mirror = scan.points.size() - 1 - i;
        symmetry_dev = std::max(symmetry_dev,
                                std::abs(scan.points[i].c_max - scan.points[mirror].c_max));
    }
    {
        svg::Series cm{"C_m", {}, {}}, tm{"Jt_m", {}, {}};
        std::vector<double> ph;
        for (const auto& pt : scan.points) {
            ph.push_back(pt.phi);
            cm.x.push_back(pt.phi);
            cm.y.push_back(pt.c_max);
            tm.x.push_back(pt.phi);
            tm.y.push_back(pt.t_max / t_end);
        }
        svg::line_chart((dir / "chirality_summary.svg").string(), {cm, tm},
                        "Peak concurrence versus hopping phase", "phi", "C_m, Jt_m/Jt_end");
        svg::heatmap((dir / "chirality_heatmap.svg").string(), heat_times, ph, heat,
                     "Concurrence versus time and hopping phase", "Jt", "phi");
    }
    write_manifest(dir, "chirality-scan", config,
                   json{{"n_phi", n_phi}, {"t_end", t_end}, {"dt", dt},
                        {"heat_stride", heat_stride}, {"symmetry_max_dev", symmetry_dev}},
                   opts, {"chirality_summary.csv", "chirality_heatmap.csv",
                          "chirality_summary.svg", "chirality_heatmap.svg"});
    std::cout << "symmetry about pi/4: max |C_m(phi) - C_m(pi/2-phi)| = " << fmt(symmetry_dev)
              << '\n';
    return 0;
}

// ------------------------------- driving-scan ---------------------------------

int cmd_driving_scan(const CommonOpts& opts, double omega_min, double omega_max, double step,
                     double t_end, double dt) {
    if (step <= 0 || omega_max < omega_min) throw ParameterError("driving-scan: bad grid");
    apply_jobs(opts);
    const json config = resolve_config(opts, driving_base_params());
    const ModelParams base = model_params_from_json(config);
    const auto dir = prepare_out(opts);

    std::vector<double> omegas;
    for (double w = omega_min; w <= omega_max + 1e-12; w += step) omegas.push_back(w);
    const auto scan = driving_scan(omegas, base, t_end, dt);
    {
        CsvWriter csv((dir / "driving_scan.csv").string());
        csv.header({"Omega", "C_m", "Jt_m"});
        for (const auto& pt : scan.points) csv.row({pt.omega, pt.c_max, pt.t_max});
    }
    {
        CsvWriter csv((dir / "driving_dips.csv").string());
        csv.header({"k", "Omega"});
        for (const auto& dip : scan.predicted_dips) {
            csv.row({static_cast<double>(dip.k), dip.omega});
        }
    }
    {
        svg::Series cm{"C_m", {}, {}};
        for (const auto& pt : scan.points) {
            cm.x.push_back(pt.omega);
            cm.y.push_back(pt.c_max);
        }
        std::vector<double> marks;
        for (const auto& dip : scan.predicted_dips) marks.push_back(dip.omega);
        svg::line_chart((dir / "driving_scan.svg").string(), {cm},
                        "Peak concurrence versus driving strength", "Omega/J", "C_m", marks);
    }
    write_manifest(dir, "driving-scan", config,
                   json{{"omega_min", omega_min}, {"omega_max", omega_max}, {"step", step},
                        {"t_end", t_end}, {"dt", dt}},
                   opts, {"driving_scan.csv", "driving_dips.csv", "driving_scan.svg"});
    return 0;
}

// --------------------------------- disorder -----------------------------------

int cmd_disorder(const CommonOpts& opts, std::vector<double> ws, int n_real, double t_end,
                 double dt, int scatter_n, std::vector<double> ipr_ws) {
    apply_jobs(opts);
    const json config = resolve_config(opts, driving_base_params());
    const ModelParams base = model_params_from_json(config);
    const auto dir = prepare_out(opts);
    std::vector<std::string> outputs;
    const auto times = time_grid(t_end, dt);

    CsvWriter mean_csv((dir / "mean_concurrence.csv").string());
    std::vector<std::string> mean_header = {"Jt"};
    for (double w : ws) mean_header.push_back("mean_C_W" + fmt(w));
    mean_csv.header(mean_header);
    std::vector<std::vector<double>> mean_cols;
    std::vector<svg::Series> mean_series;

    for (double w : ws) {
        const DisorderSpec spec{w, n_real, opts.seed};
        const auto res = run_ensemble(base, spec, times);
        const std::string tag = "W" + fmt(w);
        {
            CsvWriter csv((dir / ("ensemble_" + tag + ".csv")).string());
            csv.header({"realization_id", "seed", "W", "C_m", "Jt_m", "ipr_mean"});
            for (std::size_t r = 0; r < res.realizations.size(); ++r) {
                const auto& rec = res.realizations[r];
                csv.row({static_cast<double>(r), static_cast<double>(opts.seed), w, rec.c_max,
                         rec.t_max, rec.ipr_mean});
            }
            outputs.push_back("ensemble_" + tag + ".csv");
        }
        {
            json sidecar = json::array();
            for (const auto& rec : res.realizations) sidecar.push_back(rec.delta_c);
            std::ofstream out(dir / ("realizations_" + tag + ".json"));
            out << sidecar.dump(1) << '\n';
            outputs.push_back("realizations_" + tag + ".json");
        }
        mean_cols.push_back(res.mean_c);
        mean_series.push_back({"W=" + fmt(w), times, res.mean_c});
        std::cout << "W=" << fmt(w) << ": mean-trace max = " << fmt(res.mean_c_max) << '\n';
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> row = {times[i]};
        for (const auto& col : mean_cols) row.push_back(col[i]);
        mean_csv.row(row);
    }
    outputs.push_back("mean_concurrence.csv");
    svg::line_chart((dir / "mean_concurrence.svg").string(), mean_series,
                    "Ensemble-averaged concurrence", "Jt", "mean C");
    outputs.push_back("mean_concurrence.svg");

    for (double w : ipr_ws) {
        const auto hist = ipr_energy_histogram(base, {w, n_real, opts.seed});
        const std::string name = "ipr_W" + fmt(w) + ".csv";
        CsvWriter csv((dir / name).string());
        csv.header({"energy", "ipr"});
        for (std::size_t i = 0; i < hist.energies.size(); ++i) {
            csv.row({hist.energies[i], hist.iprs[i]});
        }
        outputs.push_back(name);
    }

    double rho = 0.0;
    if (scatter_n > 0) {
        CsvWriter csv((dir / "scatter.csv").string());
        csv.header({"W", "C_m", "ipr_mean"});
        std::vector<double> cs, iprs;
        SplitMix64 wrng = substream(opts.seed, 0xD15C0);
        for (int r = 0; r < scatter_n; ++r) {
            const DisorderSpec spec{wrng.uniform(0.0, 2.0), 1,
                                    opts.seed + 1000 + static_cast<std::uint64_t>(r)};
            const auto delta = draw_disorder(spec, base.L, 0);
            const auto rep = replay_realization(delta, base, times);
            csv.row({spec.W, rep.trace.c_max, rep.ipr_mean});
            cs.push_back(rep.trace.c_max);
            iprs.push_back(rep.ipr_mean);
        }
        rho = spearman(cs, iprs);
        outputs.push_back("scatter.csv");
        std::cout << "scatter: spearman(C_m, mean IPR) = " << fmt(rho) << '\n';
    }
    write_manifest(dir, "disorder", config,
                   json{{"W", ws}, {"n", n_real}, {"t_end", t_end}, {"dt", dt},
                        {"scatter_n", scatter_n}, {"ipr_W", ipr_ws}, {"spearman", rho}},
                   opts, outputs);
    return 0;
}

// --------------------------------- optimize -----------------------------------

int cmd_optimize(const CommonOpts& opts, const std::string& mode_name, double r, double t_f,
                 long budget, int restarts, const std::string& fixture, double gamma) {
    apply_jobs(opts);
    const json config = resolve_config(opts, driving_base_params());
    const ModelParams base = model_params_from_json(config);
    const auto dir = prepare_out(opts);

    json report;
    ModelParams best = base;
    bool exhausted = false;
    if (!fixture.empty()) {
        const auto set = load_optimized_set(fixture);
        const auto& row = set.row_for(t_f);
        best = set.apply(row);
        report["mode"] = set.mode;
        report["r"] = set.r;
        report["fixture"] = fixture;
    } else {
        ObjectiveSpec spec;
        if (mode_name == "onsite") {
            spec.mode = EngineeringMode::OnSite;
        } else if (mode_name == "hopping") {
            spec.mode = EngineeringMode::Hopping;
        } else {
            throw ParameterError("optimize: --mode must be onsite or hopping");
        }
        spec.r = r;
        spec.t_f = t_f;
        spec.angles.assign(ObjectiveSpec::angle_count(spec.mode, base), kPi / 2);
        PowellOptions popt;
        popt.budget = budget;
        popt.restarts = restarts;
        popt.seed = opts.seed;
        const auto result = optimize(spec, base, popt);
        best = result.params;
        exhausted = result.budget_exhausted;
        report["mode"] = mode_name;
        report["r"] = r;
        report["angles"] = result.best.angles;
        report["evaluations"] = result.evaluations;
        report["budget"] = budget;
        report["restarts"] = restarts;
        report["budget_exhausted"] = result.budget_exhausted;
        json hist = json::array();
        for (const auto& [evals, value] : result.history) {
            hist.push_back({{"evaluations", evals}, {"best", value}});
        }
        report["history"] = hist;
    }

    // replay the winning parameters (with decay when requested)
    ConcurrenceTrace trace;
    if (gamma > 0.0) {
        const auto d = DissipationParams::uniform(best, gamma);
        trace = replay_with_dissipation(best, d, time_grid(t_f, 0.01)).trace;
        report["gamma"] = gamma;
    } else {
        const SiteOrdering ord = SiteOrdering::from(best);
        const Propagator prop(build_single_excitation_h(best));
        StateVector psi0 = StateVector::Zero(ord.total());
        psi0(ord.atom_slot.at(0)) = 1.0;
        trace = concurrence_trace_single_excitation(prop, psi0, ord, time_grid(t_f, 0.01)).trace;
    }
    report["t_f"] = t_f;
    report["C_m"] = trace.c_max;
    report["Jt_m"] = trace.t_max;
    report["params"] = to_json(best);
    {
        std::ofstream out(dir / "report.json");
        out << report.dump(1) << '\n';
    }
    {
        CsvWriter csv((dir / "trace.csv").string());
        csv.header({"Jt", "C"});
        for (std::size_t i = 0; i < trace.times.size(); ++i) csv.row({trace.times[i], trace.c[i]});
    }
    svg::line_chart((dir / "trace.svg").string(), {{"C", trace.times, trace.c}},
                    "Concurrence of the engineered cavity", "Jt", "C");
    write_manifest(dir, "optimize", config, report, opts, {"report.json", "trace.csv", "trace.svg"});
    std::cout << "C_m = " << fmt(trace.c_max) << " at Jt = " << fmt(trace.t_max) << '\n';
    return exhausted ? 4 : 0;
}

// ---------------------------------- trotter -----------------------------------

int cmd_trotter(const CommonOpts& opts, std::vector<double> dts, double t_final) {
    apply_jobs(opts);
    const json config = resolve_config(opts, ModelParams::ordered_chain(6, {2, 5}, 0.1, kPi / 4));
    const ModelParams base = model_params_from_json(config);
    const auto dir = prepare_out(opts);
    std::vector<std::string> outputs;
    json summary;

    for (double phi : {0.0, kPi / 4}) {
        ModelParams p = base;
        for (double& f : p.phi) f = phi;
        const auto cmp = trotter_vs_exact(p, dts, t_final);
        const std::string tag = phi == 0.0 ? "phi0" : "phiq";
        std::vector<std::string> header = {"Jt", "C_exact"};
        for (const auto& run : cmp.runs) header.push_back("C_trotter_dt" + fmt(run.dt));
        CsvWriter csv((dir / ("trotter_" + tag + ".csv")).string());
        csv.header(header);
        std::map<double, std::vector<double>> rows;
        for (std::size_t i = 0; i < cmp.exact_times.size(); ++i) {
            rows[cmp.exact_times[i]] = {cmp.exact_c[i]};
            rows[cmp.exact_times[i]].resize(1 + cmp.runs.size(), std::nan(""));
        }
        for (std::size_t r = 0; r < cmp.runs.size(); ++r) {
            for (std::size_t i = 0; i < cmp.runs[r].times.size(); ++i) {
                rows[cmp.runs[r].times[i]][1 + r] = cmp.runs[r].c[i];
            }
        }
        std::vector<svg::Series> series = {{"exact", cmp.exact_times, cmp.exact_c}};
        for (const auto& run : cmp.runs) {
            series.push_back({"dt=" + fmt(run.dt), run.times, run.c});
        }
        for (const auto& [t, vals] : rows) {
            std::vector<double> row = {t};
            row.insert(row.end(), vals.begin(), vals.end());
            csv.row(row);
        }
        outputs.push_back("trotter_" + tag + ".csv");
        svg::line_chart((dir / ("trotter_" + tag + ".svg")).string(), series,
                        "Trotterized versus exact concurrence", "Jt", "C");
        outputs.push_back("trotter_" + tag + ".svg");

        json runs_json = json::array();
        for (const auto& run : cmp.runs) {
            runs_json.push_back({{"dt", run.dt},
                                 {"steps", run.steps},
                                 {"peak_C", run.peak_c},
                                 {"peak_Jt", run.peak_time},
                                 {"step_duration_us", run.step_duration_us},
                                 {"total_duration_us", run.total_duration_us}});
        }
        summary[tag] = runs_json;
    }
    // gate listing for one step of the base model
    {
        const auto step = trotter_step(base, dts.front());
        std::ofstream out(dir / "gates_one_step.txt");
        out << export_gates(step);
        outputs.push_back("gates_one_step.txt");
        summary["one_step_duration_us"] = step.duration_ns() / 1000.0;
        summary["coherence_window_us"] = {200.0, 300.0};
    }
    write_manifest(dir, "trotter", config,
                   json{{"dts", dts}, {"t_final", t_final}, {"summary", summary}}, opts, outputs);
    std::cout << summary.dump(1) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-cavity entanglement studies"};
    app.require_subcommand(1);

    CommonOpts parity_opts, chirality_opts, driving_opts, disorder_opts, optimize_opts,
        trotter_opts;

    auto* parity = app.add_subcommand("parity-scan", "peak concurrence versus cavity length");
    int lmin = 5, lmax = 50, heat_stride = 10;
    double parity_tend = 2000.0, parity_dt = 0.1;
    parity->add_option("--lmin", lmin);
    parity->add_option("--lmax", lmax);
    parity->add_option("--tend", parity_tend);
    parity->add_option("--dt", parity_dt);
    parity->add_option("--heat-stride", heat_stride);
    add_common(parity, parity_opts, "out/parity-scan");

    auto* chirality = app.add_subcommand("chirality-scan", "peak concurrence versus hopping phase");
    int n_phi = 33;
    double chi_tend = 600.0, chi_dt = 0.1;
    int chi_stride = 5;
    chirality->add_option("--nphi", n_phi);
    chirality->add_option("--tend", chi_tend);
    chirality->add_option("--dt", chi_dt);
    chirality->add_option("--heat-stride", chi_stride);
    add_common(chirality, chirality_opts, "out/chirality-scan");

    auto* driving = app.add_subcommand("driving-scan", "peak concurrence versus driving strength");
    double omega_min = 0.01, omega_max = 1.2, omega_step = 0.01;
    double drv_tend = 400.0, drv_dt = 1.0;
    driving->add_option("--omega-min", omega_min);
    driving->add_option("--omega-max", omega_max);
    driving->add_option("--step", omega_step);
    driving->add_option("--tend", drv_tend);
    driving->add_option("--dt", drv_dt);
    add_common(driving, driving_opts, "out/driving-scan");

    auto* disorder = app.add_subcommand("disorder", "seeded disorder ensembles");
    std::vector<double> ws = {0.1, 0.3, 1.5, 2.0};
    std::vector<double> ipr_ws = {0.1, 0.4, 1.0};
    int n_real = 200, scatter_n = 0;
    double dis_tend = 2000.0, dis_dt = 0.25;
    disorder->add_option("--W", ws)->take_all();
    disorder->add_option("--n", n_real);
    disorder->add_option("--tend", dis_tend);
    disorder->add_option("--dt", dis_dt);
    disorder->add_option("--scatter", scatter_n);
    disorder->add_option("--ipr-W", ipr_ws)->take_all();
    add_common(disorder, disorder_opts, "out/disorder");

    auto* optimizecmd = app.add_subcommand("optimize", "engineer on-site energies or hoppings");
    std::string mode = "onsite", fixture;
    double r = 1.0, t_f = 30.0, gamma = 0.0;
    long budget = 5000;
    int restarts = 8;
    optimizecmd->add_option("--mode", mode, "onsite|hopping");
    optimizecmd->add_option("--r", r, "restriction bound");
    optimizecmd->add_option("--tf", t_f, "stopping time (1/J)");
    optimizecmd->add_option("--budget", budget, "objective evaluations");
    optimizecmd->add_option("--restarts", restarts);
    optimizecmd->add_option("--fixture", fixture, "replay a fixture instead of optimizing");
    optimizecmd->add_option("--gamma", gamma, "uniform decay rate for the replay");
    add_common(optimizecmd, optimize_opts, "out/optimize");

    auto* trotter = app.add_subcommand("trotter", "digital-circuit emulation versus exact");
    std::vector<double> dts = {5.0, 10.0};
    double t_final = 360.0;
    trotter->add_option("--dt", dts)->take_all();
    trotter->add_option("--tfinal", t_final);
    add_common(trotter, trotter_opts, "out/trotter");

    try {
        app.parse(argc, argv);
        if (parity->parsed()) {
            return cmd_parity_scan(parity_opts, lmin, lmax, parity_tend, parity_dt, heat_stride);
        }
        if (chirality->parsed()) {
            return cmd_chirality_scan(chirality_opts, n_phi, chi_tend, chi_dt, chi_stride);
        }
        if (driving->parsed()) {
            return cmd_driving_scan(driving_opts, omega_min, omega_max, omega_step, drv_tend,
                                    drv_dt);
        }
        if (disorder->parsed()) {
            return cmd_disorder(disorder_opts, ws, n_real, dis_tend, dis_dt, scatter_n, ipr_ws);
        }
        if (optimizecmd->parsed()) {
            return cmd_optimize(optimize_opts, mode, r, t_f, budget, restarts, fixture, gamma);
        }
        if (trotter->parsed()) {
            return cmd_trotter(trotter_opts, dts, t_final);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const AccuracyError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const ParameterError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const SizeError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
