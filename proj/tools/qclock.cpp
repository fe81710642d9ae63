// qclock: exact dynamics of a driven two-level system with spontaneous
// emission.  Subcommands evolve (time series), phase (regime diagram),
// scan (clock spectroscopy), and validate (cross-check suite).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qclock/analytic.hpp"
#include "qclock/io.hpp"
#include "qclock/oracle.hpp"
#include "qclock/regime.hpp"
#include "qclock/spectroscopy.hpp"
#include "qclock/validation.hpp"

namespace {

constexpr const char* version_tag = "qclock 0.1.0";

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qclock;

fs::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("QCLOCK_OUT"); env && *env) return env;
    return ".";
}

std::string gamma_label(double gamma) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", gamma);
    return buf;
}

struct Manifest {
    std::string command;
    json parameters;
    std::vector<std::string> outputs;
    json extra;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const fs::path& dir, const std::string& name) {
        json doc;
        doc["command"] = command;
        doc["parameters"] = parameters;
        doc["code_version"] = version_tag;
        doc["outputs"] = outputs;
        doc["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!extra.is_null()) doc["extra"] = extra;
        io::atomic_write(dir / name, doc.dump(2) + "\n");
    }
};

std::vector<double> parse_gamma_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

int cmd_evolve(double omega0, double rabi, double gamma, double delta, bool have_omegad,
               double omegad, double tmax, int nt, bool with_oracle, const std::string& out_flag) {
    const SystemParams params = have_omegad
                                    ? SystemParams::make(omega0, omegad, rabi, gamma)
                                    : SystemParams::from_detuning(omega0, delta, rabi, gamma);
    const fs::path dir = resolve_out_dir(out_flag);
    fs::create_directories(dir);

    Manifest manifest;
    manifest.command = "evolve";
    manifest.parameters = {{"omega0", params.omega0}, {"omegaD", params.omegaD},
                           {"rabi", params.rabi},     {"gamma", params.gamma},
                           {"detuning", params.detuning()}, {"tmax", tmax},
                           {"nt", nt},                {"oracle", with_oracle}};

    const BlochVector ground{0.0, 0.0, -1.0, Frame::dirac};
    const ClosedFormSolution sol = solve(params, ground);
    manifest.extra["branch"] = to_string(sol.branch);
    manifest.extra["regime"] = to_string(classify(params));

    std::vector<double> times(nt);
    for (int i = 0; i < nt; ++i) times[i] = tmax * i / double(nt - 1);

    std::vector<BlochVector> oracle_traj;
    if (with_oracle)
        oracle_traj = integrate_bloch(params, ground, times, IntegratorConfig::defaults_for(params));

    std::string csv = with_oracle ? "t,u,v,w,pe,u_oracle,v_oracle,w_oracle,pe_oracle\n"
                                  : "t,u,v,w,pe\n";
    double max_dev = 0.0;
    for (int i = 0; i < nt; ++i) {
        const BlochVector r = eval(sol, times[i]);
        csv += io::format_full(times[i]) + ',' + io::format_full(r.u) + ',' +
               io::format_full(r.v) + ',' + io::format_full(r.w) + ',' +
               io::format_full(excited_population(sol, times[i]));
        if (with_oracle) {
            const BlochVector& o = oracle_traj[i];
            csv += ',' + io::format_full(o.u) + ',' + io::format_full(o.v) + ',' +
                   io::format_full(o.w) + ',' + io::format_full(0.5 * (1.0 + o.w));
            max_dev = std::max({max_dev, std::abs(r.u - o.u), std::abs(r.v - o.v),
                                std::abs(r.w - o.w)});
        }
        csv += '\n';
    }
    io::atomic_write(dir / "evolve.csv", csv);
    manifest.outputs.push_back("evolve.csv");
    if (with_oracle) manifest.extra["max_oracle_deviation"] = max_dev;
    manifest.write(dir, "evolve_manifest.json");
    std::cout << "wrote " << (dir / "evolve.csv").string() << "\n";
    return 0;
}

int cmd_phase(const PhaseGridSpec& spec, const std::string& out_flag) {
    const fs::path dir = resolve_out_dir(out_flag);
    fs::create_directories(dir);

    Manifest manifest;
    manifest.command = "phase";
    manifest.parameters = {{"gamma_max", spec.gamma_max}, {"n_gamma", spec.n_gamma},
                           {"delta_min", spec.delta_min}, {"delta_max", spec.delta_max},
                           {"n_delta", spec.n_delta}};

    const PhaseDiagram pd = phase_diagram(spec);

    std::string csv = "gamma_over_rabi,delta_over_rabi,regime\n";
    for (std::size_t i = 0; i < pd.delta_over_rabi.size(); ++i)
        for (std::size_t j = 0; j < pd.gamma_over_rabi.size(); ++j)
            csv += io::format_full(pd.gamma_over_rabi[j]) + ',' +
                   io::format_full(pd.delta_over_rabi[i]) + ',' +
                   to_string(pd.grid[i * pd.gamma_over_rabi.size() + j]) + '\n';
    io::atomic_write(dir / "phase_grid.csv", csv);
    manifest.outputs.push_back("phase_grid.csv");

    json curves;
    for (const auto& curve : pd.curves) {
        json points = json::array();
        for (const auto& [g, d] : curve.points) points.push_back({g, d});
        curves[curve.name] = points;
    }
    json doc;
    doc["curves"] = curves;
    doc["intersections"] = {
        {"b1_b2", {pd.intersection_b1_b2[0], pd.intersection_b1_b2[1]}},
        {"b1_b3", {pd.intersection_b1_b3[0], pd.intersection_b1_b3[1]}}};
    doc["axes"] = "curve points are (gamma_over_rabi, delta_over_rabi)";
    io::atomic_write(dir / "phase_boundaries.json", doc.dump(2) + "\n");
    manifest.outputs.push_back("phase_boundaries.json");

    manifest.write(dir, "phase_manifest.json");
    std::cout << "wrote " << (dir / "phase_grid.csv").string() << " and boundaries\n";
    return 0;
}

int cmd_scan(double omega0, double rabi, const std::string& gammas_csv, ScanConfig cfg,
             const std::string& out_flag) {
    const std::vector<double> gammas =
        gammas_csv.empty() ? cfg.gamma_list : parse_gamma_list(gammas_csv);
    const fs::path dir = resolve_out_dir(out_flag);
    fs::create_directories(dir);

    Manifest manifest;
    manifest.command = "scan";
    manifest.parameters = {{"omega0", omega0},       {"rabi", rabi},
                           {"gammas", gammas},       {"delta_min", cfg.delta_min},
                           {"delta_max", cfg.delta_max}, {"n_delta", cfg.n_delta},
                           {"tmax", cfg.t_max},      {"nt", cfg.n_t}};

    const SystemParams base = SystemParams::from_detuning(omega0, 0.0, rabi, 0.0);
    const auto rel = relative_fwhm(gammas, cfg, base);

    json summary = json::array();
    for (const auto& [gamma, relative] : rel) {
        const SystemParams params = SystemParams::make(omega0, base.omegaD, rabi, gamma);
        const SpectrumResult spec = scan(cfg, params);
        std::string csv = "delta,pe_max\n";
        for (std::size_t i = 0; i < spec.deltas.size(); ++i)
            csv += io::format_full(spec.deltas[i]) + ',' + io::format_full(spec.pemax[i]) + '\n';
        const std::string name = "spectrum_gamma_" + gamma_label(gamma) + ".csv";
        io::atomic_write(dir / name, csv);
        manifest.outputs.push_back(name);
        summary.push_back({{"gamma", gamma},
                           {"peak_delta", spec.peak_delta},
                           {"pemax_peak", spec.pemax_peak},
                           {"fwhm", spec.fwhm},
                           {"relative_fwhm", relative}});
    }
    io::atomic_write(dir / "scan_summary.json", summary.dump(2) + "\n");
    manifest.outputs.push_back("scan_summary.json");
    manifest.write(dir, "scan_manifest.json");
    std::cout << "wrote " << (dir / "scan_summary.json").string() << "\n";
    return 0;
}

int cmd_validate(bool quick, bool inject_f0) {
    validation::Options opts;
    opts.quick = quick;
    opts.inject_f0_sign_flip = inject_f0;
    const auto results = validation::run_all(opts);
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    for (const auto& r : results) {
        std::printf("[%s] %-*s  %6.2fs  %s\n", r.pass ? "PASS" : "FAIL", int(width),
                    r.name.c_str(), r.seconds, r.detail.c_str());
    }
    const bool ok = validation::all_passed(results);
    std::printf("%s\n", ok ? "all checks passed" : "VALIDATION FAILED");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact driven two-level-system dynamics under spontaneous emission"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_tag);

    // evolve
    auto* evolve = app.add_subcommand("evolve", "time evolution of the Bloch vector and Pe");
    double omega0 = 10.0, rabi = 0.1, gamma = 0.0, delta = 0.0, omegad = 0.0;
    double tmax = 0.0;
    int nt = 2001;
    bool with_oracle = false;
    std::string out_dir;
    evolve->add_option("--omega0", omega0, "transition frequency");
    evolve->add_option("--rabi", rabi, "Rabi frequency");
    evolve->add_option("--gamma", gamma, "spontaneous emission rate");
    auto* delta_opt = evolve->add_option("--delta", delta, "detuning omegaD - omega0");
    auto* omegad_opt = evolve->add_option("--omegad", omegad, "driving frequency");
    evolve->add_option("--tmax", tmax, "end time (default: 10 Rabi periods)");
    evolve->add_option("--nt", nt, "number of samples")->check(CLI::Range(2, 100000000));
    evolve->add_flag("--oracle", with_oracle, "add integrator columns and deviation");
    evolve->add_option("--out", out_dir, "output directory (or QCLOCK_OUT)");

    // phase
    auto* phase = app.add_subcommand("phase", "regime phase diagram and boundary curves");
    PhaseGridSpec spec;
    std::string phase_out;
    phase->add_option("--gamma-max", spec.gamma_max, "gamma/rabi upper limit");
    phase->add_option("--n-gamma", spec.n_gamma)->check(CLI::Range(2, 100000));
    phase->add_option("--delta-min", spec.delta_min, "delta/rabi lower limit");
    phase->add_option("--delta-max", spec.delta_max, "delta/rabi upper limit");
    phase->add_option("--n-delta", spec.n_delta)->check(CLI::Range(2, 100000));
    phase->add_option("--out", phase_out, "output directory (or QCLOCK_OUT)");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "max-excitation spectrum versus detuning");
    double scan_omega0 = 10.0, scan_rabi = 0.1;
    std::string gammas_csv, scan_out;
    ScanConfig scan_cfg;  // filled after parsing, from rabi
    double scan_delta_min = 0.0, scan_delta_max = 0.0, scan_tmax = 0.0;
    int scan_n_delta = 0, scan_nt = 0, spot_stride = 100;
    scan_cmd->add_option("--omega0", scan_omega0, "transition frequency");
    scan_cmd->add_option("--rabi", scan_rabi, "Rabi frequency");
    scan_cmd->add_option("--gammas", gammas_csv, "comma list of decay rates");
    scan_cmd->add_option("--delta-min", scan_delta_min, "grid start (default -5 rabi)");
    scan_cmd->add_option("--delta-max", scan_delta_max, "grid end (default 5 rabi)");
    scan_cmd->add_option("--n-delta", scan_n_delta, "grid points (default 2001)");
    scan_cmd->add_option("--tmax", scan_tmax, "observation window (default 6 pi / rabi)");
    scan_cmd->add_option("--nt", scan_nt, "time samples (default 10000)");
    scan_cmd->add_option("--spot-stride", spot_stride,
                         "integrator spot-check stride (0 disables)");
    scan_cmd->add_option("--out", scan_out, "output directory (or QCLOCK_OUT)");

    // validate
    auto* validate = app.add_subcommand("validate", "run the cross-check suite");
    bool quick = false, inject_f0 = false;
    validate->add_flag("--quick", quick, "reduced draw counts (~seconds)");
    validate->add_flag("--inject-f0-sign-flip", inject_f0)->group("");  // fault injection hook

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message / help
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*evolve) {
            if (*delta_opt && *omegad_opt) {
                std::cerr << "evolve: give either --delta or --omegad, not both\n";
                return 2;
            }
            if (tmax == 0.0) tmax = 10.0 * 2.0 * 3.14159265358979323846 / rabi;
            return cmd_evolve(omega0, rabi, gamma, delta, bool(*omegad_opt), omegad, tmax, nt,
                              with_oracle, out_dir);
        }
        if (*phase) return cmd_phase(spec, phase_out);
        if (*scan_cmd) {
            scan_cfg = ScanConfig::defaults_for(scan_rabi);
            if (scan_delta_min != 0.0 || scan_delta_max != 0.0) {
                scan_cfg.delta_min = scan_delta_min;
                scan_cfg.delta_max = scan_delta_max;
            }
            if (scan_n_delta > 0) scan_cfg.n_delta = scan_n_delta;
            if (scan_tmax > 0.0) scan_cfg.t_max = scan_tmax;
            if (scan_nt > 0) scan_cfg.n_t = scan_nt;
            scan_cfg.oracle_spot_stride = spot_stride;
            return cmd_scan(scan_omega0, scan_rabi, gammas_csv, scan_cfg, scan_out);
        }
        if (*validate) return cmd_validate(quick, inject_f0);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
