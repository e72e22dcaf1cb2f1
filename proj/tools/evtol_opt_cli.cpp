// evtol-opt: DC bus voltage studies for an eVTOL drivetrain.
//
// Subcommands: sweep and optimize (voltage grid + scalarized objective),
// mission-sim (reconfigurable-pack flight simulation), thermal-extract
// (loss extraction from case temperatures), reproduce-paper (runs the whole
// study set and checks the published claims).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "evopt/catalog_io.hpp"
#include "evopt/mission.hpp"
#include "evopt/optimizer.hpp"
#include "evopt/thermal.hpp"

namespace {

using namespace evopt;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitAcceptance = 4;

std::string g(double v, int precision = 10) { return io::format_g(v, precision); }

struct CommonPaths {
    std::string devices;
    std::string cables;
    std::string motor;
    std::string mission;
    std::string pack;
};

CommonPaths default_paths() {
    const std::string dir = default_data_dir();
    return {dir + "/devices.cfg", dir + "/cables.cfg", dir + "/motor.cfg",
            dir + "/mission.cfg", dir + "/pack.cfg"};
}

struct SweepOptions {
    CommonPaths paths = default_paths();
    double beta = 0.5;
    double v_min = 450.0;
    double v_max = 1500.0;
    double v_step = 10.0;
    double f_sw = 10000.0;
    double eta_inverter = 0.98;
    std::string pwm = "sine_triangle";
    std::string normalization = "none";
    double tv_um = 50.0;
    double alpha_kv = 0.340;
    double c_cm = 0.1;
    double eps_r = 2.3;
    std::string out;
    bool summary = false;
};

PwmMethod parse_pwm(const std::string& s) {
    if (s == "sine_triangle") return PwmMethod::sine_triangle;
    if (s == "svpwm") return PwmMethod::svpwm;
    throw ConfigError("unknown pwm method '" + s + "' (sine_triangle|svpwm)");
}

Normalization parse_normalization(const std::string& s) {
    if (s == "max_over_sweep") return Normalization::max_over_sweep;
    if (s == "reference_voltage") return Normalization::reference_voltage;
    if (s == "none") return Normalization::none;
    throw ConfigError("unknown normalization '" + s +
                      "' (max_over_sweep|reference_voltage|none)");
}

void add_sweep_flags(CLI::App* cmd, SweepOptions& opt) {
    cmd->add_option("--devices", opt.paths.devices, "device catalog file");
    cmd->add_option("--cables", opt.paths.cables, "cable catalog file");
    cmd->add_option("--motor", opt.paths.motor, "motor file");
    cmd->add_option("--beta", opt.beta, "cable-weight weighting factor in (0,1)");
    cmd->add_option("--vmin", opt.v_min, "sweep start voltage [V]");
    cmd->add_option("--vmax", opt.v_max, "sweep end voltage [V]");
    cmd->add_option("--vstep", opt.v_step, "sweep step [V]");
    cmd->add_option("--fsw", opt.f_sw, "switching frequency [Hz]");
    cmd->add_option("--eta-inverter", opt.eta_inverter, "assumed inverter efficiency");
    cmd->add_option("--pwm", opt.pwm, "pwm method (sine_triangle|svpwm)");
    cmd->add_option("--normalization", opt.normalization,
                    "objective scaling (max_over_sweep|reference_voltage|none)");
    cmd->add_option("--tv-um", opt.tv_um, "insulation void size [um]");
    cmd->add_option("--alpha-kv", opt.alpha_kv, "insulation breakdown constant [kV]");
    cmd->add_option("--c-cm", opt.c_cm, "insulation additive constant [cm]");
    cmd->add_option("--eps-r", opt.eps_r, "insulation relative permittivity");
    cmd->add_option("--out", opt.out, "output CSV path");
}

InsulationParams insulation_from(const SweepOptions& opt) {
    InsulationParams p;
    p.t_v_cm = opt.tv_um * 1e-4;
    p.alpha_kV = opt.alpha_kv;
    p.c_const_cm = opt.c_cm;
    p.eps_r = opt.eps_r;
    return p;
}

SweepConfig config_from(const SweepOptions& opt) {
    SweepConfig cfg;
    cfg.v_min_V = opt.v_min;
    cfg.v_max_V = opt.v_max;
    cfg.v_step_V = opt.v_step;
    cfg.beta = opt.beta;
    cfg.f_sw_Hz = opt.f_sw;
    cfg.eta_inverter = opt.eta_inverter;
    cfg.pwm = parse_pwm(opt.pwm);
    cfg.normalization = parse_normalization(opt.normalization);
    return cfg;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "v_dc,m,device_id,p_cond_W,p_sw_W,p_loss_W,i_dc_A,a_cu_cm2,r_c_cm,t_i_cm,"
           "f_obj,feasible\n";
    for (const auto& p : points) {
        out << g(p.v_dc_V) << ',' << g(p.m) << ',' << p.device_id << ',' << g(p.p_cond_W) << ','
            << g(p.p_sw_W) << ',' << g(p.p_loss_W) << ',' << g(p.i_dc_A) << ','
            << g(p.a_cu_cm2) << ',' << g(p.r_c_cm) << ',' << g(p.t_i_cm) << ',' << g(p.f_obj)
            << ',' << (p.feasible ? 1 : 0) << '\n';
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    return out;
}

void print_optimum_line(const SweepPoint& best, double beta) {
    std::cout << "beta " << g(beta, 3) << ": optimum " << g(best.v_dc_V, 6) << " V, device "
              << best.device_id << ", P_loss " << g(best.p_loss_W, 6) << " W, a_cu "
              << g(best.a_cu_cm2, 4) << " cm2, r_c " << g(best.r_c_cm, 4) << " cm, f "
              << g(best.f_obj, 6) << "\n";
}

int run_sweep_or_optimize(const SweepOptions& opt, bool pick_best) {
    const auto devices = load_device_catalog(opt.paths.devices);
    const auto cables = load_cable_catalog(opt.paths.cables);
    const auto motor = load_motor(opt.paths.motor);
    const SweepConfig cfg = config_from(opt);
    const auto ranges = standard_device_range_map(cfg.v_min_V, cfg.v_max_V);
    auto points = sweep(motor, cfg, devices, ranges, cables, insulation_from(opt));

    if (!opt.out.empty()) {
        auto out = open_out(opt.out);
        write_sweep_csv(out, points);
    }
    if (opt.summary) {
        std::cout << "beta,v_dc_opt_V,p_loss_W,r_c_cm,a_cu_cm2\n";
        for (const double beta : {0.2, 0.8}) {
            const SweepPoint& best = optimize(points, beta, cfg.normalization);
            std::cout << g(beta, 2) << ',' << g(best.v_dc_V, 6) << ',' << g(best.p_loss_W, 6)
                      << ',' << g(best.r_c_cm, 3) << ',' << g(best.a_cu_cm2, 3) << "\n";
        }
        return kExitOk;
    }
    if (pick_best) print_optimum_line(pick_optimum(points), cfg.beta);
    return kExitOk;
}

struct MissionOptions {
    CommonPaths paths = default_paths();
    double f_sw = 10000.0;
    std::string pwm = "sine_triangle";
    double margin = 0.3;
    double dt = 1.0;
    double compare_fixed = 0.0;
    std::string device;
    std::string out;
};

const char* phase_name(FlightPhase p) { return to_string(p); }

int run_mission_sim(const MissionOptions& opt) {
    const auto devices = load_device_catalog(opt.paths.devices);
    const auto motor = load_motor(opt.paths.motor);
    const auto mission = load_mission(opt.paths.mission);
    for (const auto& w : mission.warnings) std::cerr << "warning: " << w << "\n";
    const auto pack = load_pack(opt.paths.pack);

    MissionSimConfig cfg;
    cfg.f_sw_Hz = opt.f_sw;
    cfg.pwm = parse_pwm(opt.pwm);
    cfg.margin = opt.margin;
    cfg.dt_s = opt.dt;

    // One inverter flies the whole mission. Unless named explicitly, the
    // installed device is the one the stock voltage assignment picks at the
    // design voltage (the fixed-bus target, or the highest planned bus).
    std::string installed = opt.device;
    if (installed.empty()) {
        const auto plan =
            plan_reconfiguration(mission.profile, pack, motor, cfg.pwm, cfg.margin);
        double v_design = opt.compare_fixed;
        for (const auto& e : plan)
            v_design = std::max(v_design, e.n_active * pack.ocv_at(pack.soc));
        installed = standard_device_range_map(0.0, 1500.0).find(v_design).device_id;
    }
    const auto ranges = single_device_range_map(devices.find(installed));
    std::cout << "installed device: " << installed << "\n";

    const auto report =
        simulate_mission(mission.profile, pack, motor, devices, ranges, cfg);
    if (!opt.out.empty()) {
        auto out = open_out(opt.out);
        out << "t_s,phase,n_active,v_dc_V,i_dc_A,p_cond_W,p_sw_W,soc\n";
        for (const auto& r : report.rows) {
            out << g(r.t_s) << ',' << phase_name(r.phase) << ',' << r.n_active << ','
                << g(r.v_dc_V) << ',' << g(r.i_dc_A) << ',' << g(r.p_cond_W) << ','
                << g(r.p_sw_W) << ',' << g(r.soc) << '\n';
        }
    }

    std::cout << "segment,n_active,energy_delivered_Wh,energy_lost_inverter_Wh\n";
    for (const auto& s : report.segments)
        std::cout << phase_name(s.phase) << ',' << s.n_active << ','
                  << g(s.energy_delivered_J / 3.6e3, 6) << ','
                  << g(s.energy_lost_inverter_J / 3.6e3, 6) << "\n";
    std::cout << "total delivered " << g(report.energy_delivered_J / 3.6e3, 6)
              << " Wh, inverter loss " << g(report.energy_lost_inverter_J / 3.6e3, 6)
              << " Wh, final SoC " << g(report.final_soc, 4) << "\n";
    std::cout << "note: reconfiguration half-bridge switch losses are unmodeled\n";

    if (opt.compare_fixed > 0.0) {
        const auto cmp = compare_fixed_vs_reconfig(mission.profile, pack, motor, devices,
                                                   ranges, cfg, opt.compare_fixed);
        std::cout << "\ncomparison against a fixed " << g(opt.compare_fixed, 5) << " V bus\n";
        std::cout << "segment,loss_reconfig_Wh,loss_fixed_Wh,delta_Wh\n";
        for (const auto& s : cmp.segments)
            std::cout << phase_name(s.phase) << ',' << g(s.loss_reconfig_J / 3.6e3, 6) << ','
                      << g(s.loss_fixed_J / 3.6e3, 6) << ',' << g(s.delta_J() / 3.6e3, 6)
                      << "\n";
        std::cout << "energy saved " << g(cmp.energy_saved_J() / 3.6e3, 6) << " Wh; final SoC "
                  << g(cmp.reconfig.final_soc, 4) << " (reconfigured) vs "
                  << g(cmp.fixed.final_soc, 4) << " (fixed)\n";
    }
    return kExitOk;
}

struct ThermalOptions {
    std::string calib = default_data_dir() + "/thermal_calib.csv";
    std::string runs = default_data_dir() + "/thermal_runs.csv";
    double rdson = 0.034;
    double rjc = 0.49;
    double vref = 600.0;
    int n_devices = 6;
    std::string out;
};

int run_thermal_extract(const ThermalOptions& opt) {
    const auto calib = load_calibration_tests(opt.calib, opt.rdson, opt.rjc);
    const auto runs = load_thermal_measurements(opt.runs);

    const double r_ca = estimate_rca(calib);
    std::cout << "calibration: " << calib.size() << " tests";
    for (const auto& t : calib) std::cout << ", R_ca " << g(rca_from_test(t), 4);
    std::cout << "; mean R_ca " << g(r_ca, 4) << " degC/W\n";

    SicDevice module;
    module.part_id = "module";
    module.v_dss_V = 1e6;  // not used by the extraction
    module.i_d_A = 1e6;
    module.r_ds_on_Ohm = opt.rdson;
    module.v_ref_V = opt.vref;
    const ThermalModel model{r_ca, opt.rjc, opt.n_devices};
    const auto result = extract_losses(runs, model, module);

    std::cout << "fit: k_v " << g(result.fit.k_v, 5) << ", f_sw*(E_on+E_off) "
              << g(result.fit.fsw_energy_scale, 5) << " W/A, residual rms (log) "
              << g(result.fit.residual_rms_log, 4) << "\n";

    if (!opt.out.empty()) {
        auto out = open_out(opt.out);
        out << "v_dc_V,m,t_case_C,p_loss_tot_W,p_cond_tot_W,p_sw_tot_W,p_sw_mos_W,"
               "p_cond_mos_W,p_sw_fit_W\n";
        for (const auto& row : result.rows) {
            out << g(row.measurement.v_dc_V) << ',' << g(row.measurement.m) << ','
                << g(row.measurement.t_case_C) << ',' << g(row.p_loss_tot_W) << ','
                << g(row.p_cond_tot_W) << ',' << g(row.p_sw_tot_W) << ','
                << g(row.p_sw_per_device_W) << ',' << g(row.p_cond_per_device_W) << ','
                << g(predict_sw_loss(result.fit, module, row.measurement)) << '\n';
        }
        out << "# r_ca_C_per_W," << g(r_ca, 10) << "\n";
        out << "# k_v," << g(result.fit.k_v, 10) << "\n";
        out << "# fsw_energy_W_per_A," << g(result.fit.fsw_energy_scale, 10) << "\n";
    }
    return kExitOk;
}

struct ReproduceOptions {
    CommonPaths paths = default_paths();
    std::string calib = default_data_dir() + "/thermal_calib.csv";
    std::string runs = default_data_dir() + "/thermal_runs.csv";
    std::string out_dir = "reproduction";
};

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

int run_reproduce(const ReproduceOptions& opt) {
    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    const auto out_path = [&](const std::string& name) { return opt.out_dir + "/" + name; };

    const auto devices = load_device_catalog(opt.paths.devices);
    const auto cables = load_cable_catalog(opt.paths.cables);
    const auto motor = load_motor(opt.paths.motor);
    std::vector<Check> checks;
    const auto in_range = [](double x, double lo, double hi) { return x >= lo && x <= hi; };

    // beta sweeps and the two-row optimization summary
    SweepConfig cfg;
    cfg.beta = 0.2;
    const auto ranges = standard_device_range_map(cfg.v_min_V, cfg.v_max_V);
    auto points = sweep(motor, cfg, devices, ranges, cables);
    {
        auto out = open_out(out_path("sweep_beta02.csv"));
        write_sweep_csv(out, points);
    }
    const SweepPoint low = pick_optimum(points);
    apply_objective(points, 0.8, cfg.normalization);
    {
        auto out = open_out(out_path("sweep_beta08.csv"));
        write_sweep_csv(out, points);
    }
    const SweepPoint high = pick_optimum(points);
    {
        auto out = open_out(out_path("optim_summary.csv"));
        out << "beta,v_dc_opt_V,p_loss_W,r_c_cm,a_cu_cm2\n";
        out << "0.2," << g(low.v_dc_V, 6) << ',' << g(low.p_loss_W, 6) << ','
            << g(low.r_c_cm, 3) << ',' << g(low.a_cu_cm2, 3) << "\n";
        out << "0.8," << g(high.v_dc_V, 6) << ',' << g(high.p_loss_W, 6) << ','
            << g(high.r_c_cm, 3) << ',' << g(high.a_cu_cm2, 3) << "\n";
    }
    checks.push_back({"beta 0.2 optimum near 600 V", in_range(low.v_dc_V, 540.0, 660.0),
                      g(low.v_dc_V, 6) + " V"});
    checks.push_back({"beta 0.8 optimum in 840-1000 V",
                      in_range(high.v_dc_V, 840.0, 1000.0), g(high.v_dc_V, 6) + " V"});
    checks.push_back({"beta 0.8 cross-section 0.1 cm2",
                      std::abs(high.a_cu_cm2 - 0.10) < 1e-9, g(high.a_cu_cm2, 4) + " cm2"});
    checks.push_back({"copper area factor 2.5 between the optima",
                      std::abs(low.a_cu_cm2 / high.a_cu_cm2 - 2.5) < 1e-9,
                      g(low.a_cu_cm2 / high.a_cu_cm2, 4)});
    const double dp_rel = std::abs(high.p_loss_W - low.p_loss_W) /
                          std::max(high.p_loss_W, low.p_loss_W);
    checks.push_back({"loss increase between optima below 10%", dp_rel < 0.10,
                      g(100.0 * dp_rel, 3) + "%"});

    // 89 kW cable study, raw P/V current
    {
        auto out = open_out(out_path("cable_study.csv"));
        out << "v_dc_V,i_dc_A,a_cu_cm2,r_c_cm,t_i_cm,mass_kg_per_m\n";
        const InsulationParams ins;
        for (int v = 400; v <= 1500; v += 10) {
            const double i = required_dc_current(89000.0, v, 1.0, 1.0);
            const auto& entry = select_cable(i, cables);
            const double r_c = copper_radius(entry.a_cu_cm2);
            const double t_i = insulation_thickness(r_c, v / 1000.0, ins);
            out << v << ',' << g(i) << ',' << g(entry.a_cu_cm2) << ',' << g(r_c) << ','
                << g(t_i) << ',' << g(cable_mass_per_length(r_c, t_i)) << '\n';
        }
        const double i500 = required_dc_current(89000.0, 500.0, 1.0, 1.0);
        const double i1000 = required_dc_current(89000.0, 1000.0, 1.0, 1.0);
        const double a500 = select_cable(i500, cables).a_cu_cm2;
        const double a1000 = select_cable(i1000, cables).a_cu_cm2;
        const double r500 = copper_radius(a500);
        const double r1000 = copper_radius(a1000);
        const double radius_cut = 1.0 - r1000 / r500;
        const double volume_cut = 1.0 - a1000 / a500;
        const double ratio = insulation_thickness(r1000, 1.0, ins) /
                             insulation_thickness(r500, 0.5, ins);
        checks.push_back({"copper radius cut 38-48% from 500 V to 1 kV",
                          in_range(radius_cut, 0.38, 0.48), g(100.0 * radius_cut, 4) + "%"});
        checks.push_back({"copper volume cut 63-73%", in_range(volume_cut, 0.63, 0.73),
                          g(100.0 * volume_cut, 4) + "%"});
        checks.push_back({"insulation thickness ratio 1.08-1.12",
                          in_range(ratio, 1.08, 1.12), g(ratio, 5)});
        auto iout = open_out(out_path("insulation_study.csv"));
        iout << "quantity,value\n";
        iout << "r_c_500V_cm," << g(r500) << "\n";
        iout << "r_c_1000V_cm," << g(r1000) << "\n";
        iout << "t_i_500V_cm," << g(insulation_thickness(r500, 0.5, ins)) << "\n";
        iout << "t_i_1000V_cm," << g(insulation_thickness(r1000, 1.0, ins)) << "\n";
        iout << "thickness_ratio," << g(ratio) << "\n";
    }

    // thermal pipeline
    {
        const auto calib = load_calibration_tests(opt.calib, 0.034, 0.49);
        const auto runs = load_thermal_measurements(opt.runs);
        const double r_ca = estimate_rca(calib);
        {
            auto out = open_out(out_path("thermal_rca.csv"));
            out << "case,p_cond_W,r_ca_C_per_W\n";
            for (std::size_t i = 0; i < calib.size(); ++i)
                out << i + 1 << ',' << g(conduction_loss_dc_test(calib[i])) << ','
                    << g(rca_from_test(calib[i])) << '\n';
            out << "mean,," << g(r_ca) << '\n';
        }
        checks.push_back({"R_ca cases 3.36 / 3.46, mean 3.41",
                          std::abs(rca_from_test(calib[0]) - 3.36) <= 0.01 &&
                              std::abs(rca_from_test(calib[1]) - 3.46) <= 0.01 &&
                              std::abs(r_ca - 3.41) <= 0.01,
                          g(r_ca, 4) + " degC/W"});

        SicDevice module;
        module.part_id = "CCS050M12CM2";
        module.v_dss_V = 1200.0;
        module.i_d_A = 50.0;
        module.r_ds_on_Ohm = 0.034;
        module.v_ref_V = 600.0;
        const ThermalModel model{3.41, 0.49, 6};
        const auto result = extract_losses(runs, model, module);
        {
            auto out = open_out(out_path("thermal_extract.csv"));
            out << "v_dc_V,m,t_case_C,p_loss_tot_W,p_cond_tot_W,p_sw_tot_W,p_sw_mos_W,"
                   "p_cond_mos_W\n";
            for (const auto& row : result.rows)
                out << g(row.measurement.v_dc_V) << ',' << g(row.measurement.m) << ','
                    << g(row.measurement.t_case_C) << ',' << g(row.p_loss_tot_W) << ','
                    << g(row.p_cond_tot_W) << ',' << g(row.p_sw_tot_W) << ','
                    << g(row.p_sw_per_device_W) << ',' << g(row.p_cond_per_device_W) << '\n';
            out << "# k_v," << g(result.fit.k_v) << "\n";
        }
        const double expected[7][4] = {
            {2.053, 1.253, 0.209, 0.133}, {3.372, 2.573, 0.429, 0.133},
            {4.223, 3.423, 0.571, 0.133}, {4.986, 4.186, 0.698, 0.133},
            {5.748, 4.948, 0.825, 0.133}, {6.804, 6.004, 1.001, 0.133},
            {7.683, 6.884, 1.147, 0.133}};
        bool ok = result.rows.size() == 7;
        double worst = 0.0;
        for (std::size_t i = 0; ok && i < result.rows.size(); ++i) {
            const auto& row = result.rows[i];
            const double got[4] = {row.p_loss_tot_W, row.p_sw_tot_W, row.p_sw_per_device_W,
                                   row.p_cond_per_device_W};
            for (int j = 0; j < 4; ++j) {
                worst = std::max(worst, std::abs(got[j] - expected[i][j]));
                ok = ok && std::abs(got[j] - expected[i][j]) <= 0.01;
            }
        }
        checks.push_back({"loss table reproduced within 0.01 W", ok,
                          "worst deviation " + g(worst, 3) + " W"});
    }

    bool all_pass = true;
    {
        auto out = open_out(out_path("summary.txt"));
        for (const auto& c : checks) {
            all_pass = all_pass && c.pass;
            const std::string line = std::string(c.pass ? "PASS" : "FAIL") + "  " + c.name +
                                     " (" + c.detail + ")";
            out << line << "\n";
            std::cout << line << "\n";
        }
    }
    if (!all_pass) {
        std::cout << "reproduction checks failed\n";
        return kExitAcceptance;
    }
    std::cout << "all reproduction checks passed; reports in " << opt.out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DC bus voltage design studies for eVTOL drivetrains"};
    app.require_subcommand(1);
    // top-level help lists every flag of every subcommand
    app.set_help_flag();
    app.set_help_all_flag("-h,--help", "print this help message and exit");

    SweepOptions sweep_opt;
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate the objective over a voltage grid");
    add_sweep_flags(sweep_cmd, sweep_opt);

    SweepOptions optimize_opt;
    auto* optimize_cmd =
        app.add_subcommand("optimize", "pick the optimal DC bus voltage for a weighting");
    add_sweep_flags(optimize_cmd, optimize_opt);
    optimize_cmd->add_flag("--summary", optimize_opt.summary,
                           "emit the two-row beta 0.2/0.8 summary table");

    MissionOptions mission_opt;
    auto* mission_cmd =
        app.add_subcommand("mission-sim", "simulate a mission on a reconfigurable pack");
    mission_cmd->add_option("--mission", mission_opt.paths.mission, "mission file");
    mission_cmd->add_option("--pack", mission_opt.paths.pack, "pack file");
    mission_cmd->add_option("--motor", mission_opt.paths.motor, "motor file");
    mission_cmd->add_option("--devices", mission_opt.paths.devices, "device catalog file");
    mission_cmd->add_option("--fsw", mission_opt.f_sw, "switching frequency [Hz]");
    mission_cmd->add_option("--pwm", mission_opt.pwm, "pwm method (sine_triangle|svpwm)");
    mission_cmd->add_option("--margin", mission_opt.margin, "planning voltage margin");
    mission_cmd->add_option("--dt", mission_opt.dt, "integration step [s]");
    mission_cmd->add_option("--compare-fixed", mission_opt.compare_fixed,
                            "also simulate a fixed bus at this voltage [V]");
    mission_cmd->add_option("--device", mission_opt.device,
                            "installed inverter device (default: picked at the design voltage)");
    mission_cmd->add_option("--out", mission_opt.out, "per-step report CSV path");

    ThermalOptions thermal_opt;
    auto* thermal_cmd =
        app.add_subcommand("thermal-extract", "extract losses from case temperatures");
    thermal_cmd->add_option("--calib", thermal_opt.calib, "DC calibration CSV");
    thermal_cmd->add_option("--runs", thermal_opt.runs, "inverter run CSV");
    thermal_cmd->add_option("--rdson", thermal_opt.rdson, "device on-resistance [Ohm]");
    thermal_cmd->add_option("--rjc", thermal_opt.rjc, "junction-to-case resistance [degC/W]");
    thermal_cmd->add_option("--vref", thermal_opt.vref,
                            "reference voltage for the k_v fit [V]");
    thermal_cmd->add_option("--devices-per-module", thermal_opt.n_devices,
                            "switch count sharing the case");
    thermal_cmd->add_option("--out", thermal_opt.out, "extraction CSV path");

    ReproduceOptions repro_opt;
    auto* repro_cmd =
        app.add_subcommand("reproduce-paper", "run every study and check the published claims");
    repro_cmd->add_option("--devices", repro_opt.paths.devices, "device catalog file");
    repro_cmd->add_option("--cables", repro_opt.paths.cables, "cable catalog file");
    repro_cmd->add_option("--motor", repro_opt.paths.motor, "motor file");
    repro_cmd->add_option("--calib", repro_opt.calib, "DC calibration CSV");
    repro_cmd->add_option("--runs", repro_opt.runs, "inverter run CSV");
    repro_cmd->add_option("--out", repro_opt.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*sweep_cmd) return run_sweep_or_optimize(sweep_opt, false);
        if (*optimize_cmd) return run_sweep_or_optimize(optimize_opt, true);
        if (*mission_cmd) return run_mission_sim(mission_opt);
        if (*thermal_cmd) return run_thermal_extract(thermal_opt);
        if (*repro_cmd) return run_reproduce(repro_opt);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
