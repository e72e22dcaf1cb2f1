#pragma once

// Mission-profile-driven planning and simulation for a series-reconfigurable
// battery pack. Each flight segment's speed fixes the bus voltage it needs;
// the planner picks how many cells to insert per segment and the simulator
// time-steps the discharge with the inverter loss model, so a reconfigured
// mission can be compared against a conventional fixed-voltage bus.
//
// A simulation is one sequential state machine over time steps; distinct
// simulations share nothing and may run concurrently.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "evopt/device_loss.hpp"
#include "evopt/errors.hpp"
#include "evopt/optimizer.hpp"

namespace evopt {

enum class FlightPhase { takeoff, climb, cruise, descent, landing };

inline const char* to_string(FlightPhase p) {
    switch (p) {
        case FlightPhase::takeoff: return "takeoff";
        case FlightPhase::climb: return "climb";
        case FlightPhase::cruise: return "cruise";
        case FlightPhase::descent: return "descent";
        case FlightPhase::landing: return "landing";
    }
    return "?";
}

inline std::optional<FlightPhase> parse_flight_phase(const std::string& s) {
    if (s == "takeoff") return FlightPhase::takeoff;
    if (s == "climb") return FlightPhase::climb;
    if (s == "cruise") return FlightPhase::cruise;
    if (s == "descent") return FlightPhase::descent;
    if (s == "landing") return FlightPhase::landing;
    return std::nullopt;
}

struct MissionSegment {
    FlightPhase phase = FlightPhase::cruise;
    double duration_s = 0.0;
    double torque_Nm = 0.0;
    double speed_rad_s = 0.0;

    void validate() const {
        if (!(duration_s > 0)) throw ValidationError("segment: duration must be > 0");
        if (torque_Nm < 0) throw ValidationError("segment: torque must be >= 0");
        if (speed_rad_s < 0) throw ValidationError("segment: speed must be >= 0");
    }
};

/// Ordered flight segments. validate() rejects broken segments and returns
/// warnings (not errors) for nonstandard phase orders.
struct MissionProfile {
    std::vector<MissionSegment> segments;

    [[nodiscard]] std::vector<std::string> validate() const {
        if (segments.empty()) throw ValidationError("mission: no segments");
        for (const auto& s : segments) s.validate();
        std::vector<std::string> warnings;
        if (segments.front().phase != FlightPhase::takeoff)
            warnings.emplace_back("mission: does not start with takeoff");
        if (segments.back().phase != FlightPhase::landing)
            warnings.emplace_back("mission: does not end with landing");
        for (std::size_t i = 1; i < segments.size(); ++i)
            if (static_cast<int>(segments[i].phase) < static_cast<int>(segments[i - 1].phase))
                warnings.emplace_back(std::string("mission: ") + to_string(segments[i].phase) +
                                      " after " + to_string(segments[i - 1].phase) +
                                      " is out of the usual order");
        return warnings;
    }
};

/// Series string of identical cells, each of which can be inserted or
/// bypassed through its half-bridge. Linear OCV over SoC.
struct ReconfigurablePack {
    int n_cells_total = 0;
    double cell_capacity_Ah = 0.0;
    double ocv_full_V = 0.0;
    double ocv_empty_V = 0.0;
    double r_cell_Ohm = 0.0;
    double soc = 1.0;
    int n_active = 0;
    int cells_per_module = 1;  ///< reconfiguration granularity

    void validate() const {
        if (n_cells_total <= 0) throw ValidationError("pack: n_cells_total must be > 0");
        if (!(cell_capacity_Ah > 0)) throw ValidationError("pack: capacity must be > 0");
        if (!(ocv_empty_V > 0)) throw ValidationError("pack: ocv_empty must be > 0");
        if (!(ocv_full_V > ocv_empty_V))
            throw ValidationError("pack: ocv_full must exceed ocv_empty");
        if (r_cell_Ohm < 0) throw ValidationError("pack: r_cell must be >= 0");
        if (!(soc >= 0 && soc <= 1)) throw ValidationError("pack: soc must be in [0, 1]");
        if (n_active < 0 || n_active > n_cells_total)
            throw ValidationError("pack: n_active must be in [0, n_cells_total]");
        if (cells_per_module < 1)
            throw ValidationError("pack: cells_per_module must be >= 1");
    }

    [[nodiscard]] double ocv_at(double state_of_charge) const {
        return ocv_empty_V + state_of_charge * (ocv_full_V - ocv_empty_V);
    }
};

/// DC bus voltage a segment needs: back-EMF phase voltage at the segment
/// speed, scaled by the PWM headroom and a planning margin.
inline double segment_voltage_requirement(const MissionSegment& seg, const MotorSpec& motor,
                                          PwmMethod pwm, double margin) {
    seg.validate();
    motor.validate();
    if (margin < 0) throw DomainError("segment_voltage_requirement: margin must be >= 0");
    const double v_ph = motor.k_t_Nm_A * seg.speed_rad_s;
    const double factor = pwm == PwmMethod::sine_triangle ? 2.0 : std::sqrt(3.0);
    return (1.0 + margin) * factor * v_ph;
}

struct PlanEntry {
    MissionSegment segment;
    double v_dc_req_V = 0.0;
    int n_active = 0;
};

/// Range map for a drivetrain with one installed device: the inverter
/// hardware does not change with the reconfigured bus voltage.
inline DeviceRangeMap single_device_range_map(const SicDevice& device) {
    DeviceRangeMap map;
    map.ranges = {{0.0, device.v_dss_V, true, true, device.part_id}};
    return map;
}

/// Chooses the series cell count per segment at the pack's current SoC:
/// the smallest (module-rounded) count whose open-circuit voltage covers the
/// requirement. Fails if even the full string at ocv_empty cannot cover the
/// worst segment.
inline std::vector<PlanEntry> plan_reconfiguration(const MissionProfile& profile,
                                                   const ReconfigurablePack& pack,
                                                   const MotorSpec& motor, PwmMethod pwm,
                                                   double margin) {
    (void)profile.validate();  // throws on broken segments; order warnings are the caller's business
    pack.validate();
    const double ocv = pack.ocv_at(pack.soc);
    std::vector<PlanEntry> plan;
    plan.reserve(profile.segments.size());
    for (const auto& seg : profile.segments) {
        PlanEntry e;
        e.segment = seg;
        e.v_dc_req_V = segment_voltage_requirement(seg, motor, pwm, margin);
        if (e.v_dc_req_V > pack.n_cells_total * pack.ocv_empty_V)
            throw InfeasibleError(std::string("plan: segment '") + to_string(seg.phase) +
                                  "' needs " + std::to_string(e.v_dc_req_V) +
                                  " V, above the full string at ocv_empty (" +
                                  std::to_string(pack.n_cells_total * pack.ocv_empty_V) + " V)");
        int n = static_cast<int>(std::ceil(e.v_dc_req_V / ocv));
        const int module = pack.cells_per_module;
        n = (n + module - 1) / module * module;  // round up to whole modules
        e.n_active = std::min(n, pack.n_cells_total);
        plan.push_back(e);
    }
    return plan;
}

/// One simulation time step, matching the mission report CSV row.
struct MissionStepRow {
    double t_s = 0.0;
    FlightPhase phase = FlightPhase::cruise;
    int n_active = 0;
    double v_dc_V = 0.0;
    double i_dc_A = 0.0;
    double p_cond_W = 0.0;
    double p_sw_W = 0.0;
    double soc = 0.0;
};

struct SegmentTotals {
    FlightPhase phase = FlightPhase::cruise;
    double duration_s = 0.0;
    int n_active = 0;
    double energy_delivered_J = 0.0;       ///< electrical energy into the motor
    double energy_lost_inverter_J = 0.0;
    double energy_battery_J = 0.0;         ///< integral of v_pack * i_dc
};

struct MissionReport {
    std::vector<MissionStepRow> rows;
    std::vector<SegmentTotals> segments;
    double energy_delivered_J = 0.0;
    double energy_lost_inverter_J = 0.0;
    double final_soc = 0.0;
};

struct MissionSimConfig {
    double f_sw_Hz = 10000.0;
    PwmMethod pwm = PwmMethod::sine_triangle;
    double margin = 0.3;   ///< planning margin over the back-EMF requirement
    double dt_s = 1.0;     ///< integration step; segments end on step edges

    void validate() const {
        if (!(f_sw_Hz > 0)) throw ValidationError("mission sim: f_sw must be > 0");
        if (margin < 0) throw ValidationError("mission sim: margin must be >= 0");
        if (!(dt_s > 0)) throw ValidationError("mission sim: dt must be > 0");
    }
};

namespace detail {

/// Solves the coupled bus equations for one time step: the pack voltage sags
/// with the current while the current must deliver the motor's electrical
/// power plus the (voltage-dependent) inverter loss. Plain fixed-point
/// iteration; the sag term is a small contraction for sane packs.
struct StepSolution {
    double v_dc_V = 0.0;
    double i_dc_A = 0.0;
    double p_cond_W = 0.0;
    double p_sw_W = 0.0;
};

inline StepSolution solve_step(const MissionSegment& seg, const ReconfigurablePack& pack,
                               double soc, int n_active, const MotorSpec& motor,
                               const DeviceCatalog& devices, const DeviceRangeMap& ranges,
                               const MissionSimConfig& cfg) {
    StepSolution sol;
    const double p_elec_W = seg.torque_Nm * seg.speed_rad_s / motor.eta_motor;
    if (n_active == 0 || p_elec_W == 0.0) {
        sol.v_dc_V = n_active * pack.ocv_at(soc);
        return sol;
    }
    const double ocv = pack.ocv_at(soc);
    const double i_m = seg.torque_Nm / (1.5 * motor.k_t_Nm_A);
    const double v_ph = motor.k_t_Nm_A * seg.speed_rad_s;
    const double pwm_factor = cfg.pwm == PwmMethod::sine_triangle ? 2.0 : std::sqrt(3.0);

    double i_dc = p_elec_W / (n_active * ocv);
    double v_dc = n_active * ocv;
    double p_inv = 0.0;
    for (int it = 0; it < 100; ++it) {
        v_dc = n_active * (ocv - i_dc * pack.r_cell_Ohm);
        if (!(v_dc > 0))
            throw InfeasibleError(std::string("simulate: pack voltage collapsed during '") +
                                  to_string(seg.phase) + "'");
        const double m = pwm_factor * v_ph / v_dc;
        if (m > 1.0)
            throw InfeasibleError(std::string("simulate: m > 1 during '") +
                                  to_string(seg.phase) + "' at v_dc = " + std::to_string(v_dc) +
                                  " V; increase the planning margin");
        OperatingPoint op;
        op.i_m_A = i_m;
        op.m = m;
        op.cos_phi = motor.cos_phi;
        op.f_sw_Hz = cfg.f_sw_Hz;
        op.v_dc_V = v_dc;
        op.omega_e_rad_s = std::max(motor.pole_pairs * seg.speed_rad_s, 1e-9);
        const auto& dev = devices.find(ranges.find(v_dc).device_id);
        const InverterLoss loss = inverter_loss_breakdown(dev, op);
        p_inv = loss.total_W();
        sol.p_cond_W = loss.conduction_W;
        sol.p_sw_W = loss.switching_W;
        const double i_next = (p_elec_W + p_inv) / v_dc;
        if (std::abs(i_next - i_dc) <= 1e-10 * std::max(1.0, std::abs(i_next))) {
            i_dc = i_next;
            break;
        }
        i_dc = i_next;
    }
    sol.v_dc_V = n_active * (ocv - i_dc * pack.r_cell_Ohm);
    sol.i_dc_A = i_dc;
    return sol;
}

}  // namespace detail

/// Time-steps the mission along a reconfiguration plan with coulomb-counted
/// SoC. Errors out if the pack depletes mid-flight.
inline MissionReport simulate_mission(const MissionProfile& profile,
                                      const ReconfigurablePack& pack, const MotorSpec& motor,
                                      const DeviceCatalog& devices, const DeviceRangeMap& ranges,
                                      const std::vector<PlanEntry>& plan,
                                      const MissionSimConfig& cfg) {
    (void)profile.validate();  // throws on broken segments; order warnings are the caller's business
    pack.validate();
    motor.validate();
    devices.validate();
    cfg.validate();
    if (plan.size() != profile.segments.size())
        throw ConfigError("simulate: plan does not match the mission profile");

    MissionReport report;
    double soc = pack.soc;
    double t = 0.0;
    for (std::size_t si = 0; si < profile.segments.size(); ++si) {
        const MissionSegment& seg = profile.segments[si];
        const int n_active = plan[si].n_active;
        SegmentTotals totals;
        totals.phase = seg.phase;
        totals.duration_s = seg.duration_s;
        totals.n_active = n_active;

        double remaining = seg.duration_s;
        while (remaining > 1e-12) {
            const double dt = std::min(cfg.dt_s, remaining);
            const auto sol =
                detail::solve_step(seg, pack, soc, n_active, motor, devices, ranges, cfg);
            const double p_elec_W = seg.torque_Nm * seg.speed_rad_s / motor.eta_motor;
            const double p_inv_W = sol.p_cond_W + sol.p_sw_W;

            soc -= sol.i_dc_A * dt / (3600.0 * pack.cell_capacity_Ah);
            if (soc < 0)
                throw InfeasibleError(std::string("simulate: pack depleted at t = ") +
                                      std::to_string(t + dt) + " s ('" + to_string(seg.phase) +
                                      "')");
            totals.energy_delivered_J += p_elec_W * dt;
            totals.energy_lost_inverter_J += p_inv_W * dt;
            totals.energy_battery_J += sol.v_dc_V * sol.i_dc_A * dt;
            t += dt;
            remaining -= dt;
            report.rows.push_back({t, seg.phase, n_active, sol.v_dc_V, sol.i_dc_A, sol.p_cond_W,
                                   sol.p_sw_W, soc});
        }
        report.energy_delivered_J += totals.energy_delivered_J;
        report.energy_lost_inverter_J += totals.energy_lost_inverter_J;
        report.segments.push_back(totals);
    }
    report.final_soc = soc;
    return report;
}

/// Convenience overload: plans at the pack's current SoC, then simulates.
inline MissionReport simulate_mission(const MissionProfile& profile,
                                      const ReconfigurablePack& pack, const MotorSpec& motor,
                                      const DeviceCatalog& devices, const DeviceRangeMap& ranges,
                                      const MissionSimConfig& cfg) {
    const auto plan = plan_reconfiguration(profile, pack, motor, cfg.pwm, cfg.margin);
    return simulate_mission(profile, pack, motor, devices, ranges, plan, cfg);
}

/// A conventional bus: every segment runs the cell count that reaches the
/// given target voltage at the plan-time SoC.
inline std::vector<PlanEntry> fixed_bus_plan(const MissionProfile& profile,
                                             const ReconfigurablePack& pack,
                                             const MotorSpec& motor, PwmMethod pwm,
                                             double margin, double v_bus_V) {
    if (!(v_bus_V > 0)) throw DomainError("fixed_bus_plan: bus voltage must be > 0");
    auto plan = plan_reconfiguration(profile, pack, motor, pwm, margin);
    const double ocv = pack.ocv_at(pack.soc);
    int n = static_cast<int>(std::ceil(v_bus_V / ocv));
    n = (n + pack.cells_per_module - 1) / pack.cells_per_module * pack.cells_per_module;
    if (n > pack.n_cells_total)
        throw InfeasibleError("fixed_bus_plan: " + std::to_string(v_bus_V) +
                              " V needs more cells than the pack has");
    for (auto& e : plan) {
        if (e.n_active > n)
            throw InfeasibleError(std::string("fixed_bus_plan: segment '") +
                                  to_string(e.segment.phase) + "' needs more than the fixed bus " +
                                  std::to_string(v_bus_V) + " V provides");
        e.n_active = n;
    }
    return plan;
}

struct SegmentComparison {
    FlightPhase phase = FlightPhase::cruise;
    double loss_reconfig_J = 0.0;
    double loss_fixed_J = 0.0;

    [[nodiscard]] double delta_J() const { return loss_fixed_J - loss_reconfig_J; }
};

struct ComparisonReport {
    std::vector<SegmentComparison> segments;
    MissionReport reconfig;
    MissionReport fixed;

    [[nodiscard]] double energy_saved_J() const {
        return fixed.energy_lost_inverter_J - reconfig.energy_lost_inverter_J;
    }
};

/// Runs the mission on two plans and tabulates the per-segment inverter
/// losses side by side.
inline ComparisonReport compare_plans(const MissionProfile& profile,
                                      const ReconfigurablePack& pack, const MotorSpec& motor,
                                      const DeviceCatalog& devices, const DeviceRangeMap& ranges,
                                      const MissionSimConfig& cfg,
                                      const std::vector<PlanEntry>& reconfig_plan,
                                      const std::vector<PlanEntry>& fixed_plan) {
    ComparisonReport cmp;
    cmp.reconfig = simulate_mission(profile, pack, motor, devices, ranges, reconfig_plan, cfg);
    cmp.fixed = simulate_mission(profile, pack, motor, devices, ranges, fixed_plan, cfg);
    for (std::size_t i = 0; i < cmp.reconfig.segments.size(); ++i) {
        cmp.segments.push_back({cmp.reconfig.segments[i].phase,
                                cmp.reconfig.segments[i].energy_lost_inverter_J,
                                cmp.fixed.segments[i].energy_lost_inverter_J});
    }
    return cmp;
}

/// Per-segment reconfiguration against a conventional bus held at v_fixed_V.
inline ComparisonReport compare_fixed_vs_reconfig(const MissionProfile& profile,
                                                  const ReconfigurablePack& pack,
                                                  const MotorSpec& motor,
                                                  const DeviceCatalog& devices,
                                                  const DeviceRangeMap& ranges,
                                                  const MissionSimConfig& cfg,
                                                  double v_fixed_V) {
    const auto reconfig_plan = plan_reconfiguration(profile, pack, motor, cfg.pwm, cfg.margin);
    const auto fixed_plan =
        fixed_bus_plan(profile, pack, motor, cfg.pwm, cfg.margin, v_fixed_V);
    return compare_plans(profile, pack, motor, devices, ranges, cfg, reconfig_plan, fixed_plan);
}

}  // namespace evopt
