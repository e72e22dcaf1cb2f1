#pragma once

// DC bus voltage selection: a weighted scalarized objective
// f = beta*A_cu + (1-beta)*P_loss evaluated over a voltage grid, with a
// per-range SiC device assignment and discrete cable selection at every
// grid point. The voltage with the smallest objective wins; ties go to the
// higher voltage (cable weight keeps improving there).
//
// Grid points are independent and the result does not depend on evaluation
// order; everything here is a pure function of immutable inputs.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "evopt/cable.hpp"
#include "evopt/device_loss.hpp"
#include "evopt/errors.hpp"

namespace evopt {

enum class PwmMethod { sine_triangle, svpwm };

enum class Normalization { max_over_sweep, reference_voltage, none };

/// Loss term scale for the raw (normalization = none) objective: the loss
/// enters in kilowatts so both terms are order unity for drive-class
/// hardware (cross-sections of 0.1-1 cm2 against losses of 0.5-3 kW).
inline constexpr double kRawLossScaleW = 1000.0;

/// Motor ratings driving the sweep. i_m is taken as given, not derived from
/// torque.
struct MotorSpec {
    double p_mech_W = 0.0;
    double omega_m_rad_s = 0.0;  ///< rotor speed
    double k_t_Nm_A = 0.0;       ///< torque constant, equals back-EMF constant
    double eta_motor = 0.0;
    double i_m_A = 0.0;          ///< phase current amplitude
    double cos_phi = 1.0;
    int pole_pairs = 1;

    void validate() const {
        if (!(p_mech_W > 0)) throw ValidationError("motor: p_mech must be > 0");
        if (!(omega_m_rad_s > 0)) throw ValidationError("motor: omega_m must be > 0");
        if (!(k_t_Nm_A > 0)) throw ValidationError("motor: k_t must be > 0");
        if (!(eta_motor > 0 && eta_motor <= 1))
            throw ValidationError("motor: eta_motor must be in (0, 1]");
        if (!(i_m_A > 0)) throw ValidationError("motor: i_m must be > 0");
        if (!(cos_phi > 0 && cos_phi <= 1))
            throw ValidationError("motor: cos_phi must be in (0, 1]");
        if (pole_pairs < 1) throw ValidationError("motor: pole_pairs must be >= 1");
    }

    /// Phase voltage amplitude from the back-EMF model, K_e = K_t.
    [[nodiscard]] double phase_voltage_V() const { return k_t_Nm_A * omega_m_rad_s; }
};

/// One contiguous voltage interval served by a single device.
struct DeviceRange {
    double v_low_V = 0.0;
    double v_high_V = 0.0;
    bool low_inclusive = true;
    bool high_inclusive = true;
    std::string device_id;

    [[nodiscard]] bool contains(double v) const {
        const bool above = low_inclusive ? v >= v_low_V : v > v_low_V;
        const bool below = high_inclusive ? v <= v_high_V : v < v_high_V;
        return above && below;
    }
};

/// Ordered device ranges covering the sweep interval.
struct DeviceRangeMap {
    std::vector<DeviceRange> ranges;

    /// Ranges must be sorted, contiguous (each boundary claimed by exactly
    /// one side) and must cover [v_min, v_max].
    void validate(double v_min_V, double v_max_V) const {
        if (ranges.empty()) throw ConfigError("device range map: empty map");
        for (const auto& r : ranges) {
            if (!(r.v_low_V < r.v_high_V))
                throw ConfigError("device range map: range for '" + r.device_id +
                                  "' has v_low >= v_high");
            if (r.device_id.empty())
                throw ConfigError("device range map: range without device_id");
        }
        for (std::size_t i = 1; i < ranges.size(); ++i) {
            const auto& a = ranges[i - 1];
            const auto& b = ranges[i];
            if (a.v_high_V != b.v_low_V)
                throw ConfigError("device range map: gap or overlap between '" + a.device_id +
                                  "' and '" + b.device_id + "' at " +
                                  std::to_string(a.v_high_V) + " V / " +
                                  std::to_string(b.v_low_V) + " V");
            if (a.high_inclusive == b.low_inclusive)
                throw ConfigError("device range map: boundary at " +
                                  std::to_string(a.v_high_V) +
                                  " V must belong to exactly one range");
        }
        bool covers_min = false;
        bool covers_max = false;
        for (const auto& r : ranges) {
            covers_min = covers_min || r.contains(v_min_V);
            covers_max = covers_max || r.contains(v_max_V);
        }
        if (!covers_min || !covers_max)
            throw ConfigError("device range map: does not cover [" + std::to_string(v_min_V) +
                              ", " + std::to_string(v_max_V) + "] V");
    }

    [[nodiscard]] const DeviceRange& find(double v_dc_V) const {
        for (const auto& r : ranges)
            if (r.contains(v_dc_V)) return r;
        throw ConfigError("device range map: no range covers " + std::to_string(v_dc_V) + " V");
    }
};

/// The stock three-device assignment: the 750 V part up to 500 V, the
/// 1.2 kV part strictly between 500 V and 1 kV, the 1.7 kV part from 1 kV.
/// The returned map always spans at least [0, 1500] V so it covers any
/// narrower study interval.
inline DeviceRangeMap standard_device_range_map(double v_min_V = 0.0,
                                                double v_max_V = 1500.0) {
    DeviceRangeMap map;
    map.ranges = {
        {std::min(v_min_V, 0.0), 500.0, true, true, "E4M0025075J2"},
        {500.0, 1000.0, false, false, "AIMZHN120R010"},
        {1000.0, std::max(v_max_V, 1500.0), true, true, "C2M0045170P"},
    };
    return map;
}

/// Sweep configuration. eta_inverter is the efficiency assumed when turning
/// mechanical power into DC bus current for cable sizing.
struct SweepConfig {
    double v_min_V = 450.0;
    double v_max_V = 1500.0;
    double v_step_V = 10.0;
    double beta = 0.5;
    double f_sw_Hz = 10000.0;
    double eta_inverter = 0.98;
    PwmMethod pwm = PwmMethod::sine_triangle;
    Normalization normalization = Normalization::none;

    void validate() const {
        if (!(beta > 0 && beta < 1)) throw ValidationError("sweep: beta must be in (0, 1)");
        if (!(v_min_V > 0)) throw ValidationError("sweep: v_min must be > 0");
        if (!(v_min_V <= v_max_V)) throw ValidationError("sweep: v_min must be <= v_max");
        if (!(v_step_V > 0)) throw ValidationError("sweep: v_step must be > 0");
        if (!(f_sw_Hz > 0)) throw ValidationError("sweep: f_sw must be > 0");
        if (!(eta_inverter > 0 && eta_inverter <= 1))
            throw ValidationError("sweep: eta_inverter must be in (0, 1]");
    }
};

/// One evaluated grid voltage. Infeasible points stay in the output with
/// feasible = false and a reason, so gaps in the trace are visible.
struct SweepPoint {
    double v_dc_V = 0.0;
    double m = 0.0;
    std::string device_id;
    double p_cond_W = 0.0;   ///< six-switch conduction loss
    double p_sw_W = 0.0;     ///< six-switch switching loss
    double p_loss_W = 0.0;
    double i_dc_A = 0.0;
    double a_cu_cm2 = 0.0;
    double r_c_cm = 0.0;
    double t_i_cm = 0.0;
    double f_obj = std::numeric_limits<double>::quiet_NaN();
    bool feasible = false;
    std::string note;        ///< infeasibility reason when not feasible
};

/// Modulation index demanded by the motor's back-EMF at a bus voltage.
/// Throws InfeasibleError when the voltage is too low for the speed (m > 1).
inline double modulation_index(const MotorSpec& motor, double v_dc_V, PwmMethod pwm) {
    motor.validate();
    if (!(v_dc_V > 0)) throw DomainError("modulation_index: v_dc must be > 0");
    const double v_ph = motor.phase_voltage_V();
    const double v_avail = pwm == PwmMethod::sine_triangle ? v_dc_V / 2.0
                                                           : v_dc_V / std::sqrt(3.0);
    const double m = v_ph / v_avail;
    if (m > 1.0)
        throw InfeasibleError("modulation_index: " + std::to_string(v_dc_V) +
                              " V is too low for " + std::to_string(motor.omega_m_rad_s) +
                              " rad/s (m = " + std::to_string(m) + ")");
    return m;
}

/// Term scales used to put cross-section and loss on a common axis.
struct ObjectiveContext {
    Normalization normalization = Normalization::none;
    double a_scale_cm2 = 1.0;
    double p_scale_W = kRawLossScaleW;
};

/// Scalarized objective beta*(A_cu/a_scale) + (1-beta)*(P_loss/p_scale).
inline double objective(double a_cu_cm2, double p_loss_W, double beta,
                        const ObjectiveContext& ctx) {
    if (!(beta > 0 && beta < 1)) throw DomainError("objective: beta must be in (0, 1)");
    if (!(ctx.a_scale_cm2 > 0) || !(ctx.p_scale_W > 0))
        throw ConfigError("objective: normalization context missing or degenerate");
    return beta * (a_cu_cm2 / ctx.a_scale_cm2) + (1.0 - beta) * (p_loss_W / ctx.p_scale_W);
}

/// Builds the term scales for a sweep result: maxima over the feasible grid
/// for max_over_sweep, the lowest feasible grid point's values for
/// reference_voltage, fixed unit scales (cm2, kW) for none.
inline ObjectiveContext make_objective_context(std::span<const SweepPoint> points,
                                               Normalization normalization) {
    ObjectiveContext ctx;
    ctx.normalization = normalization;
    if (normalization == Normalization::none) return ctx;
    const SweepPoint* reference = nullptr;
    double a_max = 0.0;
    double p_max = 0.0;
    for (const auto& p : points) {
        if (!p.feasible) continue;
        if (reference == nullptr) reference = &p;
        a_max = std::max(a_max, p.a_cu_cm2);
        p_max = std::max(p_max, p.p_loss_W);
    }
    if (reference == nullptr)
        throw ConfigError("objective: no feasible point to normalize against");
    if (normalization == Normalization::max_over_sweep) {
        ctx.a_scale_cm2 = a_max;
        ctx.p_scale_W = p_max;
    } else {
        ctx.a_scale_cm2 = reference->a_cu_cm2;
        ctx.p_scale_W = reference->p_loss_W;
    }
    return ctx;
}

/// Recomputes f_obj on an existing sweep for a new weight or normalization.
inline void apply_objective(std::vector<SweepPoint>& points, double beta,
                            Normalization normalization) {
    const ObjectiveContext ctx = make_objective_context(points, normalization);
    for (auto& p : points) {
        p.f_obj = p.feasible ? objective(p.a_cu_cm2, p.p_loss_W, beta, ctx)
                             : std::numeric_limits<double>::quiet_NaN();
    }
}

/// Evaluates every grid voltage: device assignment, modulation index,
/// inverter losses, DC current, cable selection, insulation thickness and
/// the objective. Points with m > 1 or no adequate cable are flagged
/// infeasible rather than dropped.
inline std::vector<SweepPoint> sweep(const MotorSpec& motor, const SweepConfig& cfg,
                                     const DeviceCatalog& devices, const DeviceRangeMap& ranges,
                                     const CableCatalog& cables,
                                     const InsulationParams& insulation = {}) {
    motor.validate();
    cfg.validate();
    devices.validate();
    cables.validate();
    insulation.validate();
    ranges.validate(cfg.v_min_V, cfg.v_max_V);
    for (const auto& r : ranges.ranges) {
        const auto& dev = devices.find(r.device_id);
        const double v_top = std::min(r.v_high_V, cfg.v_max_V);
        if (dev.v_dss_V < v_top)
            throw ConfigError("sweep: device '" + dev.part_id + "' (" +
                              std::to_string(dev.v_dss_V) + " V) is rated below its range top " +
                              std::to_string(v_top) + " V");
    }

    std::vector<SweepPoint> points;
    const double eps = cfg.v_step_V * 1e-9;
    const auto n_steps =
        static_cast<std::size_t>((cfg.v_max_V - cfg.v_min_V) / cfg.v_step_V + eps);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double v_dc = std::min(cfg.v_min_V + static_cast<double>(k) * cfg.v_step_V,
                                     cfg.v_max_V);
        SweepPoint pt;
        pt.v_dc_V = v_dc;
        pt.device_id = ranges.find(v_dc).device_id;
        const auto& dev = devices.find(pt.device_id);

        const double v_avail = cfg.pwm == PwmMethod::sine_triangle ? v_dc / 2.0
                                                                   : v_dc / std::sqrt(3.0);
        pt.m = motor.phase_voltage_V() / v_avail;
        if (pt.m > 1.0) {
            pt.feasible = false;
            pt.note = "m > 1";
            points.push_back(std::move(pt));
            continue;
        }

        OperatingPoint op;
        op.i_m_A = motor.i_m_A;
        op.m = pt.m;
        op.cos_phi = motor.cos_phi;
        op.f_sw_Hz = cfg.f_sw_Hz;
        op.v_dc_V = v_dc;
        op.omega_e_rad_s = motor.pole_pairs * motor.omega_m_rad_s;
        const InverterLoss loss = inverter_loss_breakdown(dev, op);
        pt.p_cond_W = loss.conduction_W;
        pt.p_sw_W = loss.switching_W;
        pt.p_loss_W = loss.total_W();

        pt.i_dc_A = required_dc_current(motor.p_mech_W, v_dc, motor.eta_motor,
                                        cfg.eta_inverter);
        try {
            const CableEntry& cable = select_cable(pt.i_dc_A, cables);
            pt.a_cu_cm2 = cable.a_cu_cm2;
        } catch (const InfeasibleError& e) {
            pt.feasible = false;
            pt.note = e.what();
            points.push_back(std::move(pt));
            continue;
        }
        pt.r_c_cm = copper_radius(pt.a_cu_cm2);
        pt.t_i_cm = insulation_thickness(pt.r_c_cm, v_dc / 1000.0, insulation);
        pt.feasible = true;
        points.push_back(std::move(pt));
    }

    bool any_feasible = false;
    for (const auto& p : points) any_feasible = any_feasible || p.feasible;
    if (!any_feasible)
        throw InfeasibleError("sweep: no feasible voltage in [" + std::to_string(cfg.v_min_V) +
                              ", " + std::to_string(cfg.v_max_V) + "] V");

    apply_objective(points, cfg.beta, cfg.normalization);
    return points;
}

/// Feasible point with the smallest objective; exact ties resolve to the
/// higher voltage.
inline const SweepPoint& pick_optimum(std::span<const SweepPoint> points) {
    const SweepPoint* best = nullptr;
    for (const auto& p : points) {
        if (!p.feasible) continue;
        if (best == nullptr || p.f_obj < best->f_obj ||
            (p.f_obj == best->f_obj && p.v_dc_V > best->v_dc_V))
            best = &p;
    }
    if (best == nullptr) throw InfeasibleError("optimize: no feasible sweep point");
    return *best;
}

/// Re-weights an existing sweep and returns its optimum.
inline const SweepPoint& optimize(std::vector<SweepPoint>& points, double beta,
                                  Normalization normalization) {
    apply_objective(points, beta, normalization);
    return pick_optimum(points);
}

}  // namespace evopt
