#pragma once

// Loss extraction from steady-state case temperatures. A DC conduction test
// (three switches held on into a resistive load) calibrates the case-to-
// ambient thermal resistance; inverter runs then turn measured temperature
// rises into total losses, which split into conduction (recomputed from the
// motor current) and switching parts. A log-log regression over the
// switching losses recovers the voltage-scaling exponent k_v and the lumped
// f_sw*(E_on+E_off) scale of the analytical model.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "evopt/device_loss.hpp"
#include "evopt/errors.hpp"

namespace evopt {

/// One DC calibration point: S1/S4/S6 at 100% duty into a resistive load,
/// so only conduction heats the module.
struct ConductionCalibrationTest {
    double i_a_rms_A = 0.0;
    double i_b_rms_A = 0.0;
    double i_c_rms_A = 0.0;
    double r_ds_on_Ohm = 0.0;
    double r_jc_C_per_W = 0.0;
    double t_case_C = 0.0;
    double t_amb_C = 0.0;

    void validate() const {
        if (i_a_rms_A < 0 || i_b_rms_A < 0 || i_c_rms_A < 0)
            throw ValidationError("calibration test: currents must be >= 0");
        if (!(r_ds_on_Ohm > 0)) throw ValidationError("calibration test: r_ds_on must be > 0");
        if (r_jc_C_per_W < 0) throw ValidationError("calibration test: r_jc must be >= 0");
        if (!(t_case_C > t_amb_C))
            throw ValidationError("calibration test: t_case must exceed t_amb");
    }
};

/// One steady-state inverter run.
struct ThermalMeasurement {
    double v_dc_V = 0.0;
    double m = 0.0;
    double t_case_C = 0.0;
    double t_amb_C = 0.0;
    double f_sw_Hz = 0.0;
    double i_m_A = 0.0;
    double cos_phi = 1.0;

    void validate() const {
        if (!(v_dc_V > 0)) throw ValidationError("measurement: v_dc must be > 0");
        if (!(m > 0 && m <= 1)) throw ValidationError("measurement: m must be in (0, 1]");
        if (t_case_C < t_amb_C)
            throw ValidationError("measurement: t_case must be >= t_amb");
        if (!(f_sw_Hz > 0)) throw ValidationError("measurement: f_sw must be > 0");
        if (i_m_A < 0) throw ValidationError("measurement: i_m must be >= 0");
        if (!(cos_phi >= 0 && cos_phi <= 1))
            throw ValidationError("measurement: cos_phi must be in [0, 1]");
    }
};

/// Lumped steady-state equivalent: one case node for the whole module.
struct ThermalModel {
    double r_ca_C_per_W = 0.0;  ///< case to ambient
    double r_jc_C_per_W = 0.0;  ///< junction to case, per device
    int n_devices = kSwitchesPerInverter;

    void validate() const {
        if (!(r_ca_C_per_W > 0)) throw ValidationError("thermal model: r_ca must be > 0");
        if (r_jc_C_per_W < 0) throw ValidationError("thermal model: r_jc must be >= 0");
        if (n_devices < 1) throw ValidationError("thermal model: n_devices must be >= 1");
    }
};

/// Conduction loss of the DC calibration circuit, (Ia^2 + Ib^2 + Ic^2) * r.
inline double conduction_loss_dc_test(const ConductionCalibrationTest& test) {
    test.validate();
    return (test.i_a_rms_A * test.i_a_rms_A + test.i_b_rms_A * test.i_b_rms_A +
            test.i_c_rms_A * test.i_c_rms_A) *
           test.r_ds_on_Ohm;
}

/// Case-to-ambient resistance of a single calibration point.
inline double rca_from_test(const ConductionCalibrationTest& test) {
    const double p_cond = conduction_loss_dc_test(test);
    return (test.t_case_C - test.t_amb_C) / p_cond;
}

/// Arithmetic mean of (t_case - t_amb)/P_cond over the calibration tests.
inline double estimate_rca(std::span<const ConductionCalibrationTest> tests) {
    if (tests.empty()) throw ValidationError("estimate_rca: at least one test required");
    double sum = 0.0;
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const double p_cond = conduction_loss_dc_test(tests[i]);
        if (!(p_cond > 0))
            throw DomainError("estimate_rca: test " + std::to_string(i) +
                              " has zero conduction loss");
        sum += (tests[i].t_case_C - tests[i].t_amb_C) / p_cond;
    }
    return sum / static_cast<double>(tests.size());
}

/// Total module loss inferred from the case temperature rise.
inline double total_loss_from_temperature(const ThermalMeasurement& meas,
                                          const ThermalModel& model) {
    model.validate();
    if (meas.t_case_C < meas.t_amb_C)
        throw ValidationError("total_loss_from_temperature: t_case below t_amb");
    return (meas.t_case_C - meas.t_amb_C) / model.r_ca_C_per_W;
}

/// Junction temperature of one device above the shared case node.
inline double device_junction_temperature(double t_case_C, double r_jc_C_per_W,
                                          double p_device_W) {
    return t_case_C + r_jc_C_per_W * p_device_W;
}

struct LossSplit {
    double p_sw_tot_W = 0.0;
    double p_sw_per_device_W = 0.0;
    double p_cond_per_device_W = 0.0;
};

/// Splits a measured total into switching and conduction parts and divides
/// them over the module's devices.
inline LossSplit separate_losses(double p_loss_tot_W, double p_cond_tot_W, int n_devices) {
    if (n_devices < 1) throw DomainError("separate_losses: n_devices must be >= 1");
    if (p_cond_tot_W < 0) throw DomainError("separate_losses: p_cond must be >= 0");
    if (p_cond_tot_W > p_loss_tot_W)
        throw DomainError("separate_losses: conduction loss exceeds the measured total; "
                          "check the thermal calibration");
    LossSplit split;
    split.p_sw_tot_W = p_loss_tot_W - p_cond_tot_W;
    split.p_sw_per_device_W = split.p_sw_tot_W / n_devices;
    split.p_cond_per_device_W = p_cond_tot_W / n_devices;
    return split;
}

/// Result of the switching-loss regression.
struct KvFit {
    double k_v = 0.0;
    double fsw_energy_scale = 0.0;  ///< f_sw * (E_on + E_off)
    double residual_rms_log = 0.0;  ///< rms of the log-domain residuals
};

/// Least-squares fit of log(p_sw / (m*i_m*cos_phi/4)) against
/// log(v_dc/v_ref): the slope is k_v and the intercept is
/// log(f_sw*(E_on+E_off)). Needs at least three points spanning a 1.5x
/// voltage ratio.
inline KvFit fit_kv(std::span<const ThermalMeasurement> measurements,
                    std::span<const double> extracted_sw_losses_W, const SicDevice& device) {
    device.validate();
    if (measurements.size() != extracted_sw_losses_W.size())
        throw ConfigError("fit_kv: one switching loss per measurement required");
    if (measurements.size() < 3)
        throw DomainError("fit_kv: at least three measurements required");
    double v_lo = measurements[0].v_dc_V;
    double v_hi = measurements[0].v_dc_V;
    for (const auto& meas : measurements) {
        meas.validate();
        v_lo = std::min(v_lo, meas.v_dc_V);
        v_hi = std::max(v_hi, meas.v_dc_V);
    }
    if (v_hi < 1.5 * v_lo)
        throw DomainError("fit_kv: voltage spread " + std::to_string(v_hi / v_lo) +
                          "x is below the required 1.5x; fit underdetermined");

    const auto n = static_cast<double>(measurements.size());
    std::vector<double> xs(measurements.size());
    std::vector<double> ys(measurements.size());
    for (std::size_t i = 0; i < measurements.size(); ++i) {
        const auto& meas = measurements[i];
        const double i_avg = meas.m * meas.i_m_A * meas.cos_phi / 4.0;
        if (!(i_avg > 0))
            throw DomainError("fit_kv: measurement " + std::to_string(i) +
                              " has zero average switch current");
        if (!(extracted_sw_losses_W[i] > 0))
            throw DomainError("fit_kv: measurement " + std::to_string(i) +
                              " has non-positive switching loss");
        xs[i] = std::log(meas.v_dc_V / device.v_ref_V);
        ys[i] = std::log(extracted_sw_losses_W[i] / i_avg);
    }
    double x_mean = 0.0;
    double y_mean = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x_mean += xs[i];
        y_mean += ys[i];
    }
    x_mean /= n;
    y_mean /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
        sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
    }
    if (!(sxx > 0)) throw DomainError("fit_kv: degenerate voltage spread");

    KvFit fit;
    fit.k_v = sxy / sxx;
    const double intercept = y_mean - fit.k_v * x_mean;
    fit.fsw_energy_scale = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + fit.k_v * xs[i]);
        ss += r * r;
    }
    fit.residual_rms_log = std::sqrt(ss / n);
    return fit;
}

/// Switching loss predicted by a fit at a measurement's operating point.
inline double predict_sw_loss(const KvFit& fit, const SicDevice& device,
                              const ThermalMeasurement& meas) {
    const double i_avg = meas.m * meas.i_m_A * meas.cos_phi / 4.0;
    return fit.fsw_energy_scale * std::pow(meas.v_dc_V / device.v_ref_V, fit.k_v) * i_avg;
}

/// One extracted row of the loss pipeline.
struct ExtractionRow {
    ThermalMeasurement measurement;
    double p_loss_tot_W = 0.0;
    double p_cond_tot_W = 0.0;
    double p_sw_tot_W = 0.0;
    double p_sw_per_device_W = 0.0;
    double p_cond_per_device_W = 0.0;
    double t_junction_C = 0.0;  ///< hottest-device estimate, reported only
};

/// Full pipeline over a measurement set: total loss from temperature,
/// conduction recomputed from the measured motor current, split, and the
/// k_v regression over the extracted switching losses.
struct ExtractionResult {
    std::vector<ExtractionRow> rows;
    KvFit fit;
};

inline ExtractionResult extract_losses(std::span<const ThermalMeasurement> measurements,
                                       const ThermalModel& model, const SicDevice& device) {
    model.validate();
    ExtractionResult result;
    std::vector<double> sw_losses;
    for (const auto& meas : measurements) {
        meas.validate();
        ExtractionRow row;
        row.measurement = meas;
        row.p_loss_tot_W = total_loss_from_temperature(meas, model);
        OperatingPoint op;
        op.i_m_A = meas.i_m_A;
        op.m = meas.m;
        op.cos_phi = meas.cos_phi;
        op.f_sw_Hz = meas.f_sw_Hz;
        op.v_dc_V = meas.v_dc_V;
        op.omega_e_rad_s = 1.0;  // not part of the steady-state extraction
        row.p_cond_tot_W = model.n_devices * conduction_loss_per_device(device, op);
        const LossSplit split =
            separate_losses(row.p_loss_tot_W, row.p_cond_tot_W, model.n_devices);
        row.p_sw_tot_W = split.p_sw_tot_W;
        row.p_sw_per_device_W = split.p_sw_per_device_W;
        row.p_cond_per_device_W = split.p_cond_per_device_W;
        row.t_junction_C = device_junction_temperature(
            meas.t_case_C, model.r_jc_C_per_W,
            split.p_sw_per_device_W + split.p_cond_per_device_W);
        sw_losses.push_back(row.p_sw_per_device_W);
        result.rows.push_back(row);
    }
    result.fit = fit_kv(measurements, sw_losses, device);
    return result;
}

}  // namespace evopt
