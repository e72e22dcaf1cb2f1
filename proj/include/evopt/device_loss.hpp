#pragma once

// Closed-form loss model for a two-level three-phase SiC inverter under
// sinusoidal PWM. With sinusoidal motor currents and symmetric duty
// references every switch carries the same rms current I_m/2 and the same
// average current m*I_m*cos(phi)/4, which gives per-device conduction and
// switching losses in closed form. The switching energy is scaled from the
// datasheet test voltage with a power-law exponent k_v.

#include <cmath>
#include <string>
#include <vector>

#include "evopt/errors.hpp"

namespace evopt {

/// Number of switches in a two-level three-phase bridge.
inline constexpr int kSwitchesPerInverter = 6;

/// Fallback voltage-scaling exponent for switching energy when a catalog
/// entry does not specify one.
inline constexpr double kDefaultKv = 1.4;

/// One SiC MOSFET catalog entry.
///
/// Switching energy is stored as the summed turn-on plus turn-off energy at
/// the datasheet test voltage v_ref_V; only the sum enters the loss model.
struct SicDevice {
    std::string part_id;
    double v_dss_V = 0.0;      ///< drain-source blocking rating
    double i_d_A = 0.0;        ///< continuous drain current rating
    double r_ds_on_Ohm = 0.0;  ///< on-state resistance
    double e_on_off_J = 0.0;   ///< E_on + E_off at the datasheet test point
    double v_ref_V = 0.0;      ///< test voltage for the switching energies
    double k_v = kDefaultKv;   ///< voltage-scaling exponent of E_on + E_off

    void validate() const {
        if (part_id.empty()) throw ValidationError("device: empty part_id");
        if (!(v_dss_V > 0)) throw ValidationError(part_id + ": v_dss must be > 0");
        if (!(i_d_A > 0)) throw ValidationError(part_id + ": i_d must be > 0");
        if (!(r_ds_on_Ohm > 0)) throw ValidationError(part_id + ": r_ds_on must be > 0");
        if (e_on_off_J < 0) throw ValidationError(part_id + ": e_on_off must be >= 0");
        if (!(v_ref_V > 0)) throw ValidationError(part_id + ": v_ref must be > 0");
        if (!(k_v > 0)) throw ValidationError(part_id + ": k_v must be > 0");
    }
};

/// Collection of devices with unique part ids.
struct DeviceCatalog {
    std::vector<SicDevice> devices;

    void validate() const {
        if (devices.empty()) throw ValidationError("device catalog: empty catalog");
        for (const auto& d : devices) d.validate();
        for (std::size_t i = 0; i < devices.size(); ++i)
            for (std::size_t j = i + 1; j < devices.size(); ++j)
                if (devices[i].part_id == devices[j].part_id)
                    throw ValidationError("device catalog: duplicate part_id '" +
                                          devices[i].part_id + "'");
    }

    [[nodiscard]] const SicDevice& find(const std::string& part_id) const {
        for (const auto& d : devices)
            if (d.part_id == part_id) return d;
        throw ConfigError("device catalog: unknown part_id '" + part_id + "'");
    }

    [[nodiscard]] bool contains(const std::string& part_id) const {
        for (const auto& d : devices)
            if (d.part_id == part_id) return true;
        return false;
    }
};

/// Steady-state inverter operating point.
///
/// m = 0 is accepted as the degenerate zero-modulation case (all loss terms
/// vanish continuously there); it shows up for zero-speed flight segments.
struct OperatingPoint {
    double i_m_A = 0.0;         ///< motor phase current amplitude
    double m = 0.0;             ///< modulation index, in [0, 1]
    double cos_phi = 1.0;       ///< displacement power factor, in [0, 1]
    double f_sw_Hz = 0.0;       ///< switching frequency
    double v_dc_V = 0.0;        ///< DC bus voltage
    double omega_e_rad_s = 0.0; ///< fundamental electrical angular frequency

    void validate() const {
        if (!(i_m_A >= 0)) throw ValidationError("operating point: i_m must be >= 0");
        if (!(m >= 0 && m <= 1)) throw ValidationError("operating point: m must be in [0, 1]");
        if (!(cos_phi >= 0 && cos_phi <= 1))
            throw ValidationError("operating point: cos_phi must be in [0, 1]");
        if (!(f_sw_Hz > 0)) throw ValidationError("operating point: f_sw must be > 0");
        if (!(v_dc_V > 0)) throw ValidationError("operating point: v_dc must be > 0");
        if (!(omega_e_rad_s > 0))
            throw ValidationError("operating point: omega_e must be > 0");
        if (!(f_sw_Hz > omega_e_rad_s / (2.0 * M_PI)))
            throw ValidationError("operating point: f_sw must exceed the fundamental frequency");
    }
};

/// Per-switch rms current, I_m/2. Independent of v_dc, m and cos_phi.
inline double switch_rms_current(const OperatingPoint& op) {
    op.validate();
    return op.i_m_A / 2.0;
}

/// Per-switch average current, m*I_m*cos(phi)/4.
inline double switch_avg_current(const OperatingPoint& op) {
    op.validate();
    return op.m * op.i_m_A * op.cos_phi / 4.0;
}

/// Conduction loss of one switch, (I_m^2/4)*r_ds_on.
inline double conduction_loss_per_device(const SicDevice& dev, const OperatingPoint& op) {
    dev.validate();
    op.validate();
    return op.i_m_A * op.i_m_A / 4.0 * dev.r_ds_on_Ohm;
}

/// Switching loss of one switch: the datasheet energy sum scaled to the bus
/// voltage with exponent k_v and weighted by the average switch current.
inline double switching_loss_per_device(const SicDevice& dev, const OperatingPoint& op) {
    dev.validate();
    op.validate();
    const double voltage_scale = std::pow(op.v_dc_V / dev.v_ref_V, dev.k_v);
    return op.f_sw_Hz * dev.e_on_off_J * voltage_scale * switch_avg_current(op);
}

/// Conduction/switching split for the whole six-switch inverter.
struct InverterLoss {
    double conduction_W = 0.0;
    double switching_W = 0.0;

    [[nodiscard]] double total_W() const { return conduction_W + switching_W; }
};

/// Loss of all six switches, split by mechanism.
inline InverterLoss inverter_loss_breakdown(const SicDevice& dev, const OperatingPoint& op) {
    return InverterLoss{
        kSwitchesPerInverter * conduction_loss_per_device(dev, op),
        kSwitchesPerInverter * switching_loss_per_device(dev, op),
    };
}

/// Total inverter loss, 6 * (conduction + switching) per device.
inline double inverter_total_loss(const SicDevice& dev, const OperatingPoint& op) {
    return inverter_loss_breakdown(dev, op).total_W();
}

}  // namespace evopt
