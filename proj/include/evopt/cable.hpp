#pragma once

// DC power-cable sizing: discrete selection from a commercial conductor
// catalog by ampacity, circular-conductor geometry, a single-void breakdown
// model for insulation thickness, and per-length mass.

#include <cmath>
#include <string>
#include <vector>

#include "evopt/errors.hpp"

namespace evopt {

/// One commercial conductor size. ampacity_A is the derated continuous
/// rating actually used for selection.
struct CableEntry {
    double a_cu_cm2 = 0.0;
    double ampacity_A = 0.0;

    void validate() const {
        if (!(a_cu_cm2 > 0)) throw ValidationError("cable entry: cross-section must be > 0");
        if (!(ampacity_A > 0)) throw ValidationError("cable entry: ampacity must be > 0");
    }
};

/// Ordered list of conductor sizes forming the stepped rating curve.
/// derating_factor records the factor already applied to the ampacities.
struct CableCatalog {
    std::vector<CableEntry> entries;  ///< ascending by cross-section
    double derating_factor = 1.0;

    void validate() const {
        if (entries.empty()) throw ValidationError("cable catalog: empty catalog");
        if (!(derating_factor > 0 && derating_factor <= 1))
            throw ValidationError("cable catalog: derating_factor must be in (0, 1]");
        for (const auto& e : entries) e.validate();
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (!(entries[i].a_cu_cm2 > entries[i - 1].a_cu_cm2))
                throw ValidationError(
                    "cable catalog: cross-sections must be strictly increasing (" +
                    std::to_string(entries[i - 1].a_cu_cm2) + " cm2 then " +
                    std::to_string(entries[i].a_cu_cm2) + " cm2)");
            if (!(entries[i].ampacity_A > entries[i - 1].ampacity_A))
                throw ValidationError(
                    "cable catalog: ampacity must be strictly increasing with cross-section (" +
                    std::to_string(entries[i - 1].ampacity_A) + " A at " +
                    std::to_string(entries[i - 1].a_cu_cm2) + " cm2, " +
                    std::to_string(entries[i].ampacity_A) + " A at " +
                    std::to_string(entries[i].a_cu_cm2) + " cm2)");
        }
    }
};

/// Parameters of the single-void insulation breakdown model. The additive
/// constant is valid for applied voltages below 20 kV.
struct InsulationParams {
    double t_v_cm = 0.005;     ///< void size (50 um default)
    double alpha_kV = 0.340;   ///< breakdown constant
    double c_const_cm = 0.1;   ///< additive constant, valid below 20 kV
    double eps_r = 2.3;        ///< relative permittivity (XLPE default)

    void validate() const {
        if (!(t_v_cm > 0)) throw ValidationError("insulation: t_v must be > 0");
        if (!(alpha_kV > 0)) throw ValidationError("insulation: alpha must be > 0");
        if (!(c_const_cm > 0)) throw ValidationError("insulation: c_const must be > 0");
        if (!(eps_r >= 1)) throw ValidationError("insulation: eps_r must be >= 1");
    }
};

/// DC bus current drawn for a mechanical output power at a bus voltage,
/// assuming motor and inverter efficiencies.
inline double required_dc_current(double p_mech_W, double v_dc_V, double eta_motor,
                                  double eta_inverter) {
    if (!(v_dc_V > 0)) throw DomainError("required_dc_current: v_dc must be > 0");
    if (!(eta_motor > 0 && eta_motor <= 1))
        throw DomainError("required_dc_current: eta_motor must be in (0, 1]");
    if (!(eta_inverter > 0 && eta_inverter <= 1))
        throw DomainError("required_dc_current: eta_inverter must be in (0, 1]");
    if (p_mech_W < 0) throw DomainError("required_dc_current: p_mech must be >= 0");
    return p_mech_W / (eta_motor * eta_inverter * v_dc_V);
}

/// Smallest catalog entry whose derated ampacity covers the request.
inline const CableEntry& select_cable(double i_req_A, const CableCatalog& catalog) {
    catalog.validate();
    if (i_req_A < 0) throw DomainError("select_cable: current must be >= 0");
    for (const auto& e : catalog.entries)
        if (e.ampacity_A >= i_req_A) return e;
    const auto& largest = catalog.entries.back();
    throw InfeasibleError("select_cable: " + std::to_string(i_req_A) +
                          " A exceeds the largest catalog entry (" +
                          std::to_string(largest.a_cu_cm2) + " cm2, " +
                          std::to_string(largest.ampacity_A) + " A)");
}

/// Radius of a solid circular conductor of the given cross-section. The
/// optional fill factor models stranding (effective area a_cu/fill).
inline double copper_radius(double a_cu_cm2, double fill_factor = 1.0) {
    if (!(a_cu_cm2 > 0)) throw DomainError("copper_radius: cross-section must be > 0");
    if (!(fill_factor > 0 && fill_factor <= 1))
        throw DomainError("copper_radius: fill_factor must be in (0, 1]");
    return std::sqrt(a_cu_cm2 / (M_PI * fill_factor));
}

/// Field-enhancement coefficient of a spherical void, 3*eps_r/(1+2*eps_r).
/// Increases monotonically from 1 (vacuum) towards 1.5.
inline double field_enhancement_k(double eps_r) {
    if (!(eps_r >= 1)) throw DomainError("field_enhancement_k: eps_r must be >= 1");
    return 3.0 * eps_r / (1.0 + 2.0 * eps_r);
}

/// Insulation thickness around a conductor of radius r_c at applied voltage
/// v_max (kV): r_c*(exp(K*v_max*t_v/(alpha*r_c)) - 1) + C.
inline double insulation_thickness(double r_c_cm, double v_max_kV,
                                   const InsulationParams& params = {}) {
    params.validate();
    if (!(r_c_cm > 0)) throw DomainError("insulation_thickness: r_c must be > 0");
    if (!(v_max_kV >= 0)) throw DomainError("insulation_thickness: v_max must be >= 0");
    if (v_max_kV >= 20.0)
        throw DomainError("insulation_thickness: model valid only below 20 kV");
    const double k = field_enhancement_k(params.eps_r);
    const double exponent = k * v_max_kV * params.t_v_cm / (params.alpha_kV * r_c_cm);
    return r_c_cm * std::expm1(exponent) + params.c_const_cm;
}

/// Mass per meter of a solid copper core of radius r_c with an insulation
/// annulus of thickness t_i. Densities in g/cm3, result in kg/m.
inline double cable_mass_per_length(double r_c_cm, double t_i_cm, double rho_cu_g_cm3 = 8.96,
                                    double rho_ins_g_cm3 = 0.93) {
    if (!(r_c_cm > 0)) throw DomainError("cable_mass_per_length: r_c must be > 0");
    if (t_i_cm < 0) throw DomainError("cable_mass_per_length: t_i must be >= 0");
    if (rho_cu_g_cm3 < 0 || rho_ins_g_cm3 < 0)
        throw DomainError("cable_mass_per_length: densities must be >= 0");
    const double copper_area = M_PI * r_c_cm * r_c_cm;
    const double outer = r_c_cm + t_i_cm;
    const double ins_area = M_PI * (outer * outer - r_c_cm * r_c_cm);
    return 100.0 * (rho_cu_g_cm3 * copper_area + rho_ins_g_cm3 * ins_area) / 1000.0;
}

}  // namespace evopt
