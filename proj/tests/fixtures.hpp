#pragma once

// In-code copies of the shipped catalog values, so unit tests do not depend
// on the data directory. test_io checks the shipped files load to these.

#include "evopt/cable.hpp"
#include "evopt/device_loss.hpp"
#include "evopt/mission.hpp"
#include "evopt/optimizer.hpp"

namespace evopt::test {

inline DeviceCatalog stock_devices() {
    DeviceCatalog c;
    c.devices = {
        {"E4M0025075J2", 750.0, 84.0, 25e-3, 120e-6, 400.0, 1.4},
        {"AIMZHN120R010", 1200.0, 202.0, 8.7e-3, 330e-6, 800.0, 1.4},
        {"C2M0045170P", 1700.0, 75.0, 40e-3, 390e-6, 1200.0, 1.4},
    };
    return c;
}

inline CableCatalog stock_cables() {
    CableCatalog c;
    c.derating_factor = 0.75;
    c.entries = {
        {0.015, 18.0}, {0.025, 24.75}, {0.04, 33.75}, {0.06, 45.0}, {0.10, 69.75},
        {0.16, 91.5},  {0.25, 114.75}, {0.35, 144.75}, {0.50, 183.75}, {0.70, 229.5},
        {0.95, 279.75}, {1.20, 330.0}, {1.50, 379.5}, {1.85, 433.5}, {2.40, 510.0},
    };
    return c;
}

inline MotorSpec stock_motor() {
    MotorSpec m;
    m.p_mech_W = 57600.0;
    m.omega_m_rad_s = 328.6;
    m.k_t_Nm_A = 0.6;
    m.eta_motor = 0.918;
    m.i_m_A = 194.6;
    m.cos_phi = 0.95;
    m.pole_pairs = 4;
    return m;
}

inline ReconfigurablePack stock_pack() {
    ReconfigurablePack p;
    p.n_cells_total = 280;
    p.cell_capacity_Ah = 120.0;
    p.ocv_full_V = 4.1;
    p.ocv_empty_V = 3.5;
    p.r_cell_Ohm = 0.001;
    p.soc = 1.0;
    p.cells_per_module = 1;
    return p;
}

inline MissionProfile stock_mission() {
    MissionProfile profile;
    profile.segments = {
        {FlightPhase::takeoff, 60.0, 481.8, 394.32},
        {FlightPhase::climb, 120.0, 315.0, 361.46},
        {FlightPhase::cruise, 1200.0, 175.2, 328.6},
        {FlightPhase::descent, 120.0, 116.8, 295.74},
        {FlightPhase::landing, 60.0, 481.8, 394.32},
    };
    return profile;
}

}  // namespace evopt::test
