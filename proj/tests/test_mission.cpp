#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "evopt/mission.hpp"
#include "fixtures.hpp"

using namespace evopt;

namespace {

MissionSegment cruise_segment(double torque = 175.2, double speed = 328.6) {
    return {FlightPhase::cruise, 1200.0, torque, speed};
}

DeviceRangeMap wide_single_device_map(const std::string& id = "AIMZHN120R010") {
    DeviceRangeMap map;
    map.ranges = {{0.0, 1200.0, true, true, id}};
    return map;
}

MissionSimConfig stock_sim_config() {
    MissionSimConfig cfg;
    cfg.f_sw_Hz = 10000.0;
    cfg.pwm = PwmMethod::sine_triangle;
    cfg.margin = 0.3;
    cfg.dt_s = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("segment voltage requirement") {
    const auto motor = test::stock_motor();

    SECTION("zero speed needs no bus voltage") {
        MissionSegment parked{FlightPhase::takeoff, 10.0, 0.0, 0.0};
        CHECK(segment_voltage_requirement(parked, motor, PwmMethod::sine_triangle, 0.1) == 0.0);
    }

    SECTION("cruise speed with no margin") {
        CHECK(segment_voltage_requirement(cruise_segment(), motor, PwmMethod::sine_triangle,
                                          0.0) == Catch::Approx(394.32).margin(1e-9));
    }

    SECTION("hover outranks cruise") {
        const auto mission = test::stock_mission();
        const double v_takeoff = segment_voltage_requirement(mission.segments.front(), motor,
                                                             PwmMethod::sine_triangle, 0.0);
        const double v_cruise =
            segment_voltage_requirement(cruise_segment(), motor, PwmMethod::sine_triangle, 0.0);
        CHECK(v_takeoff > v_cruise);
    }

    SECTION("svpwm needs sqrt(3)/2 of the sine-triangle bus") {
        const double v_st =
            segment_voltage_requirement(cruise_segment(), motor, PwmMethod::sine_triangle, 0.0);
        const double v_sv =
            segment_voltage_requirement(cruise_segment(), motor, PwmMethod::svpwm, 0.0);
        CHECK(v_sv / v_st == Catch::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("reconfiguration planning") {
    const auto motor = test::stock_motor();
    auto pack = test::stock_pack();

    SECTION("exact integer division uses exactly that many cells") {
        MotorSpec unit_motor = motor;
        unit_motor.k_t_Nm_A = 1.0;
        pack.ocv_full_V = 4.0;
        pack.ocv_empty_V = 2.0;
        pack.soc = 1.0;
        // v_req = 2 * 1.0 * 20 = 40 V = 10 cells at 4.0 V
        MissionProfile single;
        single.segments = {{FlightPhase::cruise, 10.0, 1.0, 20.0}};
        const auto plan = plan_reconfiguration(single, pack, unit_motor,
                                               PwmMethod::sine_triangle, 0.0);
        REQUIRE(plan.size() == 1);
        CHECK(plan[0].n_active == 10);
    }

    SECTION("1000 V at 3.6 V per cell needs 278 cells") {
        ReconfigurablePack big = pack;
        big.n_cells_total = 400;
        big.ocv_full_V = 4.2;
        big.ocv_empty_V = 3.0;
        big.soc = 0.5;  // ocv = 3.6
        MotorSpec fast = motor;
        fast.k_t_Nm_A = 1000.0 / (2.0 * motor.omega_m_rad_s);  // v_req = 1000 V, margin 0
        MissionProfile single;
        single.segments = {{FlightPhase::cruise, 10.0, 100.0, motor.omega_m_rad_s}};
        const auto plan =
            plan_reconfiguration(single, big, fast, PwmMethod::sine_triangle, 0.0);
        CHECK(plan[0].n_active == 278);
    }

    SECTION("default mission: hover maximal, cruise minimal") {
        const auto plan = plan_reconfiguration(test::stock_mission(), pack, motor,
                                               PwmMethod::sine_triangle, 0.3);
        REQUIRE(plan.size() == 5);
        CHECK(plan[0].n_active == plan[4].n_active);         // takeoff == landing
        CHECK(plan[0].n_active >= plan[1].n_active);         // >= climb
        CHECK(plan[1].n_active >= plan[2].n_active);         // climb >= cruise
        for (const auto& e : plan) {
            CHECK(e.n_active * pack.ocv_at(pack.soc) >= e.v_dc_req_V);
            CHECK(e.n_active <= pack.n_cells_total);
        }
    }

    SECTION("equal-speed segments get equal counts at equal SoC") {
        const auto plan = plan_reconfiguration(test::stock_mission(), pack, motor,
                                               PwmMethod::sine_triangle, 0.3);
        for (std::size_t a = 0; a < plan.size(); ++a)
            for (std::size_t b = 0; b < plan.size(); ++b)
                if (plan[a].segment.speed_rad_s >= plan[b].segment.speed_rad_s)
                    REQUIRE(plan[a].n_active >= plan[b].n_active);
    }

    SECTION("module granularity rounds the count up") {
        ReconfigurablePack modular = pack;
        modular.cells_per_module = 10;
        const auto plan = plan_reconfiguration(test::stock_mission(), modular, motor,
                                               PwmMethod::sine_triangle, 0.3);
        for (const auto& e : plan) CHECK(e.n_active % 10 == 0);
    }

    SECTION("a pack too small for the worst segment is rejected by name") {
        ReconfigurablePack tiny = pack;
        tiny.n_cells_total = 100;
        CHECK_THROWS_WITH(plan_reconfiguration(test::stock_mission(), tiny, motor,
                                               PwmMethod::sine_triangle, 0.3),
                          Catch::Matchers::ContainsSubstring("takeoff"));
    }
}

TEST_CASE("mission simulation") {
    const auto motor = test::stock_motor();
    const auto pack = test::stock_pack();
    const auto devices = test::stock_devices();
    const auto ranges = standard_device_range_map(0.0, 1500.0);
    const auto cfg = stock_sim_config();

    SECTION("zero-torque mission draws nothing") {
        MissionProfile idle;
        idle.segments = {{FlightPhase::cruise, 30.0, 0.0, 328.6}};
        const auto report = simulate_mission(idle, pack, motor, devices, ranges, cfg);
        CHECK(report.final_soc == pack.soc);
        CHECK(report.energy_delivered_J == 0.0);
        CHECK(report.energy_lost_inverter_J == 0.0);
    }

    SECTION("default mission discharges monotonically and balances energy") {
        const auto report =
            simulate_mission(test::stock_mission(), pack, motor, devices, ranges, cfg);
        CHECK(report.final_soc < pack.soc);
        CHECK(report.final_soc > 0.2);
        double prev = pack.soc;
        for (const auto& row : report.rows) {
            REQUIRE(row.soc <= prev + 1e-15);
            prev = row.soc;
        }
        for (const auto& seg : report.segments) {
            const double residual = std::abs(seg.energy_battery_J - seg.energy_delivered_J -
                                             seg.energy_lost_inverter_J);
            REQUIRE(residual / seg.energy_battery_J < 1e-3);
        }
    }

    SECTION("simulation is deterministic") {
        const auto a = simulate_mission(test::stock_mission(), pack, motor, devices, ranges, cfg);
        const auto b = simulate_mission(test::stock_mission(), pack, motor, devices, ranges, cfg);
        REQUIRE(a.rows.size() == b.rows.size());
        CHECK(a.final_soc == b.final_soc);
        CHECK(a.energy_lost_inverter_J == b.energy_lost_inverter_J);
    }

    SECTION("a tiny pack depletes with a timestamped error") {
        ReconfigurablePack small = pack;
        small.cell_capacity_Ah = 10.0;
        CHECK_THROWS_AS(
            simulate_mission(test::stock_mission(), small, motor, devices, ranges, cfg),
            InfeasibleError);
    }
}

TEST_CASE("reconfigured cruise beats a fixed 1 kV bus on switching loss") {
    const auto motor = test::stock_motor();
    const auto pack = test::stock_pack();
    const auto cfg = stock_sim_config();

    MissionProfile cruise_only;
    cruise_only.segments = {cruise_segment()};

    for (const double k_v : {1.1, 1.4, 2.0, 2.9}) {
        DeviceCatalog devices = test::stock_devices();
        for (auto& d : devices.devices) d.k_v = k_v;
        const auto ranges = wide_single_device_map();

        const auto cmp = compare_fixed_vs_reconfig(cruise_only, pack, motor, devices, ranges,
                                                   cfg, 1000.0);
        REQUIRE(cmp.segments.size() == 1);
        CAPTURE(k_v);
        CHECK(cmp.reconfig.energy_lost_inverter_J < cmp.fixed.energy_lost_inverter_J);
        // identical torque/speed: delivered energy must match exactly
        CHECK(cmp.reconfig.energy_delivered_J ==
              Catch::Approx(cmp.fixed.energy_delivered_J).epsilon(1e-12));
    }
}

TEST_CASE("comparison with identical plans is all zeros") {
    const auto motor = test::stock_motor();
    const auto pack = test::stock_pack();
    const auto devices = test::stock_devices();
    const auto ranges = standard_device_range_map(0.0, 1500.0);
    const auto cfg = stock_sim_config();
    const auto mission = test::stock_mission();

    const auto plan =
        fixed_bus_plan(mission, pack, motor, cfg.pwm, cfg.margin, 1000.0);
    const auto cmp = compare_plans(mission, pack, motor, devices, ranges, cfg, plan, plan);
    CHECK(cmp.energy_saved_J() == 0.0);
    for (const auto& seg : cmp.segments) CHECK(seg.delta_J() == 0.0);
    CHECK(cmp.reconfig.final_soc == cmp.fixed.final_soc);
}

TEST_CASE("cruise-dominated mission saves mostly in cruise") {
    const auto motor = test::stock_motor();
    const auto pack = test::stock_pack();
    const auto devices = test::stock_devices();
    const auto cfg = stock_sim_config();
    const auto ranges = wide_single_device_map();

    const auto cmp = compare_fixed_vs_reconfig(test::stock_mission(), pack, motor, devices,
                                               ranges, cfg, 1000.0);
    double cruise_delta = 0.0;
    double total_delta = 0.0;
    for (const auto& seg : cmp.segments) {
        total_delta += seg.delta_J();
        if (seg.phase == FlightPhase::cruise) cruise_delta += seg.delta_J();
    }
    CHECK(total_delta > 0.0);
    CHECK(cruise_delta / total_delta > 0.5);
}

TEST_CASE("mission profile validation") {
    MissionProfile empty;
    CHECK_THROWS_AS(empty.validate(), ValidationError);

    MissionProfile odd;
    odd.segments = {cruise_segment()};
    const auto warnings = odd.validate();
    CHECK(warnings.size() == 2);  // no takeoff start, no landing end

    CHECK(test::stock_mission().validate().empty());

    MissionProfile bad;
    bad.segments = {{FlightPhase::takeoff, 0.0, 10.0, 10.0}};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("pack validation") {
    auto pack = test::stock_pack();
    CHECK_NOTHROW(pack.validate());
    CHECK(pack.ocv_at(1.0) == Catch::Approx(4.1));
    CHECK(pack.ocv_at(0.0) == Catch::Approx(3.5));

    pack.ocv_full_V = 3.0;  // below ocv_empty
    CHECK_THROWS_AS(pack.validate(), ValidationError);

    pack = test::stock_pack();
    pack.soc = 1.5;
    CHECK_THROWS_AS(pack.validate(), ValidationError);
}
