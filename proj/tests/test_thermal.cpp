#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "evopt/thermal.hpp"

using namespace evopt;

namespace {

// Table of the fixture inverter runs: v_dc, m, t_case, and the published
// extraction results they must reproduce.
struct RunRow {
    double v_dc, m, t_case;
    double p_loss_tot, p_sw_tot, p_sw_mos, p_cond_mos;
};

const std::vector<RunRow> kRuns = {
    {200, 0.950, 29.0, 2.053, 1.253, 0.209, 0.133},
    {250, 0.760, 33.5, 3.372, 2.573, 0.429, 0.133},
    {300, 0.633, 36.4, 4.223, 3.423, 0.571, 0.133},
    {350, 0.543, 39.0, 4.986, 4.186, 0.698, 0.133},
    {400, 0.475, 41.6, 5.748, 4.948, 0.825, 0.133},
    {450, 0.422, 45.2, 6.804, 6.004, 1.001, 0.133},
    {500, 0.380, 48.2, 7.683, 6.884, 1.147, 0.133},
};

constexpr double kAmbient = 22.0;
constexpr double kRca = 3.41;
constexpr double kModuleRdson = 0.034;

ConductionCalibrationTest case1() {
    return {7.79, 3.90, 3.90, kModuleRdson, 0.49, 32.4, kAmbient};
}
ConductionCalibrationTest case2() {
    return {9.70, 4.85, 4.85, kModuleRdson, 0.49, 38.6, kAmbient};
}

/// Motor current amplitude that reproduces the constant 0.800 W conduction
/// total: 6*(i_m^2/4)*r = 0.8.
double fixture_i_m() { return std::sqrt(0.8 * 4.0 / (6.0 * kModuleRdson)); }

ThermalMeasurement measurement(const RunRow& row) {
    return {row.v_dc, row.m, row.t_case, kAmbient, 10000.0, fixture_i_m(), 0.85};
}

SicDevice module_device() {
    SicDevice d;
    d.part_id = "CCS050M12CM2";
    d.v_dss_V = 1200.0;
    d.i_d_A = 50.0;
    d.r_ds_on_Ohm = kModuleRdson;
    d.e_on_off_J = 0.0;  // unknown; the fit recovers f_sw*(E_on+E_off)
    d.v_ref_V = 600.0;
    d.k_v = 1.4;
    return d;
}

}  // namespace

TEST_CASE("dc calibration conduction loss") {
    CHECK(conduction_loss_dc_test(case1()) == Catch::Approx(3.09).margin(0.01));
    CHECK(conduction_loss_dc_test(case2()) == Catch::Approx(4.80).margin(0.01));

    auto zero = case1();
    zero.i_a_rms_A = zero.i_b_rms_A = zero.i_c_rms_A = 0.0;
    CHECK(conduction_loss_dc_test(zero) == 0.0);
}

TEST_CASE("case-to-ambient resistance estimation") {
    const std::vector<ConductionCalibrationTest> both{case1(), case2()};
    CHECK(rca_from_test(case1()) == Catch::Approx(3.36).margin(0.01));
    CHECK(rca_from_test(case2()) == Catch::Approx(3.46).margin(0.01));
    CHECK(estimate_rca(both) == Catch::Approx(3.41).margin(0.01));

    SECTION("zero-loss test reports its index") {
        auto zero = case1();
        zero.i_a_rms_A = zero.i_b_rms_A = zero.i_c_rms_A = 0.0;
        // validation also rejects it earlier via t_case > t_amb with no loss;
        // make it reach the division check
        std::vector<ConductionCalibrationTest> tests{case1(), zero};
        CHECK_THROWS_WITH(estimate_rca(tests), Catch::Matchers::ContainsSubstring("1"));
    }

    SECTION("synthesized tests recover a known r_ca exactly") {
        const double r_true = 2.75;
        std::vector<ConductionCalibrationTest> tests;
        for (double i = 3.0; i <= 12.0; i += 1.5) {
            ConductionCalibrationTest t;
            t.i_a_rms_A = i;
            t.i_b_rms_A = t.i_c_rms_A = i / 2.0;
            t.r_ds_on_Ohm = kModuleRdson;
            t.r_jc_C_per_W = 0.49;
            t.t_amb_C = 22.0;
            const double p = (i * i + 2.0 * (i / 2.0) * (i / 2.0)) * kModuleRdson;
            t.t_case_C = 22.0 + r_true * p;
            tests.push_back(t);
        }
        CHECK(estimate_rca(tests) == Catch::Approx(r_true).epsilon(1e-12));
    }

    SECTION("and within bounds under measurement noise") {
        const double r_true = 3.2;
        std::mt19937 rng(42);
        std::normal_distribution<double> noise(0.0, 0.05);
        std::vector<ConductionCalibrationTest> tests;
        for (int k = 0; k < 50; ++k) {
            ConductionCalibrationTest t;
            t.i_a_rms_A = 5.0 + 0.1 * k;
            t.i_b_rms_A = t.i_c_rms_A = t.i_a_rms_A / 2.0;
            t.r_ds_on_Ohm = kModuleRdson;
            t.r_jc_C_per_W = 0.49;
            t.t_amb_C = 22.0;
            const double i = t.i_a_rms_A;
            const double p = (i * i + 2.0 * (i / 2.0) * (i / 2.0)) * kModuleRdson;
            t.t_case_C = 22.0 + r_true * p + noise(rng);
            tests.push_back(t);
        }
        CHECK(estimate_rca(tests) == Catch::Approx(r_true).margin(0.05));
    }
}

TEST_CASE("total loss from temperature") {
    const ThermalModel model{kRca, 0.49, 6};
    CHECK(total_loss_from_temperature(measurement(kRuns[0]), model) ==
          Catch::Approx(2.053).margin(1e-3));
    CHECK(total_loss_from_temperature(measurement(kRuns[6]), model) ==
          Catch::Approx(7.683).margin(1e-3));

    SECTION("no temperature rise means no loss") {
        auto meas = measurement(kRuns[0]);
        meas.t_case_C = meas.t_amb_C;
        CHECK(total_loss_from_temperature(meas, model) == 0.0);
    }

    SECTION("linear in the temperature rise") {
        auto meas = measurement(kRuns[0]);
        const double base = total_loss_from_temperature(meas, model);
        meas.t_case_C = meas.t_amb_C + 2.0 * (kRuns[0].t_case - kAmbient);
        CHECK(total_loss_from_temperature(meas, model) ==
              Catch::Approx(2.0 * base).epsilon(1e-12));
    }

    SECTION("t_case below ambient is invalid") {
        auto meas = measurement(kRuns[0]);
        meas.t_case_C = meas.t_amb_C - 1.0;
        CHECK_THROWS_AS(total_loss_from_temperature(meas, model), ValidationError);
    }
}

TEST_CASE("loss separation") {
    const auto split = separate_losses(5.748, 0.800, 6);
    CHECK(split.p_sw_tot_W == Catch::Approx(4.948).margin(1e-9));
    CHECK(split.p_sw_per_device_W == Catch::Approx(0.825).margin(1e-3));
    CHECK(split.p_cond_per_device_W == Catch::Approx(0.133).margin(1e-3));

    SECTION("equal totals leave no switching loss") {
        CHECK(separate_losses(0.8, 0.8, 6).p_sw_tot_W == 0.0);
    }
    SECTION("re-summing is exact") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(0.0, 10.0);
        for (int i = 0; i < 100; ++i) {
            const double cond = u(rng);
            const double total = cond + u(rng);
            const auto s = separate_losses(total, cond, 6);
            REQUIRE(s.p_sw_tot_W + 6.0 * s.p_cond_per_device_W ==
                    Catch::Approx(total).epsilon(1e-12));
        }
    }
    SECTION("conduction above total signals bad calibration") {
        CHECK_THROWS_AS(separate_losses(0.5, 0.8, 6), DomainError);
    }
}

TEST_CASE("full pipeline reproduces the published extraction table") {
    const ThermalModel model{kRca, 0.49, 6};
    std::vector<ThermalMeasurement> meas;
    for (const auto& row : kRuns) meas.push_back(measurement(row));

    const auto result = extract_losses(meas, model, module_device());
    REQUIRE(result.rows.size() == kRuns.size());
    for (std::size_t i = 0; i < kRuns.size(); ++i) {
        CAPTURE(kRuns[i].v_dc);
        CHECK(result.rows[i].p_loss_tot_W == Catch::Approx(kRuns[i].p_loss_tot).margin(0.01));
        CHECK(result.rows[i].p_cond_tot_W == Catch::Approx(0.800).margin(0.01));
        CHECK(result.rows[i].p_sw_tot_W == Catch::Approx(kRuns[i].p_sw_tot).margin(0.01));
        CHECK(result.rows[i].p_sw_per_device_W ==
              Catch::Approx(kRuns[i].p_sw_mos).margin(0.01));
        CHECK(result.rows[i].p_cond_per_device_W ==
              Catch::Approx(kRuns[i].p_cond_mos).margin(0.01));
        CHECK(result.rows[i].t_junction_C > kRuns[i].t_case);
    }
}

TEST_CASE("k_v regression") {
    SECTION("synthetic power-law data round-trips exactly") {
        const auto dev = module_device();
        const double k_true = 1.4;
        const double scale_true = 10000.0 * 450e-6;  // f_sw * (E_on + E_off)
        std::vector<ThermalMeasurement> meas;
        std::vector<double> losses;
        for (double v = 200.0; v <= 600.0; v += 50.0) {
            ThermalMeasurement m{v, 190.0 / v, 30.0, 22.0, 10000.0, 4.0, 0.9};
            const double i_avg = m.m * m.i_m_A * m.cos_phi / 4.0;
            meas.push_back(m);
            losses.push_back(scale_true * std::pow(v / dev.v_ref_V, k_true) * i_avg);
        }
        const auto fit = fit_kv(meas, losses, dev);
        CHECK(fit.k_v == Catch::Approx(k_true).margin(1e-9));
        CHECK(fit.fsw_energy_scale == Catch::Approx(scale_true).epsilon(1e-9));
        CHECK(fit.residual_rms_log < 1e-12);
    }

    SECTION("two-point closed form on the 200 V and 500 V rows") {
        // slope between the transformed endpoints, computed independently
        const double i_avg_200 = 0.950 * fixture_i_m() * 0.85 / 4.0;
        const double i_avg_500 = 0.380 * fixture_i_m() * 0.85 / 4.0;
        const double slope = std::log((1.147 / i_avg_500) / (0.209 / i_avg_200)) /
                             std::log(500.0 / 200.0);
        CHECK(slope == Catch::Approx(std::log(1.147 / 0.209) / std::log(2.5) + 1.0)
                           .epsilon(1e-12));
        CHECK(slope == Catch::Approx(2.858114).margin(1e-5));
    }

    SECTION("the published seven rows fit a finite exponent near 2.9") {
        const auto dev = module_device();
        const ThermalModel model{kRca, 0.49, 6};
        std::vector<ThermalMeasurement> meas;
        for (const auto& row : kRuns) meas.push_back(measurement(row));
        const auto result = extract_losses(meas, model, dev);
        CHECK(std::isfinite(result.fit.k_v));
        CHECK(result.fit.k_v == Catch::Approx(2.74).margin(0.15));
        for (std::size_t i = 0; i < meas.size(); ++i) {
            const double predicted = predict_sw_loss(result.fit, dev, meas[i]);
            REQUIRE(std::abs(predicted / result.rows[i].p_sw_per_device_W - 1.0) < 0.25);
        }
    }

    SECTION("the fitted model predicts the 300 V row within the residual band") {
        const auto dev = module_device();
        const ThermalModel model{kRca, 0.49, 6};
        std::vector<ThermalMeasurement> meas;
        for (const auto& row : kRuns) meas.push_back(measurement(row));
        const auto result = extract_losses(meas, model, dev);
        const double predicted = predict_sw_loss(result.fit, dev, meas[2]);
        // log-domain residual rms bounds the per-row ratio error
        CHECK(std::abs(std::log(predicted / 0.571)) <= 3.0 * result.fit.residual_rms_log);
    }

    SECTION("scale equivariance: scaling the losses shifts only the intercept") {
        const auto dev = module_device();
        std::vector<ThermalMeasurement> meas;
        std::vector<double> losses;
        for (const auto& row : kRuns) {
            meas.push_back(measurement(row));
            losses.push_back(row.p_sw_mos);
        }
        const auto base = fit_kv(meas, losses, dev);
        for (auto& l : losses) l *= 7.5;
        const auto scaled = fit_kv(meas, losses, dev);
        CHECK(scaled.k_v == Catch::Approx(base.k_v).margin(1e-12));
        CHECK(scaled.fsw_energy_scale ==
              Catch::Approx(7.5 * base.fsw_energy_scale).epsilon(1e-9));
    }

    SECTION("degenerate voltage spread is rejected") {
        const auto dev = module_device();
        std::vector<ThermalMeasurement> meas;
        std::vector<double> losses;
        for (int i = 0; i < 3; ++i) {
            meas.push_back({400.0 + i, 0.5, 30.0, 22.0, 10000.0, 4.0, 0.9});
            losses.push_back(1.0);
        }
        CHECK_THROWS_AS(fit_kv(meas, losses, dev), DomainError);
    }

    SECTION("fewer than three points is rejected") {
        const auto dev = module_device();
        std::vector<ThermalMeasurement> meas{measurement(kRuns[0]), measurement(kRuns[6])};
        std::vector<double> losses{kRuns[0].p_sw_mos, kRuns[6].p_sw_mos};
        CHECK_THROWS_AS(fit_kv(meas, losses, dev), DomainError);
    }
}
