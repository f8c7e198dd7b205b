#include <cmath>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "lasernoise/device.hpp"
#include "lasernoise/errors.hpp"
#include "lasernoise/noise_threshold.hpp"
#include "lasernoise/steady_state.hpp"
#include "lasernoise/sweeps.hpp"

using namespace lasernoise;

namespace {

double cell(const SweepTable& table, std::size_t row, const std::string& column) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (table.columns[c] == column) {
            return std::get<double>(table.rows[row][c]);
        }
    }
    FAIL("no column " + column);
    return 0.0;
}

}  // namespace

TEST_CASE("grids hit both endpoints exactly", "[sweeps]") {
    const std::vector<double> lin = make_grid({1.0, 3.0, 5, GridSpacing::Linear});
    REQUIRE(lin.size() == 5);
    CHECK(lin.front() == 1.0);
    CHECK(lin.back() == 3.0);
    CHECK_THAT(lin[2], Catch::Matchers::WithinRel(2.0, 1e-13));

    const std::vector<double> log = make_grid({1.0, 100.0, 3, GridSpacing::Log});
    REQUIRE(log.size() == 3);
    CHECK(log.front() == 1.0);
    CHECK(log.back() == 100.0);
    CHECK_THAT(log[1], Catch::Matchers::WithinRel(10.0, 1e-12));

    CHECK_THROWS_AS(make_grid({3.0, 1.0, 5, GridSpacing::Linear}), InvalidParameter);
    CHECK_THROWS_AS(make_grid({1.0, 3.0, 1, GridSpacing::Linear}), InvalidParameter);
    CHECK_THROWS_AS(make_grid({0.0, 3.0, 5, GridSpacing::Log}), InvalidParameter);
}

TEST_CASE("light-current sweep matches pointwise evaluation", "[sweeps]") {
    const DeviceParams p = reference_device();
    const double j_th = threshold_current(p);
    SweepSpec spec;
    spec.variable = SweepVariable::PumpRate;
    spec.grid = {0.5 * j_th, 2.0 * j_th, 41, GridSpacing::Log};
    spec.device = p;
    const SweepTable table = sweep_light_current(spec);
    REQUIRE(table.rows.size() == 41);
    REQUIRE(table.columns == std::vector<std::string>{"j", "n_bar", "N_bar"});
    CHECK(table.errors.empty());

    CHECK_THAT(cell(table, 0, "n_bar"),
               Catch::Matchers::WithinRel(stationary_photon_number(p, 0.5 * j_th), 1e-13));
    CHECK_THAT(cell(table, 40, "n_bar"),
               Catch::Matchers::WithinRel(stationary_photon_number(p, 2.0 * j_th), 1e-13));

    // the output jumps by orders of magnitude across threshold
    CHECK(cell(table, 40, "n_bar") / cell(table, 0, "n_bar") > 100.0);

    bool has_jth = false;
    for (const auto& [key, value] : table.metadata) {
        if (key == "j_th") {
            has_jth = true;
        }
    }
    CHECK(has_jth);
}

TEST_CASE("column projection selects and validates names", "[sweeps]") {
    const DeviceParams p = reference_device();
    const double j_th = threshold_current(p);
    SweepSpec spec;
    spec.variable = SweepVariable::PumpRate;
    spec.grid = {0.9 * j_th, 1.1 * j_th, 3, GridSpacing::Linear};
    spec.device = p;
    spec.columns = {"n_bar", "j"};
    const SweepTable table = sweep_light_current(spec);
    REQUIRE(table.columns == std::vector<std::string>{"n_bar", "j"});
    REQUIRE(table.rows.at(0).size() == 2);

    spec.columns = {"wavelength"};
    CHECK_THROWS_AS(sweep_light_current(spec), InvalidParameter);

    spec.columns.clear();
    spec.variable = SweepVariable::Beta;
    CHECK_THROWS_AS(sweep_light_current(spec), InvalidParameter);
}

TEST_CASE("noise sweep refuses grids below the transparency pump", "[sweeps]") {
    const DeviceParams p = reference_device();
    SweepSpec spec;
    spec.variable = SweepVariable::PumpRate;
    spec.grid = {1e17, 1e18, 10, GridSpacing::Log};  // transparency is at 3.33e17
    spec.device = p;
    CHECK_THROWS_AS(sweep_noise_vs_current(spec), InvalidParameter);

    spec.variable = SweepVariable::PhotonNumber;
    spec.grid = {0.1, 1e4, 10, GridSpacing::Log};  // transparency is at 1.5 photons
    CHECK_THROWS_AS(sweep_noise_vs_photon(spec), InvalidParameter);
}

TEST_CASE("the ratio crossing in a noise sweep brackets the half-thermal pump", "[sweeps]") {
    const DeviceParams p = reference_device();
    const double j_th = threshold_current(p);
    SweepSpec spec;
    spec.variable = SweepVariable::PumpRate;
    spec.grid = {0.99 * j_th, 1.2 * j_th, 200, GridSpacing::Linear};
    spec.device = p;
    const SweepTable table = sweep_noise_vs_current(spec);
    REQUIRE(table.errors.empty());

    const double j_half = noise_threshold_current(p).j_half;
    bool bracketed = false;
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        const double above = cell(table, i, "ratio") - 0.5;
        const double below = cell(table, i + 1, "ratio") - 0.5;
        if (above >= 0.0 && below < 0.0) {
            CHECK(cell(table, i, "j") <= j_half);
            CHECK(cell(table, i + 1, "j") >= j_half);
            bracketed = true;
            break;
        }
    }
    CHECK(bracketed);
}

TEST_CASE("overview curve across beta: photon numbers", "[sweeps]") {
    const DeviceParams base = reference_device();
    SweepSpec spec;
    spec.variable = SweepVariable::Beta;
    spec.grid = {1e-11, 1e-1, 21, GridSpacing::Log};
    spec.device = base;
    const SweepTable table = figure1_data(spec);
    REQUIRE(table.rows.size() == 21);
    CHECK(table.errors.empty());
    REQUIRE(table.columns ==
            std::vector<std::string>{"inv_beta", "n_half_numeric", "n_half_piecewise", "n_th"});

    CHECK_THAT(cell(table, 0, "inv_beta"), Catch::Matchers::WithinRel(1e11, 1e-12));
    CHECK_THAT(cell(table, 0, "n_half_numeric"),
               Catch::Matchers::WithinRel(
                   noise_threshold_photon(with_beta_material(base, 1e-11)), 1e-12));
    CHECK_THAT(cell(table, 0, "n_half_piecewise"),
               Catch::Matchers::WithinRel(piecewise_noise_threshold(1e-11), 1e-12));
    CHECK_THAT(cell(table, 20, "n_half_numeric"),
               Catch::Matchers::WithinRel(
                   noise_threshold_photon(with_beta_material(base, 1e-1)), 1e-12));
    // covariation keeps n_T fixed, so the threshold column is sqrt((n_T+1/2)/(2 beta))
    CHECK_THAT(cell(table, 0, "n_th"),
               Catch::Matchers::WithinRel(std::sqrt(2.0 / (2.0 * 1e-11)), 1e-12));
}

TEST_CASE("overview curve across beta: pump margins", "[sweeps]") {
    const DeviceParams base = reference_device();
    SweepSpec spec;
    spec.variable = SweepVariable::Beta;
    spec.grid = {1e-11, 1e-1, 21, GridSpacing::Log};
    spec.device = base;
    const SweepTable table = figure2_data(spec);
    REQUIRE(table.rows.size() == 21);
    CHECK(table.errors.empty());
    REQUIRE(table.columns ==
            std::vector<std::string>{"inv_beta", "margin_numeric", "margin_piecewise"});
    CHECK_THAT(cell(table, 20, "margin_numeric"),
               Catch::Matchers::WithinRel(
                   noise_threshold_current(with_beta_material(base, 1e-1)).margin, 1e-12));
    CHECK_THAT(cell(table, 20, "margin_piecewise"),
               Catch::Matchers::WithinRel(piecewise_current_margin(1e-1), 1e-12));
}

TEST_CASE("beta grids outside the audited range are refused", "[sweeps]") {
    const DeviceParams base = reference_device();
    SweepSpec spec;
    spec.variable = SweepVariable::Beta;
    spec.device = base;
    spec.grid = {1e-13, 1e-1, 10, GridSpacing::Log};
    CHECK_THROWS_AS(figure1_data(spec), InvalidParameter);
    spec.grid = {1e-11, 0.5, 10, GridSpacing::Log};
    CHECK_THROWS_AS(figure2_data(spec), InvalidParameter);
}

TEST_CASE("rows that fail are reported, not silently dropped", "[sweeps]") {
    // without covariation a small beta starves the cavity (n_T falls below
    // one half) and those grid points cannot lase
    const DeviceParams base = reference_device();
    SweepSpec spec;
    spec.variable = SweepVariable::Beta;
    spec.grid = {1e-7, 1e-5, 5, GridSpacing::Log};
    spec.device = base;
    spec.material_covariation = false;
    const SweepTable table = figure1_data(spec);
    CHECK(table.rows.size() == 1);
    REQUIRE(table.errors.size() == 4);
    CHECK(table.errors[0].code == "non_lasing_device");
    CHECK(table.errors[0].grid_index == 0);
    CHECK_THAT(table.errors[0].x, Catch::Matchers::WithinRel(1e-7, 1e-12));
}
