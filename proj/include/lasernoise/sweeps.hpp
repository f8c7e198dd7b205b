#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lasernoise/detail/format.hpp"
#include "lasernoise/device.hpp"
#include "lasernoise/errors.hpp"
#include "lasernoise/fluctuations.hpp"
#include "lasernoise/noise_threshold.hpp"
#include "lasernoise/steady_state.hpp"

namespace lasernoise {

enum class GridSpacing {
    Linear,
    Log,
};

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 0;
    GridSpacing spacing = GridSpacing::Log;
};

[[nodiscard]] inline std::vector<double> make_grid(const GridSpec& grid) {
    if (!(grid.min < grid.max)) {
        throw InvalidParameter("grid needs min < max");
    }
    if (grid.points < 2) {
        throw InvalidParameter("grid needs at least 2 points");
    }
    if (grid.spacing == GridSpacing::Log && !(grid.min > 0.0)) {
        throw InvalidParameter("log spacing needs min > 0");
    }
    std::vector<double> xs(grid.points);
    const auto last = static_cast<double>(grid.points - 1);
    if (grid.spacing == GridSpacing::Linear) {
        const double step = (grid.max - grid.min) / last;
        for (std::size_t i = 0; i < grid.points; ++i) {
            xs[i] = grid.min + step * static_cast<double>(i);
        }
    } else {
        const double step = std::log(grid.max / grid.min) / last;
        for (std::size_t i = 0; i < grid.points; ++i) {
            xs[i] = grid.min * std::exp(step * static_cast<double>(i));
        }
    }
    xs.back() = grid.max;  // endpoints exact
    return xs;
}

enum class SweepVariable {
    PumpRate,
    Beta,
    PhotonNumber,
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::PumpRate;
    GridSpec grid{};
    DeviceParams device{};
    // Beta sweeps keep the gain material fixed (beta*N_T and n_t constant);
    // switch off to rescale nothing and sweep beta in isolation.
    bool material_covariation = true;
    // Empty = the operation's natural column set. Unknown names are errors.
    std::vector<std::string> columns;
};

using Cell = std::variant<double, std::string>;

// Column-oriented result table. Rows that failed are recorded in `errors`
// (with the grid point that failed and why) and omitted from `rows`; a
// sweep is a reporting tool, not a transaction.
struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    struct RowError {
        std::size_t grid_index = 0;
        double x = 0.0;
        std::string code;
        std::string message;
    };
    std::vector<RowError> errors;
};

namespace detail {

using NamedRow = std::vector<std::pair<std::string, Cell>>;

// Projects natural rows onto the requested column list, erroring on any
// name the operation does not produce. No silent omission either way: an
// empty request means every natural column, in natural order.
inline void project_columns(const SweepSpec& spec, const std::vector<std::string>& natural,
                            SweepTable& table) {
    if (spec.columns.empty()) {
        table.columns = natural;
        return;
    }
    for (const std::string& want : spec.columns) {
        bool known = false;
        for (const std::string& have : natural) {
            if (want == have) {
                known = true;
                break;
            }
        }
        if (!known) {
            std::string available;
            for (const std::string& have : natural) {
                available += available.empty() ? have : ", " + have;
            }
            throw InvalidParameter("unknown column '" + want + "' (available: " + available + ")");
        }
    }
    table.columns = spec.columns;
}

inline void append_row(SweepTable& table, const NamedRow& named) {
    std::vector<Cell> row;
    row.reserve(table.columns.size());
    for (const std::string& col : table.columns) {
        for (const auto& [name, value] : named) {
            if (name == col) {
                row.push_back(value);
                break;
            }
        }
    }
    table.rows.push_back(std::move(row));
}

[[nodiscard]] inline DeviceParams device_for_beta(const SweepSpec& spec, double beta) {
    if (spec.material_covariation) {
        return with_beta_material(spec.device, beta);
    }
    return make_device(beta, spec.device.N_T, spec.device.tau_sp, spec.device.tau_cav);
}

}  // namespace detail

// Light-current characteristic along a pump grid.
[[nodiscard]] inline SweepTable sweep_light_current(const SweepSpec& spec) {
    if (spec.variable != SweepVariable::PumpRate) {
        throw InvalidParameter("sweep_light_current sweeps the pump rate");
    }
    const std::vector<double> grid = make_grid(spec.grid);
    SweepTable table;
    detail::project_columns(spec, {"j", "n_bar", "N_bar"}, table);
    table.metadata.emplace_back("swept", "j");
    table.metadata.emplace_back("j_th", detail::format_shortest(threshold_current(spec.device)));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            const OperatingPoint op = steady_state(spec.device, grid[i]);
            detail::append_row(table, {{"j", op.j}, {"n_bar", op.n_bar}, {"N_bar", op.N_bar}});
        } catch (const Error& e) {
            table.errors.push_back({i, grid[i], e.code(), e.what()});
        }
    }
    return table;
}

// Variance, ratio, and Fano factor along a pump grid above transparency.
[[nodiscard]] inline SweepTable sweep_noise_vs_current(const SweepSpec& spec) {
    if (spec.variable != SweepVariable::PumpRate) {
        throw InvalidParameter("sweep_noise_vs_current sweeps the pump rate");
    }
    const double j_transparency = spec.device.N_T / spec.device.tau_sp;
    if (spec.grid.min < j_transparency * (1.0 - 1e-12)) {
        throw InvalidParameter("noise sweep grid must start at or above the transparency pump " +
                               detail::format_shortest(j_transparency) + " carriers/s");
    }
    const std::vector<double> grid = make_grid(spec.grid);
    SweepTable table;
    detail::project_columns(spec, {"j", "n_bar", "N_bar", "variance", "ratio", "fano"}, table);
    table.metadata.emplace_back("swept", "j");
    table.metadata.emplace_back("j_th", detail::format_shortest(threshold_current(spec.device)));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            const OperatingPoint op = steady_state(spec.device, grid[i]);
            const NoiseResult noise = photon_variance_closed_form(spec.device, op.n_bar);
            detail::append_row(table, {{"j", op.j},
                                       {"n_bar", op.n_bar},
                                       {"N_bar", op.N_bar},
                                       {"variance", noise.variance},
                                       {"ratio", noise.ratio},
                                       {"fano", noise.fano}});
        } catch (const Error& e) {
            table.errors.push_back({i, grid[i], e.code(), e.what()});
        }
    }
    return table;
}

// Variance, ratio, and Fano factor directly against the photon number.
[[nodiscard]] inline SweepTable sweep_noise_vs_photon(const SweepSpec& spec) {
    if (spec.variable != SweepVariable::PhotonNumber) {
        throw InvalidParameter("sweep_noise_vs_photon sweeps the photon number");
    }
    if (spec.grid.min < spec.device.n_t * (1.0 - 1e-12)) {
        throw InvalidParameter("photon grid must start at or above the transparency photon number " +
                               detail::format_shortest(spec.device.n_t));
    }
    const std::vector<double> grid = make_grid(spec.grid);
    SweepTable table;
    detail::project_columns(spec, {"n_bar", "j", "variance", "ratio", "fano"}, table);
    table.metadata.emplace_back("swept", "n_bar");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            const NoiseResult noise = photon_variance_closed_form(spec.device, grid[i]);
            detail::append_row(table, {{"n_bar", grid[i]},
                                       {"j", current_for_photon_number(spec.device, grid[i])},
                                       {"variance", noise.variance},
                                       {"ratio", noise.ratio},
                                       {"fano", noise.fano}});
        } catch (const Error& e) {
            table.errors.push_back({i, grid[i], e.code(), e.what()});
        }
    }
    return table;
}

namespace detail {

inline void check_beta_grid(const GridSpec& grid) {
    if (!(grid.min > 1e-12) || !(grid.max <= 1e-1)) {
        throw InvalidParameter("beta grid must lie within (1e-12, 1e-1]");
    }
}

}  // namespace detail

// Numeric noise threshold across beta with the piecewise summary and the
// threshold photon number (the figure's dotted line; its small-beta formula
// is emitted verbatim even at large beta, where it degrades).
[[nodiscard]] inline SweepTable figure1_data(const SweepSpec& spec) {
    if (spec.variable != SweepVariable::Beta) {
        throw InvalidParameter("figure1_data sweeps beta");
    }
    detail::check_beta_grid(spec.grid);
    const std::vector<double> grid = make_grid(spec.grid);
    SweepTable table;
    detail::project_columns(spec, {"inv_beta", "n_half_numeric", "n_half_piecewise", "n_th"}, table);
    table.metadata.emplace_back("swept", "beta");
    table.metadata.emplace_back("material_covariation", spec.material_covariation ? "on" : "off");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            const DeviceParams dev = detail::device_for_beta(spec, grid[i]);
            detail::append_row(table, {{"inv_beta", 1.0 / grid[i]},
                                       {"n_half_numeric", noise_threshold_photon(dev)},
                                       {"n_half_piecewise", piecewise_noise_threshold(grid[i])},
                                       {"n_th", threshold_photon_number(dev)}});
        } catch (const Error& e) {
            table.errors.push_back({i, grid[i], e.code(), e.what()});
        }
    }
    return table;
}

// Numeric pump margin of the noise threshold across beta, with the
// piecewise summary.
[[nodiscard]] inline SweepTable figure2_data(const SweepSpec& spec) {
    if (spec.variable != SweepVariable::Beta) {
        throw InvalidParameter("figure2_data sweeps beta");
    }
    detail::check_beta_grid(spec.grid);
    const std::vector<double> grid = make_grid(spec.grid);
    SweepTable table;
    detail::project_columns(spec, {"inv_beta", "margin_numeric", "margin_piecewise"}, table);
    table.metadata.emplace_back("swept", "beta");
    table.metadata.emplace_back("material_covariation", spec.material_covariation ? "on" : "off");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            const DeviceParams dev = detail::device_for_beta(spec, grid[i]);
            detail::append_row(table, {{"inv_beta", 1.0 / grid[i]},
                                       {"margin_numeric", noise_threshold_current(dev).margin},
                                       {"margin_piecewise", piecewise_current_margin(grid[i])}});
        } catch (const Error& e) {
            table.errors.push_back({i, grid[i], e.code(), e.what()});
        }
    }
    return table;
}

}  // namespace lasernoise
