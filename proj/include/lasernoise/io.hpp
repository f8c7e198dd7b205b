#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "lasernoise/detail/format.hpp"
#include "lasernoise/device.hpp"
#include "lasernoise/errors.hpp"
#include "lasernoise/sweeps.hpp"
#include "lasernoise/trajectory_stats.hpp"

namespace lasernoise {

[[nodiscard]] inline nlohmann::json device_to_json(const DeviceParams& p) {
    return nlohmann::json{
        {"beta", p.beta},
        {"N_T", p.N_T},
        {"tau_sp_s", p.tau_sp},
        {"tau_cav_s", p.tau_cav},
    };
}

namespace detail {

[[nodiscard]] inline bool close_rel(double a, double b, double tol) noexcept {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace detail

// Accepts the canonical four parameters, or the material form (mode-volume
// and density products with a requested transparency photon number), or
// both; providing both inconsistently (relative mismatch above 1e-6 in any
// derived parameter) is an error rather than a silent preference.
[[nodiscard]] inline DeviceParams device_from_json(const nlohmann::json& j) {
    try {
        const bool canonical = j.contains("N_T") && j.contains("tau_cav_s");
        const bool material = j.contains("material");
        if (!canonical && !material) {
            throw InvalidParameter(
                "device JSON needs {beta, N_T, tau_sp_s, tau_cav_s} or "
                "{beta, tau_sp_s, material: {betaV_cm3, NT_per_cm3, n_T}}");
        }
        const double beta = j.at("beta").get<double>();
        const double tau_sp = j.at("tau_sp_s").get<double>();

        DeviceParams from_canonical;
        if (canonical) {
            from_canonical =
                make_device(beta, j.at("N_T").get<double>(), tau_sp, j.at("tau_cav_s").get<double>());
        }
        DeviceParams from_material;
        if (material) {
            const nlohmann::json& m = j.at("material");
            from_material = make_device_material(beta, m.at("betaV_cm3").get<double>(),
                                                 m.at("NT_per_cm3").get<double>(), tau_sp,
                                                 m.at("n_T").get<double>());
        }
        if (canonical && material) {
            if (!detail::close_rel(from_canonical.N_T, from_material.N_T, 1e-6) ||
                !detail::close_rel(from_canonical.tau_cav, from_material.tau_cav, 1e-6)) {
                throw InvalidParameter(
                    "device JSON provides both canonical and material blocks and they disagree: "
                    "canonical (N_T = " +
                    detail::format_shortest(from_canonical.N_T) +
                    ", tau_cav = " + detail::format_shortest(from_canonical.tau_cav) +
                    " s) vs material (N_T = " + detail::format_shortest(from_material.N_T) +
                    ", tau_cav = " + detail::format_shortest(from_material.tau_cav) + " s)");
            }
            return from_canonical;
        }
        return canonical ? from_canonical : from_material;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("device JSON: ") + e.what());
    }
}

[[nodiscard]] inline DeviceParams load_device_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read device file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("invalid JSON in '" + path + "': " + e.what());
    }
    return device_from_json(j);
}

struct EmitOptions {
    bool metadata = true;
};

namespace detail {

[[nodiscard]] inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string quoted = "\"";
    for (const char c : field) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

[[nodiscard]] inline std::string cell_to_string(const Cell& cell) {
    if (const double* num = std::get_if<double>(&cell)) {
        return format_shortest(*num);
    }
    return csv_escape(std::get<std::string>(cell));
}

}  // namespace detail

// CSV with `#`-prefixed metadata lines, then the header, then the rows.
// Numbers are shortest-round-trip decimals. Rows that failed appear as
// metadata comments, never as data.
inline void write_csv(std::ostream& os, const SweepTable& table, const EmitOptions& options = {}) {
    if (options.metadata) {
        for (const auto& [key, value] : table.metadata) {
            os << "# " << key << ": " << value << "\n";
        }
        for (const SweepTable::RowError& err : table.errors) {
            os << "# row_error: index=" << err.grid_index << " x=" << detail::format_shortest(err.x)
               << " code=" << err.code << " message=" << err.message << "\n";
        }
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i == 0 ? "" : ",") << detail::csv_escape(table.columns[i]);
    }
    os << "\n";
    for (const std::vector<Cell>& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i == 0 ? "" : ",") << detail::cell_to_string(row[i]);
        }
        os << "\n";
    }
}

// JSON alternative: metadata envelope plus an array of row objects.
[[nodiscard]] inline nlohmann::json table_to_json(const SweepTable& table,
                                                  const EmitOptions& options = {}) {
    nlohmann::json out;
    if (options.metadata) {
        nlohmann::json meta = nlohmann::json::object();
        for (const auto& [key, value] : table.metadata) {
            meta[key] = value;
        }
        out["metadata"] = meta;
    }
    out["columns"] = table.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const std::vector<Cell>& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            if (const double* num = std::get_if<double>(&row[i])) {
                obj[table.columns[i]] = *num;
            } else {
                obj[table.columns[i]] = std::get<std::string>(row[i]);
            }
        }
        rows.push_back(std::move(obj));
    }
    out["rows"] = rows;
    nlohmann::json errs = nlohmann::json::array();
    for (const SweepTable::RowError& err : table.errors) {
        errs.push_back({{"grid_index", err.grid_index},
                        {"x", err.x},
                        {"code", err.code},
                        {"message", err.message}});
    }
    out["errors"] = errs;
    return out;
}

// Statistics report for one simulated channel.
[[nodiscard]] inline nlohmann::json stats_to_json(const std::string& channel,
                                                  const TrajectoryStats& stats, std::uint64_t seed,
                                                  nlohmann::json config) {
    return nlohmann::json{
        {"channel", channel},
        {"mean", stats.mean},
        {"variance", stats.variance},
        {"std_error", stats.std_error},
        {"variance_std_error", stats.variance_std_error},
        {"tau_decorr_s", stats.decorrelation_time},
        {"samples", stats.sample_count},
        {"total_weight_s", stats.total_weight},
        {"seed", seed},
        {"config", std::move(config)},
    };
}

// Machine-readable error report (the CLI prints this on standard error).
[[nodiscard]] inline nlohmann::json error_to_json(const Error& e) {
    return nlohmann::json{{"error", e.code()}, {"message", e.what()}};
}

}  // namespace lasernoise
