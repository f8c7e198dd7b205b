// Command-line front end. Every analysis the library offers is exposed as a
// subcommand; scalar reports are JSON, sweeps can also be CSV. Exit codes:
// 0 success, 1 domain error (machine-readable JSON on stderr), 2 usage error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lasernoise/lasernoise.hpp"

namespace {

using lasernoise::DeviceParams;
using nlohmann::json;

// Usage mistakes that CLI11 cannot see (mutually exclusive groups spanning
// several flags); reported like parse errors with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DeviceCliOptions {
    std::string path;
    std::string preset_name;
    double beta = 0.0;
    double N_T = 0.0;
    double tau_sp = 0.0;
    double tau_cav = 0.0;
    int inline_count = 0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--device", path, "device parameter JSON file");
        cmd->add_option("--preset", preset_name,
                        "built-in device: default|reference|toy-a|toy-b")
            ->check(CLI::IsMember({"default", "reference", "toy-a", "toy-b"}));
        auto count_inline = [this](double& target) {
            return [this, &target](const CLI::results_t& vals) {
                target = std::stod(vals.at(0));
                ++inline_count;
                return true;
            };
        };
        cmd->add_option("--beta", count_inline(beta), "spontaneous-emission fraction (inline device)");
        cmd->add_option("--NT", count_inline(N_T), "saturable excitation pool (inline device)");
        cmd->add_option("--tau-sp", count_inline(tau_sp), "spontaneous lifetime in seconds (inline device)");
        cmd->add_option("--tau-cav", count_inline(tau_cav), "cavity lifetime in seconds (inline device)");
    }

    [[nodiscard]] DeviceParams resolve() const {
        const int sources = (path.empty() ? 0 : 1) + (preset_name.empty() ? 0 : 1) +
                            (inline_count > 0 ? 1 : 0);
        if (sources > 1) {
            throw UsageError("give exactly one device source: --device, --preset, or inline flags");
        }
        if (!path.empty()) {
            return lasernoise::load_device_file(path);
        }
        if (!preset_name.empty()) {
            return lasernoise::preset(preset_name);
        }
        if (inline_count > 0) {
            if (inline_count != 4) {
                throw UsageError("inline device needs all of --beta --NT --tau-sp --tau-cav");
            }
            return lasernoise::make_device(beta, N_T, tau_sp, tau_cav);
        }
        if (const char* env = std::getenv("LASERNOISE_DEVICE"); env != nullptr && *env != '\0') {
            return lasernoise::load_device_file(env);
        }
        return lasernoise::preset("default");
    }
};

struct PumpCliOptions {
    double j = 0.0;
    double current_mA = 0.0;
    bool has_j = false;
    bool has_mA = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--j", j, "pump rate in carriers per second")
            ->each([this](const std::string&) { has_j = true; });
        cmd->add_option("--current-mA", current_mA, "pump current in milliamperes")
            ->each([this](const std::string&) { has_mA = true; });
    }

    [[nodiscard]] bool provided() const { return has_j || has_mA; }

    [[nodiscard]] double resolve() const {
        if (has_j && has_mA) {
            throw UsageError("give the pump as --j or --current-mA, not both");
        }
        if (!has_j && !has_mA) {
            throw UsageError("a pump rate is required: --j or --current-mA");
        }
        return has_j ? j : current_mA * 1e-3 / lasernoise::elementary_charge;
    }
};

struct OutputCliOptions {
    std::string path;
    std::string format = "json";
    bool no_metadata = false;

    void add_to(CLI::App* cmd, bool tabular) {
        cmd->add_option("--output", path, "write the report to this file instead of stdout");
        if (tabular) {
            cmd->add_option("--format", format, "output format: csv or json")
                ->check(CLI::IsMember({"csv", "json"}));
            cmd->add_flag("--no-metadata", no_metadata,
                          "omit metadata (and the timestamp) for byte-stable output");
        } else {
            cmd->add_option("--format", format, "output format: json")
                ->check(CLI::IsMember({"csv", "json"}));
        }
    }

    void emit(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (!out) {
            throw lasernoise::IoError("cannot write output file '" + path + "'");
        }
        out << text;
    }

    void emit_scalar(const json& j) const {
        if (format == "csv") {
            throw UsageError("--format csv is only available for table commands "
                             "(sweep, fig1, fig2)");
        }
        emit(j.dump(2) + "\n");
    }

    void emit_table(lasernoise::SweepTable table) const {
        if (!no_metadata) {
            std::time_t now = std::time(nullptr);
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
            table.metadata.emplace_back("generated_at", buf);
        }
        lasernoise::EmitOptions opts;
        opts.metadata = !no_metadata;
        if (format == "csv") {
            std::ostringstream os;
            lasernoise::write_csv(os, table, opts);
            emit(os.str());
        } else {
            emit(lasernoise::table_to_json(table, opts).dump(2) + "\n");
        }
    }
};

[[nodiscard]] double current_mA_for(double j) {
    return j * lasernoise::elementary_charge * 1e3;
}

[[nodiscard]] json operating_point_json(const DeviceParams& p, double j) {
    const lasernoise::OperatingPoint op = lasernoise::steady_state(p, j);
    return json{{"j", op.j},
                {"current_mA", current_mA_for(op.j)},
                {"n_bar", op.n_bar},
                {"N_bar", op.N_bar}};
}

void print_check_table(std::ostream& os, const lasernoise::AcceptanceReport& report) {
    int passed = 0;
    for (const lasernoise::CheckResult& c : report.checks) {
        passed += c.passed ? 1 : 0;
        char head[64];
        std::snprintf(head, sizeof head, "[%2d] %s  ", c.id, c.passed ? "PASS" : "FAIL");
        os << head << c.name << "\n";
        char timing[64];
        std::snprintf(timing, sizeof timing, "  (%.3f s, budget %g s)", c.seconds,
                      c.budget_seconds);
        os << "      " << c.detail << timing << "\n";
    }
    os << "result: " << passed << "/" << report.checks.size() << " passed\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady states, intensity noise, and stochastic checks for single-mode "
                 "microcavity lasers"};
    app.name("lasernoise");
    app.require_subcommand(1);
    app.set_version_flag("--version", lasernoise::version_string);

    int exit_code = 0;

    // --- steady ---------------------------------------------------------
    auto* steady = app.add_subcommand("steady", "stationary photon and excitation numbers at a pump");
    auto steady_dev = std::make_shared<DeviceCliOptions>();
    auto steady_pump = std::make_shared<PumpCliOptions>();
    auto steady_out = std::make_shared<OutputCliOptions>();
    steady_dev->add_to(steady);
    steady_pump->add_to(steady);
    steady_out->add_to(steady, false);
    steady->callback([steady_dev, steady_pump, steady_out]() {
        const DeviceParams p = steady_dev->resolve();
        const double j = steady_pump->resolve();
        json out = operating_point_json(p, j);
        out["device"] = lasernoise::device_to_json(p);
        steady_out->emit_scalar(out);
    });

    // --- thresholds -----------------------------------------------------
    auto* thresholds = app.add_subcommand("thresholds", "threshold pump, threshold photon number, and scale anchors");
    auto th_dev = std::make_shared<DeviceCliOptions>();
    auto th_out = std::make_shared<OutputCliOptions>();
    th_dev->add_to(thresholds);
    th_out->add_to(thresholds, false);
    thresholds->callback([th_dev, th_out]() {
        const DeviceParams p = th_dev->resolve();
        const double j_th = lasernoise::threshold_current(p);
        const double I_th_A = j_th * lasernoise::elementary_charge;
        json out{{"device", lasernoise::device_to_json(p)},
                 {"j_th", j_th},
                 {"I_th_A", I_th_A},
                 {"I_th_mA", I_th_A * 1e3},
                 {"n_bar_th", lasernoise::threshold_photon_number(p)},
                 {"n_T", p.n_t},
                 {"beta_I_th_A", p.beta * I_th_A}};
        th_out->emit_scalar(out);
    });

    // --- noise ----------------------------------------------------------
    auto* noise = app.add_subcommand("noise", "linearized rates and stationary photon-number variance at an operating point");
    auto noise_dev = std::make_shared<DeviceCliOptions>();
    auto noise_pump = std::make_shared<PumpCliOptions>();
    auto noise_out = std::make_shared<OutputCliOptions>();
    auto noise_n = std::make_shared<std::pair<double, bool>>(0.0, false);
    noise_dev->add_to(noise);
    noise_pump->add_to(noise);
    noise->add_option("--n", noise_n->first, "photon number (alternative to a pump flag)")
        ->each([noise_n](const std::string&) { noise_n->second = true; });
    noise_out->add_to(noise, false);
    noise->callback([noise_dev, noise_pump, noise_out, noise_n]() {
        const DeviceParams p = noise_dev->resolve();
        double j = 0.0;
        double n_bar = 0.0;
        if (noise_n->second) {
            if (noise_pump->provided()) {
                throw UsageError("give the operating point as a pump flag or --n, not both");
            }
            n_bar = noise_n->first;
            j = lasernoise::current_for_photon_number(p, n_bar);
        } else {
            j = noise_pump->resolve();
            n_bar = lasernoise::stationary_photon_number(p, j);
        }
        const lasernoise::FluctuationRates rates = lasernoise::fluctuation_rates(p, n_bar);
        const lasernoise::NoiseResult noise_result =
            lasernoise::photon_variance_closed_form(p, n_bar);
        json out{{"device", lasernoise::device_to_json(p)},
                 {"j", j},
                 {"current_mA", current_mA_for(j)},
                 {"n_bar", n_bar},
                 {"N_bar", lasernoise::stationary_excitations(p, n_bar)},
                 {"rates",
                  {{"gamma_n", rates.gamma_n},
                   {"Gamma_N", rates.Gamma_N},
                   {"omega_R", rates.omega_R},
                   {"r", rates.r}}},
                 {"variance", noise_result.variance},
                 {"thermal_limit", noise_result.thermal_limit},
                 {"ratio", noise_result.ratio},
                 {"fano", noise_result.fano}};
        noise_out->emit_scalar(out);
    });

    // --- noise-threshold --------------------------------------------------
    auto* nthr = app.add_subcommand("noise-threshold", "operating point where the variance drops to half the thermal value");
    auto nthr_dev = std::make_shared<DeviceCliOptions>();
    auto nthr_out = std::make_shared<OutputCliOptions>();
    nthr_dev->add_to(nthr);
    nthr_out->add_to(nthr, false);
    nthr->callback([nthr_dev, nthr_out]() {
        const DeviceParams p = nthr_dev->resolve();
        const lasernoise::NoiseThresholdReport report = lasernoise::noise_threshold_report(p);
        const lasernoise::NoiseThresholdCurrent current = lasernoise::noise_threshold_current(p);
        const double j_th = lasernoise::threshold_current(p);
        json out{{"device", lasernoise::device_to_json(p)},
                 {"n_half", report.n_half},
                 {"j_half", current.j_half},
                 {"I_half_mA", current_mA_for(current.j_half)},
                 {"margin", current.margin},
                 {"j_th", j_th},
                 {"I_th_mA", current_mA_for(j_th)},
                 {"roots", report.roots},
                 {"scan_min", report.scan_min},
                 {"scan_max", report.scan_max}};
        nthr_out->emit_scalar(out);
    });

    // --- regime -----------------------------------------------------------
    auto* regime = app.add_subcommand("regime", "classify the device and report asymptotic half-thermal estimates");
    auto regime_dev = std::make_shared<DeviceCliOptions>();
    auto regime_out = std::make_shared<OutputCliOptions>();
    regime_dev->add_to(regime);
    regime_out->add_to(regime, false);
    regime->callback([regime_dev, regime_out]() {
        const DeviceParams p = regime_dev->resolve();
        const lasernoise::RegimeTag tag = lasernoise::classify_regime(p);
        json out{{"device", lasernoise::device_to_json(p)},
                 {"beta", p.beta},
                 {"adiabatic_bound", lasernoise::adiabatic_validity_bound(p)},
                 {"regime", lasernoise::to_string(tag)},
                 {"asymptotic_n_half", lasernoise::asymptotic_noise_threshold(p, tag)},
                 {"piecewise_n_half", lasernoise::piecewise_noise_threshold(p.beta)},
                 {"piecewise_current_margin", lasernoise::piecewise_current_margin(p.beta)}};
        regime_out->emit_scalar(out);
    });

    // --- sweep ------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "tabulate steady state or noise over a pump or photon-number grid");
    auto sweep_dev = std::make_shared<DeviceCliOptions>();
    auto sweep_out = std::make_shared<OutputCliOptions>();
    auto sweep_kind = std::make_shared<std::string>();
    auto sweep_grid = std::make_shared<lasernoise::GridSpec>(lasernoise::GridSpec{0.0, 0.0, 60, lasernoise::GridSpacing::Log});
    auto sweep_linear = std::make_shared<bool>(false);
    auto sweep_columns = std::make_shared<std::vector<std::string>>();
    sweep->add_option("kind", *sweep_kind, "what to sweep: light (pump -> output), noise (pump grid), noise-n (photon grid)")
        ->required()
        ->check(CLI::IsMember({"light", "noise", "noise-n"}));
    sweep_dev->add_to(sweep);
    sweep->add_option("--min", sweep_grid->min, "grid minimum (carriers/s, or photons for noise-n)")->required();
    sweep->add_option("--max", sweep_grid->max, "grid maximum")->required();
    sweep->add_option("--points", sweep_grid->points, "number of grid points");
    sweep->add_flag("--linear", *sweep_linear, "linear grid spacing (default is logarithmic)");
    sweep->add_option("--columns", *sweep_columns, "comma-separated column subset")->delimiter(',');
    sweep_out->add_to(sweep, true);
    sweep->callback([sweep_dev, sweep_out, sweep_kind, sweep_grid, sweep_linear, sweep_columns]() {
        lasernoise::SweepSpec spec;
        spec.device = sweep_dev->resolve();
        spec.grid = *sweep_grid;
        spec.grid.spacing =
            *sweep_linear ? lasernoise::GridSpacing::Linear : lasernoise::GridSpacing::Log;
        spec.columns = *sweep_columns;
        lasernoise::SweepTable table;
        if (*sweep_kind == "light") {
            spec.variable = lasernoise::SweepVariable::PumpRate;
            table = lasernoise::sweep_light_current(spec);
        } else if (*sweep_kind == "noise") {
            spec.variable = lasernoise::SweepVariable::PumpRate;
            table = lasernoise::sweep_noise_vs_current(spec);
        } else {
            spec.variable = lasernoise::SweepVariable::PhotonNumber;
            table = lasernoise::sweep_noise_vs_photon(spec);
        }
        sweep_out->emit_table(std::move(table));
    });

    // --- fig1 / fig2 --------------------------------------------------------
    auto add_beta_curve = [&app](const char* name, const char* help, bool margin_curve, int& rc) {
        auto* cmd = app.add_subcommand(name, help);
        auto dev = std::make_shared<DeviceCliOptions>();
        auto out = std::make_shared<OutputCliOptions>();
        auto grid = std::make_shared<lasernoise::GridSpec>(
            lasernoise::GridSpec{1e-11, 1e-1, 60, lasernoise::GridSpacing::Log});
        auto no_covary = std::make_shared<bool>(false);
        dev->add_to(cmd);
        cmd->add_option("--min-beta", grid->min, "smallest spontaneous-emission fraction");
        cmd->add_option("--max-beta", grid->max, "largest spontaneous-emission fraction");
        cmd->add_option("--points", grid->points, "number of grid points");
        cmd->add_flag("--no-covary", *no_covary,
                      "keep N_T and tau_cav fixed instead of material covariation");
        out->add_to(cmd, true);
        cmd->callback([dev, out, grid, no_covary, margin_curve, &rc]() {
            (void)rc;
            lasernoise::SweepSpec spec;
            spec.variable = lasernoise::SweepVariable::Beta;
            spec.device = dev->resolve();
            spec.grid = *grid;
            spec.material_covariation = !*no_covary;
            lasernoise::SweepTable table =
                margin_curve ? lasernoise::figure2_data(spec) : lasernoise::figure1_data(spec);
            out->emit_table(std::move(table));
        });
        return cmd;
    };
    add_beta_curve("fig1", "half-thermal photon number and its piecewise summary across beta", false, exit_code);
    add_beta_curve("fig2", "pump margin of the half-thermal point and its piecewise summary across beta", true, exit_code);

    // --- sim-langevin --------------------------------------------------------
    auto* lang = app.add_subcommand("sim-langevin", "integrate the linearized stochastic dynamics and report stationary moments");
    auto lang_dev = std::make_shared<DeviceCliOptions>();
    auto lang_pump = std::make_shared<PumpCliOptions>();
    auto lang_out = std::make_shared<OutputCliOptions>();
    auto lang_n = std::make_shared<std::pair<double, bool>>(0.0, false);
    auto lang_steps = std::make_shared<std::uint64_t>(1'000'000);
    auto lang_seed = std::make_shared<std::uint64_t>(1);
    auto lang_dt = std::make_shared<double>(0.0);
    auto lang_burn = std::make_shared<std::uint64_t>(0);
    auto lang_burn_given = std::make_shared<bool>(false);
    lang_dev->add_to(lang);
    lang_pump->add_to(lang);
    lang->add_option("--n", lang_n->first, "photon number (alternative to a pump flag)")
        ->each([lang_n](const std::string&) { lang_n->second = true; });
    lang->add_option("--steps", *lang_steps, "number of integration steps");
    lang->add_option("--seed", *lang_seed, "random-number seed");
    lang->add_option("--dt", *lang_dt, "time step in seconds (default picks one from the rates)");
    lang->add_option("--burn-in-steps", *lang_burn, "steps to discard before accumulating")
        ->each([lang_burn_given](const std::string&) { *lang_burn_given = true; });
    lang_out->add_to(lang, false);
    lang->callback([lang_dev, lang_pump, lang_out, lang_n, lang_steps, lang_seed, lang_dt,
                    lang_burn, lang_burn_given]() {
        const DeviceParams p = lang_dev->resolve();
        double n_bar = 0.0;
        if (lang_n->second) {
            if (lang_pump->provided()) {
                throw UsageError("give the operating point as a pump flag or --n, not both");
            }
            n_bar = lang_n->first;
        } else {
            n_bar = lasernoise::stationary_photon_number(p, lang_pump->resolve());
        }
        lasernoise::LangevinConfig config;
        if (*lang_dt > 0.0) {
            config.dt = *lang_dt;
            config.n_steps = *lang_steps;
            config.burn_in_steps = *lang_burn;
            config.seed = *lang_seed;
        } else {
            config = lasernoise::langevin_auto_config(p, n_bar, *lang_steps, *lang_seed);
            if (*lang_burn_given) {
                config.burn_in_steps = *lang_burn;
            }
        }
        const lasernoise::LangevinResult sim = lasernoise::simulate_langevin(p, n_bar, config);
        const json config_echo{{"dt_s", sim.dt},
                               {"n_steps", config.n_steps},
                               {"burn_in_steps", config.burn_in_steps},
                               {"seed", config.seed}};
        const double thermal = n_bar * (n_bar + 1.0);
        json out{{"device", lasernoise::device_to_json(p)},
                 {"n_bar", n_bar},
                 {"j", lasernoise::current_for_photon_number(p, n_bar)},
                 {"current_mA", current_mA_for(lasernoise::current_for_photon_number(p, n_bar))},
                 {"channels",
                  {lasernoise::stats_to_json("photon", sim.delta_n, config.seed, config_echo),
                   lasernoise::stats_to_json("excitation", sim.delta_N, config.seed, config_echo)}},
                 {"ratio", sim.delta_n.variance / thermal},
                 {"closed_form_ratio", lasernoise::photon_variance_closed_form(p, n_bar).ratio}};
        lang_out->emit_scalar(out);
    });

    // --- sim-gillespie ---------------------------------------------------------
    auto* gill = app.add_subcommand("sim-gillespie", "simulate the jump process event by event and report stationary moments");
    auto gill_dev = std::make_shared<DeviceCliOptions>();
    auto gill_pump = std::make_shared<PumpCliOptions>();
    auto gill_out = std::make_shared<OutputCliOptions>();
    auto gill_tmax = std::make_shared<double>(0.0);
    auto gill_burn = std::make_shared<double>(0.0);
    auto gill_seed = std::make_shared<std::uint64_t>(1);
    auto gill_budget = std::make_shared<std::uint64_t>(1'000'000'000);
    auto gill_dump = std::make_shared<std::string>();
    gill_dev->add_to(gill);
    gill_pump->add_to(gill);
    gill->add_option("--t-max", *gill_tmax, "simulated time span in seconds")->required();
    gill->add_option("--burn-in", *gill_burn, "time to discard before accumulating, in seconds");
    gill->add_option("--seed", *gill_seed, "random-number seed");
    gill->add_option("--max-events", *gill_budget, "abort if the event count would exceed this");
    gill->add_option("--dump", *gill_dump, "write the full trajectory as CSV to this file");
    gill_out->add_to(gill, false);
    gill->callback([gill_dev, gill_pump, gill_out, gill_tmax, gill_burn, gill_seed, gill_budget,
                    gill_dump]() {
        const DeviceParams p = gill_dev->resolve();
        const double j = gill_pump->resolve();
        lasernoise::GillespieConfig config;
        config.t_max = *gill_tmax;
        config.burn_in = *gill_burn;
        config.seed = *gill_seed;
        config.max_events = *gill_budget;
        std::ofstream dump_file;
        std::ostream* dump = nullptr;
        if (!gill_dump->empty()) {
            dump_file.open(*gill_dump);
            if (!dump_file) {
                throw lasernoise::IoError("cannot write trajectory file '" + *gill_dump + "'");
            }
            dump = &dump_file;
        }
        const lasernoise::GillespieResult sim = lasernoise::simulate_gillespie(p, j, config, dump);
        const json config_echo{{"t_max_s", config.t_max},
                               {"burn_in_s", config.burn_in},
                               {"seed", config.seed},
                               {"max_events", config.max_events}};
        json out{{"device", lasernoise::device_to_json(p)},
                 {"j", j},
                 {"current_mA", current_mA_for(j)},
                 {"steady", operating_point_json(p, j)},
                 {"channels",
                  {lasernoise::stats_to_json("excitation", sim.excitation, config.seed, config_echo),
                   lasernoise::stats_to_json("photon", sim.photon, config.seed, config_echo)}},
                 {"events", sim.events},
                 {"estimated_events", sim.estimated_events},
                 {"t_end", sim.t_end}};
        gill_out->emit_scalar(out);
    });

    // --- verify -------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run the built-in cross-checks and print a pass/fail table");
    auto verify_preset = std::make_shared<std::string>();
    auto verify_seed = std::make_shared<std::uint64_t>(1);
    verify->add_option("--preset", *verify_preset,
                       "check one built-in device quickly instead of the full battery")
        ->check(CLI::IsMember({"default", "reference", "toy-a", "toy-b"}));
    verify->add_option("--seed", *verify_seed, "random-number seed for the quick checks");
    verify->callback([verify_preset, verify_seed, &exit_code]() {
        const lasernoise::AcceptanceReport report =
            verify_preset->empty()
                ? lasernoise::run_acceptance()
                : lasernoise::quick_verify(lasernoise::preset(*verify_preset), *verify_seed);
        print_check_table(std::cout, report);
        exit_code = report.all_passed() ? 0 : 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lasernoise::Error& e) {
        std::cerr << lasernoise::error_to_json(e).dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return exit_code;
}
