#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "thermoqfi/sweep.hpp"

namespace {

struct Flags {
    std::string config;
    int N = 0;
    double J = 0.0, B = 0.0, beta = 1.0, alpha = 0.0, delta = 1.0;
    std::string sweep;
    double min = 0.0, max = 0.0;
    int steps = 0;
    bool log_scale = false;
    std::string out;
    std::string format = "csv";
    std::string method = "transfer";
    std::string hamiltonian;
    std::string perturbation;
};

// Every subcommand exposes the same flag set; validation of which flags a
// task actually uses happens in validate_config.
void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "INI config file; flags override it");
    sub->add_option("--N", f.N, "number of sites");
    sub->add_option("--J", f.J, "Ising coupling");
    sub->add_option("--B", f.B, "longitudinal field");
    sub->add_option("--beta", f.beta, "inverse temperature");
    sub->add_option("--alpha", f.alpha, "qubit control angle");
    sub->add_option("--delta", f.delta, "qubit scale / spectral gap");
    sub->add_option("--sweep", f.sweep, "sweep variable: beta|J|B|alpha|Delta");
    sub->add_option("--min", f.min, "sweep range start");
    sub->add_option("--max", f.max, "sweep range end");
    sub->add_option("--steps", f.steps, "number of grid points (>= 2)");
    sub->add_flag("--log", f.log_scale, "log-spaced sweep grid");
    sub->add_option("--out", f.out, "output path (default: stdout)");
    sub->add_option("--format", f.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--method", f.method, "ising-x evaluation: transfer|dense")
        ->check(CLI::IsMember({"transfer", "dense"}));
    sub->add_option("--H", f.hamiltonian, "Hamiltonian operator file (dense)");
    sub->add_option("--Hprime", f.perturbation,
                    "perturbation operator file (dense, bounds)");
}

void apply_flags(const CLI::App* sub, const Flags& f, thermoqfi::SweepConfig& cfg) {
    auto given = [&](const char* name) { return sub->count(name) > 0; };
    if (given("--N")) cfg.N = f.N;
    if (given("--J")) cfg.J = f.J;
    if (given("--B")) cfg.B = f.B;
    if (given("--beta")) cfg.beta = f.beta;
    if (given("--alpha")) cfg.alpha = f.alpha;
    if (given("--delta")) cfg.delta = f.delta;
    if (given("--sweep")) {
        const auto v = thermoqfi::parse_sweep_var(f.sweep);
        if (!v)
            throw thermoqfi::Error(thermoqfi::errc::parse_error,
                                   "unknown sweep variable '" + f.sweep + "'");
        cfg.sweep = v;
    }
    if (given("--min")) cfg.min = f.min;
    if (given("--max")) cfg.max = f.max;
    if (given("--steps")) cfg.steps = f.steps;
    if (given("--log")) cfg.scale = thermoqfi::Scale::log;
    if (given("--out")) cfg.out = f.out;
    if (given("--format"))
        cfg.format = f.format == "json" ? thermoqfi::OutputFormat::json
                                        : thermoqfi::OutputFormat::csv;
    if (given("--method")) cfg.method = f.method;
    if (given("--H")) cfg.hamiltonian_path = f.hamiltonian;
    if (given("--Hprime")) cfg.perturbation_path = f.perturbation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermal quantum Fisher information toolkit"};
    app.require_subcommand(1);

    const char* tasks[] = {"qubit",  "ising-z",  "ising-x",  "dense",
                           "bounds", "figure1a", "figure1b", "verify"};
    const char* blurbs[] = {
        "two-level closed-form sweeps",
        "Ising longitudinal-field QFI sweeps",
        "Ising transverse-field QFI sweeps",
        "generic dense-operator QFI sweeps",
        "bound tables for an operator file",
        "pinned dataset: parallel QFI vs J",
        "pinned dataset: QFI vs beta",
        "run the self-check oracle suite"};
    Flags flags;
    for (int i = 0; i < 8; ++i) add_flags(app.add_subcommand(tasks[i], blurbs[i]), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        thermoqfi::SweepConfig cfg;
        if (sub->count("--config") > 0)
            cfg = thermoqfi::parse_config_file(flags.config, sub->get_name());
        else
            cfg.task = *thermoqfi::parse_task(sub->get_name());
        apply_flags(sub, flags, cfg);
        return thermoqfi::run(std::move(cfg), std::cout, std::cerr);
    } catch (const thermoqfi::Error& e) {
        std::cerr << (e.code() == thermoqfi::errc::parse_error
                          ? "config error: "
                          : "error: ")
                  << e.what() << "\n";
        return e.code() == thermoqfi::errc::parse_error ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
