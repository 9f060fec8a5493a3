#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thermoqfi/operator_core.hpp"

namespace thermoqfi {

// Tasks the front end can run. Sweep tasks emit one row per grid point;
// figure tasks emit the pinned datasets; verify runs the oracle suite.
enum class Task { qubit, ising_z, ising_x, dense, bounds, figure1a, figure1b, verify };

enum class SweepVar { beta, J, B, alpha, Delta };
enum class Scale { linear, log };
enum class OutputFormat { csv, json };

const char* task_name(Task t) noexcept;
const char* sweep_var_name(SweepVar v) noexcept;

std::optional<Task> parse_task(const std::string& s);
std::optional<SweepVar> parse_sweep_var(const std::string& s);

struct SweepConfig {
    Task task = Task::qubit;
    std::optional<SweepVar> sweep;
    double min = 0.0;
    double max = 0.0;
    int steps = 0;
    Scale scale = Scale::linear;

    // Fixed parameters (defaults chosen per task at validation time).
    int N = 0;
    double J = 0.0;
    double B = 0.0;
    double beta = 1.0;
    double alpha = 0.0;
    double delta = 1.0;

    std::string hamiltonian_path; // --H (dense task)
    std::string perturbation_path; // --Hprime (dense, bounds tasks)
    std::string out;              // output path; empty -> stdout
    OutputFormat format = OutputFormat::csv;
    std::string method = "transfer"; // ising-x: transfer | dense
};

struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Validate cross-field constraints (sweep variable applicability, ranges,
// required files); throws errc::parse_error or errc::invalid_argument.
void validate_config(SweepConfig& cfg);

// Parse an INI-style config file: one [task] section whose name must match
// the invoked task, flat key = value lines, # or ; comments. Errors carry
// file:line positions. Flag overrides are applied by the caller on top of
// the parsed config.
SweepConfig parse_config_file(const std::string& path, const std::string& task);

// Compute the rows for a validated sweep/figure config (not verify).
SweepResult run_sweep(const SweepConfig& cfg);

// Serialize a result; CSV uses 17 significant digits, '.' decimal, ','
// separator, LF line endings, header row first.
std::string to_csv(const SweepResult& r);
std::string to_json(const SweepResult& r, const std::string& task);

// Full front-end entry point: validate, compute, write (file or stdout).
// Returns 0 on success, 2 on config errors, 3 on numeric-domain errors;
// failure messages go to err.
int run(SweepConfig cfg, std::ostream& out_stream, std::ostream& err);

// Oracle suite behind the verify task; prints one line per suite plus a
// summary to out, returns the number of failed checks.
int run_verify(std::ostream& out);

// Operator file I/O. Format: {"dim": D, "entries": [[[re, im], ...], ...]}
// row-major; Hermiticity validated on load at kHermTol (errors name the
// offending row/col).
HermitianOperator load_operator(const std::string& path);
void save_operator(const HermitianOperator& A, const std::string& path);

} // namespace thermoqfi
