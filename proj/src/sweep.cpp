#include "thermoqfi/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "thermoqfi/bounds.hpp"
#include "thermoqfi/ising.hpp"
#include "thermoqfi/qfi_engine.hpp"

namespace thermoqfi {

namespace {

[[noreturn]] void config_fail(const std::string& msg) {
    throw Error(errc::parse_error, msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[40];
    const auto res =
        std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double grid_value(const SweepConfig& cfg, int i) {
    const double f = static_cast<double>(i) / (cfg.steps - 1);
    if (cfg.scale == Scale::log)
        return std::exp(std::log(cfg.min) +
                        f * (std::log(cfg.max) - std::log(cfg.min)));
    return cfg.min + f * (cfg.max - cfg.min);
}

// Safety net behind the emitted-row contract: a computed quantity may not
// exceed the bound column it is printed next to.
void check_row_bound(double value, double bound) {
    if (value > bound + 1e-9 * std::max(1.0, bound))
        throw Error(errc::invalid_argument,
                    "computed value exceeds its bound column");
}

// Order-preserving row parallelism; errors from workers are rethrown.
template <typename Fn>
void compute_rows(int n, std::vector<std::vector<double>>& rows, Fn&& body) {
    rows.assign(n, {});
    unsigned workers = std::thread::hardware_concurrency();
    if (workers < 2 || n < 8) {
        for (int i = 0; i < n; ++i) rows[i] = body(i);
        return;
    }
    workers = std::min<unsigned>({workers, 4u, static_cast<unsigned>(n)});
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = static_cast<int>(w); i < n;
                     i += static_cast<int>(workers))
                    rows[i] = body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

SweepResult sweep_qubit(const SweepConfig& cfg) {
    SweepResult r;
    r.columns = {sweep_var_name(*cfg.sweep), "qfi_total", "qfi_diag",
                 "qfi_offdiag", "bound_finite_T"};
    const HermitianOperator hp{pauli_z()};
    compute_rows(cfg.steps, r.rows, [&](int i) {
        const double x = grid_value(cfg, i);
        double alpha = cfg.alpha, delta = cfg.delta, beta = cfg.beta;
        switch (*cfg.sweep) {
            case SweepVar::alpha: alpha = x; break;
            case SweepVar::Delta: delta = x; break;
            default: beta = x; break;
        }
        Matrix m = delta * (std::cos(alpha) * pauli_z() +
                            std::sin(alpha) * pauli_x());
        QFIBreakdown q = qfi_thermal(HermitianOperator(std::move(m)), hp, beta);
        const double bound = beta * beta;  // beta^2 ||sigma_z||^2 / 4
        check_row_bound(q.total, bound);
        return std::vector<double>{x, q.total, q.diag, q.offdiag, bound};
    });
    return r;
}

SweepResult sweep_ising(const SweepConfig& cfg) {
    const bool transverse = cfg.task == Task::ising_x;
    SweepResult r;
    r.columns = {sweep_var_name(*cfg.sweep),
                 transverse ? "qfi_transverse" : "qfi_parallel", "bound_local"};
    const TransverseMethod method = cfg.method == "dense"
                                        ? TransverseMethod::dense
                                        : TransverseMethod::transfer;
    compute_rows(cfg.steps, r.rows, [&](int i) {
        const double x = grid_value(cfg, i);
        IsingParams p{cfg.N, cfg.J, cfg.B, cfg.beta};
        switch (*cfg.sweep) {
            case SweepVar::J: p.J = x; break;
            case SweepVar::B: p.B = x; break;
            default: p.beta = x; break;
        }
        const double qfi =
            transverse ? qfi_transverse(p, method) : qfi_parallel(p);
        const double bound = local_bound(2.0, p.N, p.beta);
        check_row_bound(qfi, bound);
        return std::vector<double>{x, qfi, bound};
    });
    return r;
}

SweepResult sweep_dense(const SweepConfig& cfg) {
    SweepResult r;
    r.columns = {"beta", "qfi_total", "qfi_diag", "qfi_offdiag",
                 "bound_finite_T"};
    const HermitianOperator h = load_operator(cfg.hamiltonian_path);
    const HermitianOperator hp = load_operator(cfg.perturbation_path);
    if (h.dim() != hp.dim())
        throw Error(errc::dimension_mismatch,
                    "operator files have different dimensions");
    const EigenSystem es = eigendecompose(h);
    const double s = spectral_seminorm(hp);
    compute_rows(cfg.steps, r.rows, [&](int i) {
        const double beta = grid_value(cfg, i);
        QFIBreakdown q = qfi_thermal(es, hp, beta);
        const double bound = beta * beta * s * s / 4.0;
        check_row_bound(q.total, bound);
        return std::vector<double>{beta, q.total, q.diag, q.offdiag, bound};
    });
    return r;
}

SweepResult sweep_bounds(const SweepConfig& cfg) {
    SweepResult r;
    r.columns = {sweep_var_name(*cfg.sweep), "seminorm",      "bound_finite_T",
                 "bound_local",              "bound_gapped",  "bound_dynamical"};
    const HermitianOperator hp = load_operator(cfg.perturbation_path);
    const double s = spectral_seminorm(hp);
    compute_rows(cfg.steps, r.rows, [&](int i) {
        const double x = grid_value(cfg, i);
        const double beta = *cfg.sweep == SweepVar::beta ? x : cfg.beta;
        const double gap = *cfg.sweep == SweepVar::Delta ? x : cfg.delta;
        return std::vector<double>{x,
                                   s,
                                   beta * beta * s * s / 4.0,
                                   local_bound(s, cfg.N, beta),
                                   s * s / (gap * gap),
                                   beta * beta * s * s};  // t = beta convention
    });
    return r;
}

SweepResult figure_result(char variant) {
    DataTable t = figure1_datasets(variant);
    SweepResult r;
    r.columns = std::move(t.columns);
    r.rows = std::move(t.rows);
    for (const auto& row : r.rows) {
        check_row_bound(row[2], row[3]);  // qfi column vs beta^2 N^2
        if (variant == 'b') check_row_bound(row[1], row[3]);
    }
    return r;
}

// ---- operator file I/O ----------------------------------------------------

using json = nlohmann::ordered_json;

Complex entry_at(const json& cell, const std::string& path, int i, int j) {
    auto malformed = [&]() -> Error {
        std::ostringstream os;
        os << "operator file " << path << ": entry (" << i << "," << j
           << ") malformed; expected a number or [re, im]";
        return Error(errc::parse_error, os.str());
    };
    if (cell.is_number()) return Complex(cell.get<double>(), 0.0);
    if (cell.is_array() && cell.size() == 2 && cell[0].is_number() &&
        cell[1].is_number())
        return Complex(cell[0].get<double>(), cell[1].get<double>());
    throw malformed();
}

// ---- verify suite ----------------------------------------------------------

struct Suite {
    std::string name;
    int checks = 0;
    int failed = 0;
    void expect(bool ok) {
        ++checks;
        if (!ok) ++failed;
    }
};

Matrix random_hermitian(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) m(i, j) = Complex(g(rng), g(rng));
    Matrix h = (m + m.adjoint()) / 2.0;
    return h;
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1e-30, std::abs(a), std::abs(b)});
}

void verify_qubit(Suite& s) {
    for (double alpha : {0.0, M_PI / 6.0, M_PI / 3.0, M_PI / 2.0})
        for (double delta : {0.5, 1.0, 2.0})
            for (double beta : {0.1, 1.0, 10.0}) {
                Matrix m = delta * (std::cos(alpha) * pauli_z() +
                                    std::sin(alpha) * pauli_x());
                const double got =
                    qfi_thermal(HermitianOperator(std::move(m)),
                                HermitianOperator(pauli_z()), beta)
                        .total;
                const double bd = beta * delta;
                const double ca = std::cos(alpha), sa = std::sin(alpha);
                const double want =
                    beta * beta *
                    (ca * ca / (std::cosh(bd) * std::cosh(bd)) +
                     sa * sa * std::tanh(bd) * std::tanh(bd) / (bd * bd));
                s.expect(close_rel(got, want, 1e-10));
            }
}

void verify_superop(Suite& s) {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = 5;
        GibbsState rho =
            gibbs_state(HermitianOperator(random_hermitian(rng, d)), 0.8);
        HermitianOperator a(random_hermitian(rng, d));
        HermitianOperator b(random_hermitian(rng, d));
        // round trips
        HermitianOperator la = apply_superop(SuperopKind::Log, rho, a);
        HermitianOperator back = apply_superop(SuperopKind::LogInverse, rho, la);
        s.expect((back.matrix() - a.matrix()).norm() <= 1e-10 * a.matrix().norm());
        HermitianOperator ba = apply_superop(SuperopKind::Bures, rho, a);
        HermitianOperator back2 =
            apply_superop(SuperopKind::BuresInverse, rho, ba);
        s.expect((back2.matrix() - a.matrix()).norm() <=
                 1e-10 * a.matrix().norm());
        // self-adjointness in the Hilbert-Schmidt inner product
        HermitianOperator lb = apply_superop(SuperopKind::Log, rho, b);
        const double x = (a.matrix().adjoint() * lb.matrix()).trace().real();
        const double y = (la.matrix().adjoint() * b.matrix()).trace().real();
        s.expect(close_rel(x, y, 1e-10));
    }
}

void verify_paths(Suite& s) {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 2 + static_cast<int>(rng() % 5);
        const double beta = (rep % 3 == 0) ? 0.1 : (rep % 3 == 1 ? 1.0 : 10.0);
        HermitianOperator h(random_hermitian(rng, d));
        HermitianOperator hp(random_hermitian(rng, d));
        GibbsState rho = gibbs_state(h, beta);
        const double split = qfi_thermal(h, hp, beta).total;
        const double gv = beta * beta * generalized_variance(rho, hp);
        const double viadot = qfi_from_rho_dot(rho, rho_dot(h, hp, beta));
        s.expect(close_rel(split, gv, 1e-9));
        s.expect(close_rel(split, viadot, 1e-9));
    }
}

void verify_bounds(Suite& s) {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 2 + static_cast<int>(rng() % 7);
        const double beta = (rep % 3 == 0) ? 0.1 : (rep % 3 == 1 ? 1.0 : 10.0);
        HermitianOperator h(random_hermitian(rng, d));
        HermitianOperator hp(random_hermitian(rng, d));
        const double f = qfi_thermal(h, hp, beta).total;
        const double bound = finite_T_bound(hp, beta);
        s.expect(f <= bound + 1e-9 * std::max(1.0, bound));
    }
    // saturation at beta (eta - epsilon) = 20
    std::mt19937_64 rng2(14);
    HermitianOperator hp(random_hermitian(rng2, 4));
    HermitianOperator h = commuting_saturator(hp, 0.0, 20.0);
    const double f = qfi_thermal(h, hp, 1.0).total;
    const double bound = finite_T_bound(hp, 1.0);
    s.expect(f >= (1.0 - 1e-6) * bound);
}

void verify_ising(Suite& par, Suite& tr) {
    for (int n = 3; n <= 6; ++n) {
        HermitianOperator hz = local_sum(HermitianOperator(pauli_z()), n);
        HermitianOperator hx = local_sum(HermitianOperator(pauli_x()), n);
        for (double j : {0.0, 0.5, 2.0})
            for (double b : {0.0, 0.05, 0.5})
                for (double beta : {0.5, 1.0, 4.0}) {
                    IsingParams p{n, j, b, beta};
                    EigenSystem es = eigendecompose(dense_hamiltonian(p, 0, 0));
                    par.expect(close_rel(qfi_parallel(p),
                                         qfi_thermal(es, hz, beta).total,
                                         1e-8));
                    tr.expect(close_rel(
                        qfi_transverse(p, TransverseMethod::transfer),
                        qfi_thermal(es, hx, beta).total, 1e-8));
                }
    }
}

void verify_derivative(Suite& s) {
    // Points chosen with F = O(1) or larger: the second difference of lnZ
    // carries ~lnZ * eps / h^2 of rounding noise, which would swamp an
    // exponentially small F at fixed h.
    const IsingParams points[] = {
        {8, 0.5, 0.3, 1.0}, {6, 2.0, 0.05, 0.5}, {10, 0.0, 0.5, 1.0},
        {5, 1.0, 0.0, 2.0}, {9, 0.5, 0.2, 2.0}};
    for (const IsingParams& p : points) {
        auto lnz_at = [&](double b) {
            IsingParams q = p;
            q.B = b;
            return partition_function_log(q);
        };
        auto second = [&](double h) {
            return (lnz_at(p.B + h) - 2.0 * lnz_at(p.B) + lnz_at(p.B - h)) /
                   (h * h);
        };
        const double h = 1e-3;
        const double fd = (4.0 * second(h / 2.0) - second(h)) / 3.0;
        s.expect(close_rel(qfi_parallel(p), fd, 1e-6));
    }
}

void verify_figures(Suite& s) {
    for (char v : {'a', 'b'}) {
        SweepResult r1 = figure_result(v);
        SweepResult r2 = figure_result(v);
        s.expect(to_csv(r1) == to_csv(r2));
    }
}

} // namespace

const char* task_name(Task t) noexcept {
    switch (t) {
        case Task::qubit: return "qubit";
        case Task::ising_z: return "ising-z";
        case Task::ising_x: return "ising-x";
        case Task::dense: return "dense";
        case Task::bounds: return "bounds";
        case Task::figure1a: return "figure1a";
        case Task::figure1b: return "figure1b";
        case Task::verify: return "verify";
    }
    return "unknown";
}

const char* sweep_var_name(SweepVar v) noexcept {
    switch (v) {
        case SweepVar::beta: return "beta";
        case SweepVar::J: return "J";
        case SweepVar::B: return "B";
        case SweepVar::alpha: return "alpha";
        case SweepVar::Delta: return "Delta";
    }
    return "unknown";
}

std::optional<Task> parse_task(const std::string& s) {
    for (Task t : {Task::qubit, Task::ising_z, Task::ising_x, Task::dense,
                   Task::bounds, Task::figure1a, Task::figure1b, Task::verify})
        if (s == task_name(t)) return t;
    return std::nullopt;
}

std::optional<SweepVar> parse_sweep_var(const std::string& s) {
    for (SweepVar v : {SweepVar::beta, SweepVar::J, SweepVar::B, SweepVar::alpha,
                       SweepVar::Delta})
        if (s == sweep_var_name(v)) return v;
    return std::nullopt;
}

void validate_config(SweepConfig& cfg) {
    const Task t = cfg.task;
    if (t == Task::figure1a || t == Task::figure1b || t == Task::verify) {
        if (cfg.sweep)
            config_fail("task '" + std::string(task_name(t)) +
                        "' does not take a sweep (key: sweep)");
        return;
    }
    if (!cfg.sweep)
        config_fail("a sweep variable is required (key: sweep)");
    const SweepVar v = *cfg.sweep;
    auto allowed = [&]() {
        switch (t) {
            case Task::qubit:
                return v == SweepVar::beta || v == SweepVar::alpha ||
                       v == SweepVar::Delta;
            case Task::ising_z:
            case Task::ising_x:
                return v == SweepVar::beta || v == SweepVar::J ||
                       v == SweepVar::B;
            case Task::dense:
                return v == SweepVar::beta;
            case Task::bounds:
                return v == SweepVar::beta || v == SweepVar::Delta;
            default:
                return false;
        }
    };
    if (!allowed())
        config_fail("sweep variable '" + std::string(sweep_var_name(v)) +
                    "' is not applicable to task '" + task_name(t) +
                    "' (key: sweep)");
    if (!std::isfinite(cfg.min) || !std::isfinite(cfg.max) || cfg.min >= cfg.max)
        config_fail("sweep range needs min < max (keys: min, max)");
    if (cfg.steps < 2) config_fail("sweep needs at least 2 steps (key: steps)");
    if (cfg.steps > 1000000) config_fail("step count too large (key: steps)");
    if (cfg.scale == Scale::log && cfg.min <= 0.0)
        config_fail("log scale needs min > 0 (key: min)");

    const bool beta_swept = v == SweepVar::beta;
    if (!beta_swept && (!std::isfinite(cfg.beta) || cfg.beta < 0.0))
        config_fail("beta must be nonnegative (key: beta)");

    switch (t) {
        case Task::qubit:
            if (!std::isfinite(cfg.delta) || !std::isfinite(cfg.alpha))
                config_fail("alpha and Delta must be finite (keys: alpha, delta)");
            break;
        case Task::ising_z:
        case Task::ising_x: {
            if (cfg.N == 0) cfg.N = 3;
            if (cfg.N < 3)
                config_fail("chain needs at least 3 sites (key: N)");
            const double beta_floor = beta_swept ? cfg.min : cfg.beta;
            if (beta_floor <= 0.0)
                config_fail(beta_swept
                                ? "beta sweep needs min > 0 (key: min)"
                                : "beta must be positive (key: beta)");
            if (t == Task::ising_x) {
                if (cfg.method != "transfer" && cfg.method != "dense")
                    config_fail("method must be transfer or dense (key: method)");
                if (cfg.method == "dense" && cfg.N > 12)
                    config_fail("dense method limited to 12 sites (key: N)");
            }
            break;
        }
        case Task::dense:
            if (cfg.hamiltonian_path.empty())
                config_fail("dense task needs a Hamiltonian file (key: H)");
            if (cfg.perturbation_path.empty())
                config_fail("dense task needs a perturbation file (key: Hprime)");
            if (cfg.min < 0.0)
                config_fail("beta sweep needs min >= 0 (key: min)");
            break;
        case Task::bounds:
            if (cfg.perturbation_path.empty())
                config_fail("bounds task needs a perturbation file (key: Hprime)");
            if (cfg.N == 0) cfg.N = 1;
            if (cfg.N < 1) config_fail("N must be at least 1 (key: N)");
            if (v == SweepVar::Delta) {
                if (cfg.min <= 0.0)
                    config_fail("gap sweep needs min > 0 (key: min)");
            } else if (!std::isfinite(cfg.delta) || cfg.delta <= 0.0) {
                config_fail("gap must be positive (key: delta)");
            }
            if (beta_swept && cfg.min < 0.0)
                config_fail("beta sweep needs min >= 0 (key: min)");
            break;
        default:
            break;
    }
}

SweepConfig parse_config_file(const std::string& path, const std::string& task) {
    const std::optional<Task> t = parse_task(task);
    if (!t) config_fail("unknown task '" + task + "'");
    std::ifstream f(path);
    if (!f) config_fail("cannot open config file: " + path);
    SweepConfig cfg;
    cfg.task = *t;
    std::string raw;
    int lineno = 0;
    bool in_section = false;
    auto fail_line = [&](const std::string& msg) {
        config_fail(path + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(f, raw)) {
        ++lineno;
        const auto cut = raw.find_first_of("#;");
        std::string line = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail_line("unterminated section header");
            if (in_section) fail_line("only one section is allowed");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name != task)
                fail_line("section [" + name + "] does not match task '" +
                          task + "'");
            in_section = true;
            continue;
        }
        if (!in_section) fail_line("key outside the [" + task + "] section");
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail_line("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) fail_line("expected key = value");

        auto as_double = [&]() {
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(val, &used);
            } catch (const std::exception&) {
                used = std::string::npos;
            }
            if (used != val.size())
                fail_line("key '" + key + "': invalid number '" + val + "'");
            return x;
        };
        auto as_int = [&]() {
            std::size_t used = 0;
            int x = 0;
            try {
                x = std::stoi(val, &used);
            } catch (const std::exception&) {
                used = std::string::npos;
            }
            if (used != val.size())
                fail_line("key '" + key + "': invalid integer '" + val + "'");
            return x;
        };

        if (key == "N") cfg.N = as_int();
        else if (key == "J") cfg.J = as_double();
        else if (key == "B") cfg.B = as_double();
        else if (key == "beta") cfg.beta = as_double();
        else if (key == "alpha") cfg.alpha = as_double();
        else if (key == "delta") cfg.delta = as_double();
        else if (key == "min") cfg.min = as_double();
        else if (key == "max") cfg.max = as_double();
        else if (key == "steps") cfg.steps = as_int();
        else if (key == "sweep") {
            const auto sv = parse_sweep_var(val);
            if (!sv) fail_line("key 'sweep': unknown variable '" + val + "'");
            cfg.sweep = sv;
        } else if (key == "log") {
            if (val == "true" || val == "1" || val == "yes")
                cfg.scale = Scale::log;
            else if (val == "false" || val == "0" || val == "no")
                cfg.scale = Scale::linear;
            else
                fail_line("key 'log': expected true or false, got '" + val + "'");
        } else if (key == "out") cfg.out = val;
        else if (key == "format") {
            if (val == "csv") cfg.format = OutputFormat::csv;
            else if (val == "json") cfg.format = OutputFormat::json;
            else fail_line("key 'format': expected csv or json, got '" + val + "'");
        } else if (key == "method") cfg.method = val;
        else if (key == "H") cfg.hamiltonian_path = val;
        else if (key == "Hprime") cfg.perturbation_path = val;
        else fail_line("unknown key '" + key + "'");
    }
    if (!in_section) config_fail(path + ": missing [" + task + "] section");
    return cfg;
}

SweepResult run_sweep(const SweepConfig& cfg) {
    switch (cfg.task) {
        case Task::qubit: return sweep_qubit(cfg);
        case Task::ising_z:
        case Task::ising_x: return sweep_ising(cfg);
        case Task::dense: return sweep_dense(cfg);
        case Task::bounds: return sweep_bounds(cfg);
        case Task::figure1a: return figure_result('a');
        case Task::figure1b: return figure_result('b');
        case Task::verify: break;
    }
    throw Error(errc::invalid_argument, "verify has no sweep result");
}

std::string to_csv(const SweepResult& r) {
    std::string out;
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
        if (c) out += ',';
        out += r.columns[c];
    }
    out += '\n';
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const SweepResult& r, const std::string& task) {
    json doc;
    doc["task"] = task;
    doc["columns"] = r.columns;
    doc["rows"] = r.rows;
    return doc.dump(2) + "\n";
}

int run(SweepConfig cfg, std::ostream& out_stream, std::ostream& err) {
    try {
        validate_config(cfg);
    } catch (const Error& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
    if (cfg.task == Task::verify) {
        const int failures = run_verify(out_stream);
        return failures == 0 ? 0 : 1;
    }
    SweepResult result;
    try {
        result = run_sweep(cfg);
    } catch (const Error& e) {
        err << errc_name(e.code()) << ": " << e.what() << "\n";
        return e.code() == errc::parse_error ? 2 : 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    const std::string payload = cfg.format == OutputFormat::csv
                                    ? to_csv(result)
                                    : to_json(result, task_name(cfg.task));
    if (cfg.out.empty()) {
        out_stream << payload;
    } else {
        std::ofstream os(cfg.out, std::ios::binary);
        if (!os) {
            err << "config error: cannot write output file: " << cfg.out << "\n";
            return 2;
        }
        os << payload;
        if (!os.good()) {
            err << "config error: short write to output file: " << cfg.out
                << "\n";
            return 2;
        }
    }
    return 0;
}

int run_verify(std::ostream& out) {
    std::vector<Suite> suites;
    auto with = [&suites](const char* name, auto&& fn) {
        Suite s;
        s.name = name;
        fn(s);
        suites.push_back(std::move(s));
    };
    with("qubit closed form", verify_qubit);
    with("superoperator algebra", verify_superop);
    with("path equivalence", verify_paths);
    with("variance bounds", verify_bounds);
    {
        Suite par, tr;
        par.name = "parallel-field oracle";
        tr.name = "transverse-field oracle";
        verify_ising(par, tr);
        suites.push_back(std::move(par));
        suites.push_back(std::move(tr));
    }
    with("derivative consistency", verify_derivative);
    with("figure determinism", verify_figures);

    int checks = 0, failures = 0;
    for (const Suite& s : suites) {
        checks += s.checks;
        failures += s.failed;
        if (s.failed == 0)
            out << s.name << ": PASS (" << s.checks << " checks)\n";
        else
            out << s.name << ": FAIL (" << s.failed << " of " << s.checks
                << " checks)\n";
    }
    out << "verify: " << checks << " checks, " << failures << " failures\n";
    return failures;
}

HermitianOperator load_operator(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw Error(errc::parse_error, "cannot open operator file: " + path);
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::exception& e) {
        throw Error(errc::parse_error,
                    "operator file " + path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("dim") ||
        !doc["dim"].is_number_integer() || !doc.contains("entries") ||
        !doc["entries"].is_array())
        throw Error(errc::parse_error,
                    "operator file " + path +
                        ": expected {\"dim\": D, \"entries\": [[...], ...]}");
    const int d = doc["dim"].get<int>();
    if (d < 1 || d > kMaxDim)
        throw Error(errc::parse_error,
                    "operator file " + path + ": dim out of range");
    const json& rows = doc["entries"];
    if (static_cast<int>(rows.size()) != d)
        throw Error(errc::parse_error,
                    "operator file " + path + ": expected " +
                        std::to_string(d) + " rows, got " +
                        std::to_string(rows.size()));
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d)
            throw Error(errc::parse_error,
                        "operator file " + path + ": row " + std::to_string(i) +
                            " is not an array of " + std::to_string(d) +
                            " entries");
        for (int j = 0; j < d; ++j) m(i, j) = entry_at(rows[i][j], path, i, j);
    }
    // report the offending pair, not just the magnitude
    double worst = 0.0;
    int wi = 0, wj = 0;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i <= j; ++i) {
            const double a = std::abs(m(i, j) - std::conj(m(j, i)));
            if (a > worst) {
                worst = a;
                wi = i;
                wj = j;
            }
        }
    if (worst > kHermTol) {
        std::ostringstream os;
        os << "operator file " << path << ": not Hermitian at (" << wi << ","
           << wj << "); |A_ij - conj(A_ji)| = " << worst;
        throw Error(errc::non_hermitian, os.str());
    }
    return HermitianOperator(std::move(m));
}

void save_operator(const HermitianOperator& A, const std::string& path) {
    json doc;
    doc["dim"] = A.dim();
    json rows = json::array();
    for (int i = 0; i < A.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < A.dim(); ++j) {
            const Complex z = A.matrix()(i, j);
            row.push_back({z.real(), z.imag()});
        }
        rows.push_back(std::move(row));
    }
    doc["entries"] = std::move(rows);
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error(errc::parse_error, "cannot write operator file: " + path);
    os << doc.dump(1) << "\n";
}

} // namespace thermoqfi
