#include "thermoqfi/ising.hpp"

#include <cmath>
#include <limits>

#include "thermoqfi/qfi_engine.hpp"

namespace thermoqfi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate(const IsingParams& p) {
    if (p.N < 3)
        throw Error(errc::invalid_argument, "chain needs at least 3 sites");
    if (!std::isfinite(p.beta) || p.beta <= 0.0)
        throw Error(errc::invalid_argument, "beta must be finite and positive");
    if (!std::isfinite(p.J) || !std::isfinite(p.B))
        throw Error(errc::invalid_argument, "couplings must be finite");
}

// ln cosh x without overflow.
double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
}

// ln |sinh x|, x != 0.
double log_sinh_abs(double x) {
    const double a = std::abs(x);
    if (a < 1e-8) return std::log(a);
    return a + std::log1p(-std::exp(-2.0 * a)) - M_LN2;
}

// ln(e^a + e^b) with -inf tolerated.
double lse2(double a, double b) {
    const double hi = std::max(a, b), lo = std::min(a, b);
    if (hi == kNegInf) return kNegInf;
    return hi + std::log1p(std::exp(lo - hi));
}

// ln |expm1(x)|.
double log_abs_expm1(double x) {
    if (x > 0.0) return x + std::log1p(-std::exp(-x));
    return std::log(-std::expm1(x));
}

double ln_flip_weight(double beta, double R) {
    const double x = beta * R;
    if (std::abs(x) < 1e-4)
        return 2.0 * std::log(beta) +
               std::log1p(x * x * (-1.0 / 6.0 + x * x * (31.0 / 360.0)));
    return 2.0 * log_sinh_abs(x) - log_cosh(x) - 2.0 * std::log(std::abs(R));
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

} // namespace

double flip_weight(double beta, double R) {
    if (!std::isfinite(beta) || beta <= 0.0)
        throw Error(errc::invalid_argument, "beta must be finite and positive");
    const double x = beta * R;
    if (std::abs(x) < 1e-4)
        return beta * beta *
               (1.0 + x * x * (-1.0 / 6.0 + x * x * (31.0 / 360.0)));
    return std::exp(ln_flip_weight(beta, R));
}

TransferContext transfer_context(const IsingParams& p) {
    validate(p);
    TransferContext ctx;
    const double bB = p.beta * p.B;
    const double bJ = p.beta * p.J;

    ctx.A = Eigen::Matrix2d::Zero();
    ctx.A(0, 0) = std::exp(-bB / 2.0);
    ctx.A(1, 1) = std::exp(bB / 2.0);
    ctx.C << std::exp(bJ), std::exp(-bJ), std::exp(-bJ), std::exp(bJ);
    ctx.Fmat << flip_weight(p.beta, p.B - 2.0 * p.J), flip_weight(p.beta, p.B),
        flip_weight(p.beta, p.B), flip_weight(p.beta, p.B + 2.0 * p.J);

    // lambda_+- = e^{bJ}(cosh bB +- s), s = sqrt(sinh^2 bB + e^{-4bJ}),
    // all handled in logs so bJ ~ 1e3 stays finite.
    const double ln_eps = -2.0 * bJ;
    const double ln_sinh = (p.B == 0.0) ? kNegInf : log_sinh_abs(bB);
    const double ln_s = 0.5 * lse2(2.0 * ln_sinh, 2.0 * ln_eps);
    ctx.ln_lambda_plus = bJ + lse2(log_cosh(bB), ln_s);

    if (p.J == 0.0) {
        ctx.lambda_minus_sign = 0;
        ctx.ln_lambda_minus_abs = kNegInf;
    } else {
        // lambda_+ lambda_- = det T = e^{2bJ} - e^{-2bJ}.
        ctx.lambda_minus_sign = p.J > 0.0 ? 1 : -1;
        ctx.ln_lambda_minus_abs =
            2.0 * bJ + log_abs_expm1(-4.0 * bJ) - ctx.ln_lambda_plus;
    }
    ctx.ln_q = ctx.ln_lambda_minus_abs - ctx.ln_lambda_plus;

    // Mixing angle: cos 2psi = -sinh(bB)/s, sin 2psi = e^{-2bJ}/s. Each is
    // computed in the regime where it is the small one, then the eigenvector
    // components take their square root from the large one.
    ctx.sin_2psi = std::exp(ln_eps - ln_s);
    ctx.cos_2psi =
        (p.B == 0.0) ? 0.0 : -sign_of(bB) * std::exp(ln_sinh - ln_s);
    double cp, sp;
    if (ctx.cos_2psi >= 0.0) {
        cp = std::sqrt((1.0 + ctx.cos_2psi) / 2.0);
        sp = ctx.sin_2psi / (2.0 * cp);
    } else {
        sp = std::sqrt((1.0 - ctx.cos_2psi) / 2.0);
        cp = ctx.sin_2psi / (2.0 * sp);
    }
    ctx.v_plus << cp, sp;
    ctx.v_minus << -sp, cp;
    ctx.mu_plus = cp / sp;
    ctx.mu_minus = -sp / cp;
    return ctx;
}

HermitianOperator dense_hamiltonian(const IsingParams& p, double theta_Z,
                                    double theta_X) {
    validate(p);
    if (p.N > 12)
        throw Error(errc::invalid_argument,
                    "dense chain limited to 12 sites (2^N guard)");
    const int n = p.N;
    const int d = 1 << n;
    Matrix h = Matrix::Zero(d, d);
    const double field = p.B + theta_Z;
    for (int s = 0; s < d; ++s) {
        // site k lives in bit n-1-k; bit 0 means z = +1
        double e = 0.0;
        for (int k = 0; k < n; ++k) {
            const int zk = ((s >> (n - 1 - k)) & 1) ? -1 : 1;
            const int zk1 = ((s >> (n - 1 - (k + 1) % n)) & 1) ? -1 : 1;
            e += -p.J * zk * zk1 + field * zk;
        }
        h(s, s) = e;
        if (theta_X != 0.0)
            for (int k = 0; k < n; ++k)
                h(s ^ (1 << (n - 1 - k)), s) += theta_X;
    }
    return HermitianOperator(std::move(h));
}

double partition_function_log(const IsingParams& p) {
    TransferContext ctx = transfer_context(p);
    double tail = 0.0;
    if (ctx.lambda_minus_sign != 0 && ctx.ln_q != kNegInf) {
        const double x = p.N * ctx.ln_q;
        const bool negative = ctx.lambda_minus_sign < 0 && (p.N % 2 != 0);
        tail = negative ? std::log(-std::expm1(x)) : std::log1p(std::exp(x));
    }
    return p.N * ctx.ln_lambda_plus + tail;
}

double qfi_parallel(const IsingParams& p) {
    TransferContext ctx = transfer_context(p);
    const double n = static_cast<double>(p.N);
    // Resummed ring correlation sum for Var[sum Z] with S = diag(1,-1):
    //   Var/N = 4 c^2 N q^N/(1+q^N)^2 + (1-c^2)(1+q)(1-q^N)/((1-q)(1+q^N)),
    // c = cos 2psi, q = lambda_-/lambda_+. 1-c^2 is taken as sin^2 2psi so
    // neither factor is formed by cancellation.
    const double q =
        ctx.lambda_minus_sign * std::exp(ctx.ln_q);  // exp(-inf) = 0 at J = 0
    double qn;      // q^N
    double ratio;   // (1 - q^N)/(1 - q)
    if (q > 0.0) {
        if (ctx.ln_q == 0.0) {
            // lambda_- rounds onto lambda_+ (deep ferromagnetic phase)
            qn = 1.0;
            ratio = n;
        } else {
            qn = std::exp(n * ctx.ln_q);
            ratio = std::expm1(n * ctx.ln_q) / std::expm1(ctx.ln_q);
        }
    } else {
        qn = std::pow(q, p.N);
        ratio = (1.0 - qn) / (1.0 - q);
    }
    const double c = ctx.cos_2psi;
    const double s2 = ctx.sin_2psi;
    const double term_mag = 4.0 * c * c * n * qn / ((1.0 + qn) * (1.0 + qn));
    const double term_corr = s2 * s2 * (1.0 + q) * ratio / (1.0 + qn);
    return p.beta * p.beta * n * (term_mag + term_corr);
}

double qfi_parallel_limits(const IsingParams& p, ParallelRegime regime) {
    validate(p);
    const double b2 = p.beta * p.beta;
    const double n = static_cast<double>(p.N);
    const double bB = p.beta * p.B;
    const double bJ = p.beta * p.J;
    switch (regime) {
        case ParallelRegime::B0_exact: {
            if (p.B != 0.0)
                throw Error(errc::regime_misuse,
                            "exact zero-field form needs B = 0");
            if (p.J == 0.0) return b2 * n;
            if (bJ > 0.0 && n * std::exp(-2.0 * bJ) < 1e-4) {
                // F = b^2 N^2 (1 - (N^2-1) e^{-4 bJ}/3) + O((N e^{-2bJ})^4);
                // the tanh-power form below loses all digits here.
                const double w2 = std::exp(-4.0 * bJ);
                return b2 * n * n * (1.0 - (n * n - 1.0) * w2 / 3.0);
            }
            // F = b^2 N e^{2bJ} (1 - t^N)/(1 + t^N), t = tanh(bJ)
            const double a = std::abs(bJ);
            const double ln_t =
                std::log1p(-std::exp(-2.0 * a)) - std::log1p(std::exp(-2.0 * a));
            const double tn_abs = std::exp(n * ln_t);
            const double tn =
                (bJ < 0.0 && p.N % 2 != 0) ? -tn_abs : tn_abs;
            const double one_minus =
                tn > 0.0 ? -std::expm1(n * ln_t) : 1.0 - tn;
            return b2 * n * std::exp(2.0 * bJ) * one_minus / (1.0 + tn);
        }
        case ParallelRegime::thermo: {
            if (p.B <= 0.0)
                throw Error(errc::regime_misuse,
                            "thermodynamic-limit form needs B > 0");
            // F/N = b^2 e^{-4bJ} cosh(bB) / (sinh^2 bB + e^{-4bJ})^{3/2}
            const double ln_den =
                lse2(2.0 * log_sinh_abs(bB), -4.0 * bJ);
            return n * std::exp(2.0 * std::log(p.beta) - 4.0 * bJ +
                                log_cosh(bB) - 1.5 * ln_den);
        }
        case ParallelRegime::lowT: {
            if (p.B <= 0.0)
                throw Error(errc::regime_misuse,
                            "low-temperature form needs B > 0");
            // F = 4 N b^2 e^{-2bB}(e^{-2bB} + e^{-4bJ})
            return 4.0 * n * b2 *
                   std::exp(lse2(-4.0 * bB, -2.0 * bB - 4.0 * bJ));
        }
    }
    throw Error(errc::invalid_argument, "unknown regime");
}

double qfi_transverse(const IsingParams& p, TransverseMethod method) {
    validate(p);
    if (method == TransverseMethod::dense) {
        if (p.N > 12)
            throw Error(errc::invalid_argument,
                        "dense chain limited to 12 sites (2^N guard)");
        HermitianOperator h = dense_hamiltonian(p, 0.0, 0.0);
        HermitianOperator hp = local_sum(HermitianOperator(pauli_x()), p.N);
        return qfi_thermal(h, hp, p.beta).total;
    }

    TransferContext ctx = transfer_context(p);
    const double n = static_cast<double>(p.N);
    const double bB = p.beta * p.B;
    // F = 2N (lambda_+^{N-2} T_+ + lambda_-^{N-2} T_-)/(lambda_+^N + lambda_-^N)
    // with T_+- = v_+-^T (A Fmat A) v_+-, normalized by lambda_+^N and summed
    // in the log domain so beta*J ~ 1e3 cannot overflow.
    const double ln_a[2] = {-bB / 2.0, bB / 2.0};
    double ln_g[2][2];
    ln_g[0][0] = ln_flip_weight(p.beta, p.B - 2.0 * p.J);
    ln_g[0][1] = ln_g[1][0] = ln_flip_weight(p.beta, p.B);
    ln_g[1][1] = ln_flip_weight(p.beta, p.B + 2.0 * p.J);

    double u_plus = 0.0, u_minus = 0.0;
    const double vp[2] = {ctx.v_plus[0], ctx.v_plus[1]};
    const double vm[2] = {ctx.v_minus[0], ctx.v_minus[1]};
    const bool has_minus =
        ctx.lambda_minus_sign != 0 && ctx.ln_q != kNegInf;
    const double minus_parity =
        (ctx.lambda_minus_sign < 0 && (p.N - 2) % 2 != 0) ? -1.0 : 1.0;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const double base =
                ln_a[k] + ln_a[l] + ln_g[k][l] - 2.0 * ctx.ln_lambda_plus;
            if (vp[k] != 0.0 && vp[l] != 0.0)
                u_plus += std::exp(std::log(vp[k]) + std::log(vp[l]) + base);
            if (has_minus && vm[k] != 0.0 && vm[l] != 0.0) {
                const double sgn =
                    minus_parity * sign_of(vm[k]) * sign_of(vm[l]);
                u_minus += sgn * std::exp(std::log(std::abs(vm[k])) +
                                          std::log(std::abs(vm[l])) + base +
                                          (n - 2.0) * ctx.ln_q);
            }
        }
    double qn_signed = 0.0;
    if (has_minus) {
        qn_signed = std::exp(n * ctx.ln_q);
        if (ctx.lambda_minus_sign < 0 && p.N % 2 != 0) qn_signed = -qn_signed;
    }
    return 2.0 * n * (u_plus + u_minus) / (1.0 + qn_signed);
}

DataTable figure1_datasets(char variant) {
    DataTable t;
    if (variant == 'a') {
        t.columns = {"J", "N", "qfi_parallel", "bound_beta2N2"};
        const int points = 60;
        const double lo = 0.1, hi = 6.0;
        for (int n : {10, 30, 90}) {
            for (int i = 0; i < points; ++i) {
                const double j = lo + i * (hi - lo) / (points - 1);
                IsingParams p{n, j, 0.0, 1.0};
                const double nn = static_cast<double>(n);
                t.rows.push_back({j, nn, qfi_parallel(p), nn * nn});
            }
        }
        return t;
    }
    if (variant == 'b') {
        t.columns = {"beta", "qfi_parallel", "qfi_transverse", "bound_beta2N2",
                     "overlay_lowT"};
        const int points = 61;
        const double lo = std::log(0.05), hi = std::log(50.0);
        const int n = 50;
        const double j = 2.0, b = 0.05;
        const double overlay =
            n * n / (4.0 * (b + 2.0 * j) * (b + 2.0 * j));
        for (int i = 0; i < points; ++i) {
            const double beta = std::exp(lo + i * (hi - lo) / (points - 1));
            IsingParams p{n, j, b, beta};
            t.rows.push_back({beta, qfi_parallel(p),
                              qfi_transverse(p, TransverseMethod::transfer),
                              beta * beta * n * n, overlay});
        }
        return t;
    }
    throw Error(errc::invalid_argument, "figure variant must be 'a' or 'b'");
}

} // namespace thermoqfi
