#include "thermoqfi/qfi_engine.hpp"

#include <cmath>
#include <iostream>

namespace thermoqfi {

namespace {

void check_dims(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim())
        throw Error(errc::dimension_mismatch, "operator dimensions differ");
}

void check_beta(double beta) {
    if (!std::isfinite(beta) || beta < 0.0)
        throw Error(errc::invalid_argument, "beta must be finite and nonnegative");
}

// Populations of exp(-beta H)/Z from eigenvalues, anchored at the ground
// energy so the largest weight is exactly representable.
RealVector populations_of(const RealVector& values, double beta) {
    const Eigen::Index d = values.size();
    RealVector p(d);
    const double e0 = values[0];
    double z = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        p[i] = std::exp(-beta * (values[i] - e0));
        z += p[i];
    }
    p /= z;
    return p;
}

QFIBreakdown qfi_split(const EigenSystem& es, const HermitianOperator& Hprime,
                       double beta) {
    check_beta(beta);
    if (es.dim() != Hprime.dim())
        throw Error(errc::dimension_mismatch, "operator dimensions differ");
    const int d = es.dim();
    RealVector p = populations_of(es.values, beta);
    for (int i = 0; i < d; ++i)
        if (p[i] < kMinPopulation)
            throw Error(errc::rank_deficient_state,
                        "gibbs population underflows at this beta");
    DegeneracyPartition part = group_degenerate(es.values);
    Matrix ae = es.vectors.adjoint() * Hprime.matrix() * es.vectors;

    double mean = 0.0;
    for (int i = 0; i < d; ++i) mean += p[i] * ae(i, i).real();

    // Centered second moment: summing p_i |(A - mean)_ij|^2 over same-group
    // pairs keeps the variance accurate when mean^2 nearly exhausts the raw
    // second moment (populations concentrated at large beta).
    double var = 0.0;
    double offdiag = 0.0;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            if (part.group_of[i] == part.group_of[j]) {
                const double w = (i == j)
                                     ? std::norm(ae(i, i) - mean)
                                     : std::norm(ae(i, j));
                var += p[i] * w;
            } else if (i < j) {
                const double w = std::norm(ae(i, j));
                const double dp = p[i] - p[j];
                const double de = es.values[i] - es.values[j];
                offdiag += 4.0 * dp * dp * w / (de * de * (p[i] + p[j]));
            }
        }

    QFIBreakdown out;
    out.diag = beta * beta * var;
    out.offdiag = offdiag;
    out.total = out.diag + out.offdiag;
    return out;
}

} // namespace

HermitianOperator rho_dot(const HermitianOperator& H,
                          const HermitianOperator& Hprime, double beta) {
    check_dims(H, Hprime);
    check_beta(beta);
    EigenSystem es = eigendecompose(H);
    const int d = es.dim();
    RealVector p = populations_of(es.values, beta);
    DegeneracyPartition part = group_degenerate(es.values);
    Matrix ae = es.vectors.adjoint() * Hprime.matrix() * es.vectors;
    double mean = 0.0;
    for (int i = 0; i < d; ++i) mean += p[i] * ae(i, i).real();
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            const double log_ratio = beta * (es.values[j] - es.values[i]);
            const double c = superop_coefficient(
                SuperopKind::Log, p[i], p[j], log_ratio,
                part.group_of[i] == part.group_of[j]);
            ae(i, j) *= -beta * c;
        }
    for (int i = 0; i < d; ++i) ae(i, i) += beta * p[i] * mean;
    Matrix back = es.vectors * ae * es.vectors.adjoint();
    return HermitianOperator::symmetrized(std::move(back));
}

QFIBreakdown qfi_thermal(const HermitianOperator& H,
                         const HermitianOperator& Hprime, double beta) {
    check_dims(H, Hprime);
    return qfi_split(eigendecompose(H), Hprime, beta);
}

QFIBreakdown qfi_thermal(const EigenSystem& es, const HermitianOperator& Hprime,
                         double beta) {
    return qfi_split(es, Hprime, beta);
}

namespace {

// A dense rho_dot matrix carries ~eps*norm representation noise in every
// entry. A pair whose populations and transformed matrix element are both
// below 1e-14 contributes nothing but that noise, which the 2/(p_i+p_j)
// weight would amplify without bound. Same floor as the measurement-term
// drop rule.
bool negligible_pair(double p_i, double p_j, Complex x) {
    return p_i + p_j < 2e-14 && std::abs(x) < 1e-14;
}

void check_full_rank(const GibbsState& rho, const char* what) {
    for (int i = 0; i < rho.dim(); ++i)
        if (rho.populations[i] < kMinPopulation)
            throw Error(errc::rank_deficient_state,
                        std::string("state population below 1e-300; ") + what +
                            " undefined");
}

} // namespace

double qfi_from_rho_dot(const GibbsState& rho, const HermitianOperator& rho_dot) {
    if (rho.dim() != rho_dot.dim())
        throw Error(errc::dimension_mismatch, "state and operator dimensions differ");
    check_full_rank(rho, "inverse superoperator");
    const Matrix& v = rho.eigen.vectors;
    Matrix re = v.adjoint() * rho_dot.matrix() * v;
    const int d = rho.dim();
    double fisher = 0.0;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            const double psum = rho.populations[i] + rho.populations[j];
            if (negligible_pair(rho.populations[i], rho.populations[j], re(i, j)))
                continue;
            fisher += std::norm(re(i, j)) * 2.0 / psum;
        }
    return fisher;
}

SLDOperator sld(const GibbsState& rho, const HermitianOperator& rho_dot) {
    if (rho.dim() != rho_dot.dim())
        throw Error(errc::dimension_mismatch, "state and operator dimensions differ");
    check_full_rank(rho, "SLD");
    const Matrix& v = rho.eigen.vectors;
    Matrix le = v.adjoint() * rho_dot.matrix() * v;
    const int d = rho.dim();
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            if (negligible_pair(rho.populations[i], rho.populations[j], le(i, j))) {
                le(i, j) = 0.0;
                continue;
            }
            le(i, j) *= 2.0 / (rho.populations[i] + rho.populations[j]);
        }
    return SLDOperator{HermitianOperator::symmetrized(std::move(le)), rho.eigen};
}

double measurement_fisher(const HermitianOperator& H,
                          const HermitianOperator& Hprime, double beta,
                          const EigenSystem& basis) {
    check_dims(H, Hprime);
    if (basis.dim() != H.dim())
        throw Error(errc::dimension_mismatch, "basis dimension differs");
    const Matrix& w = basis.vectors;
    if ((w.adjoint() * w - Matrix::Identity(w.rows(), w.cols())).norm() > 1e-10)
        throw Error(errc::invalid_argument, "measurement basis not orthonormal");
    EigenSystem es = eigendecompose(H);
    RealVector p = populations_of(es.values, beta);
    Matrix rho = es.vectors * p.asDiagonal() * es.vectors.adjoint();
    HermitianOperator rd = rho_dot(H, Hprime, beta);
    double fisher = 0.0;
    for (int k = 0; k < H.dim(); ++k) {
        const double q = w.col(k).dot(rho * w.col(k)).real();
        const double qd = w.col(k).dot(rd.matrix() * w.col(k)).real();
        if (q < 1e-14) {
            if (std::abs(qd) < 1e-14) continue;  // 0^2/0 limit: no contribution
            throw Error(errc::singular_measurement,
                        "outcome probability vanishes but its derivative does not");
        }
        fisher += qd * qd / q;
    }
    return fisher;
}

double mean_value_fisher(const HermitianOperator& H,
                         const HermitianOperator& Hprime, double beta) {
    check_dims(H, Hprime);
    check_beta(beta);
    EigenSystem es = eigendecompose(H);
    const int d = es.dim();
    RealVector p = populations_of(es.values, beta);
    DegeneracyPartition part = group_degenerate(es.values);
    Matrix ae = es.vectors.adjoint() * Hprime.matrix() * es.vectors;
    double mean = 0.0;
    for (int i = 0; i < d; ++i) mean += p[i] * ae(i, i).real();
    for (int i = 0; i < d; ++i) ae(i, i) -= mean;
    double var = 0.0;   // Tr[rho A^2] for the centered A
    double num = 0.0;   // Tr[A J_L[A]]
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            const double w = std::norm(ae(i, j));
            var += p[i] * w;
            const double log_ratio = beta * (es.values[j] - es.values[i]);
            num += superop_coefficient(SuperopKind::Log, p[i], p[j], log_ratio,
                                       part.group_of[i] == part.group_of[j]) *
                   w;
        }
    if (var <= 1e-14)
        throw Error(errc::zero_variance,
                    "perturbation has vanishing variance in this state");
    return beta * beta * num * num / var;
}

double low_T_qfi(const HermitianOperator& H, const HermitianOperator& Hprime) {
    check_dims(H, Hprime);
    EigenSystem es = eigendecompose(H);
    const int d = es.dim();
    if (d < 2) return 0.0;
    const double tol =
        kDegenRelTol * std::max(1.0, std::abs(es.values[d - 1] - es.values[0]));
    if (es.values[1] - es.values[0] <= tol)
        throw Error(errc::degenerate_ground, "ground state is degenerate");
    StateVector y = es.vectors.adjoint() * (Hprime.matrix() * es.vectors.col(0));
    double f = 0.0;
    for (int i = 1; i < d; ++i) {
        const double gap = es.values[i] - es.values[0];
        f += 4.0 * std::norm(y[i]) / (gap * gap);
    }
    return f;
}

double high_T_qfi(const HermitianOperator& H, const HermitianOperator& Hprime,
                  double beta, int order) {
    check_dims(H, Hprime);
    check_beta(beta);
    if (order != 2 && order != 3)
        throw Error(errc::invalid_argument, "expansion order must be 2 or 3");
    const double d = static_cast<double>(H.dim());
    const double range = 2.0 * spectral_seminorm(H);
    if (beta * range >= 0.5)
        std::cerr << "warning: high-temperature expansion used at beta*range = "
                  << beta * range << "\n";
    const double tavg = Hprime.matrix().trace().real() / d;
    double f = beta * beta *
               (Hprime.matrix().squaredNorm() / d - tavg * tavg);
    if (order == 3) {
        const double havg = H.matrix().trace().real() / d;
        const Eigen::Index n = H.dim();
        Matrix ht = H.matrix() - havg * Matrix::Identity(n, n);
        Matrix htp = Hprime.matrix() - tavg * Matrix::Identity(n, n);
        const double third = (ht * htp * htp).trace().real() / d;
        f -= beta * beta * beta * third;
    }
    return f;
}

double dynamical_qfi(const HermitianOperator& H, const HermitianOperator& Hprime,
                     double t, const StateVector& psi) {
    check_dims(H, Hprime);
    if (psi.size() != H.dim())
        throw Error(errc::dimension_mismatch, "state vector dimension differs");
    if (std::abs(psi.norm() - 1.0) > 1e-10)
        throw Error(errc::invalid_argument, "state vector is not normalized");
    EigenSystem es = eigendecompose(H);
    const int d = es.dim();
    DegeneracyPartition part = group_degenerate(es.values);
    Matrix g = es.vectors.adjoint() * Hprime.matrix() * es.vectors;
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
            if (part.group_of[j] == part.group_of[k]) {
                g(j, k) *= t;
            } else {
                const double de = es.values[j] - es.values[k];
                const Complex phase = -std::exp(Complex(0.0, -de * t));
                g(j, k) *= (1.0 + phase) / Complex(0.0, de);
            }
        }
    StateVector phi = es.vectors.adjoint() * psi;
    StateVector w = g * phi;
    const double mean = phi.dot(w).real();
    const double second = w.squaredNorm();
    return 4.0 * std::max(second - mean * mean, 0.0);
}

} // namespace thermoqfi
