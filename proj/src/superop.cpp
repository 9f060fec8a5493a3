#include "thermoqfi/superop.hpp"

#include <cmath>

namespace thermoqfi {

namespace {

// (x - 1)/ln x around x = 1, as a series in u = x - 1; the direct quotient
// loses ~8 digits for |ln x| < 1e-4.
double log_mean_kernel(double u) {
    return 1.0 + u * (0.5 + u * (-1.0 / 12.0 + u * (1.0 / 24.0)));
}

double log_coefficient(double p_i, double p_j, double log_ratio, bool same_group) {
    if (same_group) return p_i;
    if (std::abs(log_ratio) < 1e-4) {
        // c = p_j (x-1)/ln x with x = p_i/p_j = e^{log_ratio}.
        double u = std::expm1(log_ratio);
        return p_j * log_mean_kernel(u);
    }
    return (p_i - p_j) / log_ratio;
}

void check_rank(const GibbsState& rho) {
    for (int i = 0; i < rho.dim(); ++i)
        if (rho.populations[i] < kMinPopulation)
            throw Error(errc::rank_deficient_state,
                        "state population below 1e-300; superoperator undefined");
}

} // namespace

double superop_coefficient(SuperopKind kind, double p_i, double p_j,
                           double log_ratio, bool same_group) {
    switch (kind) {
        case SuperopKind::Bures:
            return (p_i + p_j) / 2.0;
        case SuperopKind::BuresInverse:
            return 2.0 / (p_i + p_j);
        case SuperopKind::Log:
            return log_coefficient(p_i, p_j, log_ratio, same_group);
        case SuperopKind::LogInverse:
            return 1.0 / log_coefficient(p_i, p_j, log_ratio, same_group);
        case SuperopKind::Composite: {
            // 2 (p_i-p_j)^2 / (log_ratio^2 (p_i+p_j)) = c_log^2 * 2/(p_i+p_j),
            // removable singularities included.
            double c = log_coefficient(p_i, p_j, log_ratio, same_group);
            return c * c * 2.0 / (p_i + p_j);
        }
    }
    throw Error(errc::invalid_argument, "unknown superoperator kind");
}

HermitianOperator apply_superop(SuperopKind kind, const GibbsState& rho,
                                const HermitianOperator& A) {
    if (A.dim() != rho.dim())
        throw Error(errc::dimension_mismatch, "state and operator dimensions differ");
    check_rank(rho);
    // Gibbs populations tie exactly when energies do, so degenerate pairs are
    // detected on the energy axis where the tolerance is scale-correct.
    DegeneracyPartition part = group_degenerate(rho.eigen.values);
    const Matrix& v = rho.eigen.vectors;
    Matrix ae = v.adjoint() * A.matrix() * v;
    const int d = rho.dim();
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            const double log_ratio =
                rho.beta * (rho.eigen.values[j] - rho.eigen.values[i]);
            ae(i, j) *= superop_coefficient(
                kind, rho.populations[i], rho.populations[j], log_ratio,
                part.group_of[i] == part.group_of[j]);
        }
    Matrix back = v * ae * v.adjoint();
    return HermitianOperator::symmetrized(std::move(back));
}

double generalized_variance(const GibbsState& rho, const HermitianOperator& A) {
    const Matrix& v = rho.eigen.vectors;
    double mean = 0.0;
    for (int i = 0; i < rho.dim(); ++i)
        mean += rho.populations[i] * v.col(i).dot(A.matrix() * v.col(i)).real();
    // The composite map sends the identity to rho, so subtracting the mean
    // from A up front equals Tr[A J[A]] - Tr[rho A]^2 exactly while avoiding
    // the cancellation of two near-equal O(mean^2) terms.
    HermitianOperator centered = HermitianOperator::symmetrized(
        A.matrix() - mean * Matrix::Identity(A.dim(), A.dim()));
    HermitianOperator ja = apply_superop(SuperopKind::Composite, rho, centered);
    return centered.matrix().cwiseProduct(ja.matrix().transpose()).sum().real();
}

} // namespace thermoqfi
