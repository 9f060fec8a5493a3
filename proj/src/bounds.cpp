#include "thermoqfi/bounds.hpp"

#include <cmath>

namespace thermoqfi {

namespace {

void require_nonnegative(double x, const char* what) {
    if (!std::isfinite(x) || x < 0.0)
        throw Error(errc::invalid_argument,
                    std::string(what) + " must be finite and nonnegative");
}

// Eigendecomposition of Hprime with unique extremal eigenvalues; shared
// precondition of both saturator constructions.
EigenSystem extremal_checked(const HermitianOperator& Hprime) {
    EigenSystem es = eigendecompose(Hprime);
    const int d = es.dim();
    if (d < 2)
        throw Error(errc::degenerate_extremal,
                    "extremal eigenvalues coincide in dimension 1");
    const double tol =
        kDegenRelTol * std::max(1.0, std::abs(es.values[d - 1] - es.values[0]));
    if (es.values[1] - es.values[0] <= tol ||
        es.values[d - 1] - es.values[d - 2] <= tol)
        throw Error(errc::degenerate_extremal,
                    "extremal eigenvalues of the perturbation are degenerate");
    return es;
}

} // namespace

const char* bound_kind_name(BoundKind k) noexcept {
    switch (k) {
        case BoundKind::FiniteT: return "finite_T";
        case BoundKind::LocalFiniteT: return "local_finite_T";
        case BoundKind::Gapped: return "gapped";
        case BoundKind::Dynamical: return "dynamical";
        case BoundKind::ConstrainedVariance: return "constrained_variance";
        case BoundKind::ClassicalDecay: return "classical_decay";
    }
    return "unknown";
}

BoundReport make_report(BoundKind kind, double bound,
                        std::optional<double> achieved) {
    BoundReport r;
    r.kind = kind;
    r.bound = bound;
    r.achieved = achieved;
    r.margin = achieved ? bound - *achieved : 0.0;
    return r;
}

double finite_T_bound(const HermitianOperator& Hprime, double beta) {
    require_nonnegative(beta, "beta");
    const double s = spectral_seminorm(Hprime);
    return beta * beta * s * s / 4.0;
}

double local_bound(double h_seminorm, int N, double beta) {
    require_nonnegative(h_seminorm, "h_seminorm");
    require_nonnegative(beta, "beta");
    if (N < 0) throw Error(errc::invalid_argument, "N must be nonnegative");
    const double ns = h_seminorm * static_cast<double>(N);
    return beta * beta * ns * ns / 4.0;
}

double gapped_bound(const HermitianOperator& Hprime, double Delta) {
    if (!std::isfinite(Delta) || Delta <= 0.0)
        throw Error(errc::invalid_argument, "gap must be positive");
    const double s = spectral_seminorm(Hprime);
    return s * s / (Delta * Delta);
}

double dynamical_bound(const HermitianOperator& Hprime, double t) {
    require_nonnegative(t, "t");
    const double s = spectral_seminorm(Hprime);
    return t * t * s * s;
}

double constrained_variance_bound(double p0, double seminorm) {
    if (!std::isfinite(p0) || p0 < 0.5 || p0 > 1.0)
        throw Error(errc::invalid_argument,
                    "largest population must lie in [1/2, 1]");
    require_nonnegative(seminorm, "seminorm");
    return p0 * (1.0 - p0) * seminorm * seminorm;
}

double classical_decay_bound(int D, double beta, double Delta, double seminorm) {
    if (D < 1) throw Error(errc::invalid_argument, "dimension must be positive");
    require_nonnegative(beta, "beta");
    if (!std::isfinite(Delta) || Delta <= 0.0)
        throw Error(errc::invalid_argument, "gap must be positive");
    require_nonnegative(seminorm, "seminorm");
    return beta * beta * static_cast<double>(D - 1) * std::exp(-beta * Delta) *
           seminorm * seminorm;
}

HermitianOperator commuting_saturator(const HermitianOperator& Hprime,
                                      double epsilon, double eta) {
    if (!(eta > epsilon))
        throw Error(errc::invalid_argument,
                    "orthocomplement energy must exceed the extremal energy");
    EigenSystem es = extremal_checked(Hprime);
    const int d = es.dim();
    RealVector energies = RealVector::Constant(d, eta);
    energies[0] = epsilon;
    energies[d - 1] = epsilon;
    Matrix h = es.vectors * energies.asDiagonal() * es.vectors.adjoint();
    return HermitianOperator::symmetrized(std::move(h));
}

HermitianOperator gapped_saturator(const HermitianOperator& Hprime, double Delta,
                                   double rest_energy) {
    if (!std::isfinite(Delta) || Delta <= 0.0)
        throw Error(errc::invalid_argument, "gap must be positive");
    if (!(rest_energy >= Delta))
        throw Error(errc::invalid_argument,
                    "rest energy must be at least the gap");
    EigenSystem es = extremal_checked(Hprime);
    const int d = es.dim();
    const StateVector vmin = es.vectors.col(0);
    const StateVector vmax = es.vectors.col(d - 1);
    const StateVector excited = (vmax - vmin) / std::sqrt(2.0);
    // Ground level sits at zero; everything outside span{|max>, |min>} keeps
    // its Hprime eigenvector and moves to rest_energy.
    Matrix h = Delta * (excited * excited.adjoint()) +
               rest_energy * (Matrix::Identity(d, d) -
                              vmax * vmax.adjoint() - vmin * vmin.adjoint());
    return HermitianOperator::symmetrized(std::move(h));
}

} // namespace thermoqfi
