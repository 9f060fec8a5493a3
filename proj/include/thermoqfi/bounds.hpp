#pragma once

#include <optional>

#include "thermoqfi/operator_core.hpp"

namespace thermoqfi {

enum class BoundKind {
    FiniteT,
    LocalFiniteT,
    Gapped,
    Dynamical,
    ConstrainedVariance,
    ClassicalDecay,
};

const char* bound_kind_name(BoundKind k) noexcept;

// A bound value with, optionally, the QFI actually achieved and the margin
// bound - achieved. Valid reports keep margin >= -1e-9 * max(1, bound).
struct BoundReport {
    BoundKind kind = BoundKind::FiniteT;
    double bound = 0.0;
    std::optional<double> achieved;
    double margin = 0.0;
};

BoundReport make_report(BoundKind kind, double bound,
                        std::optional<double> achieved = std::nullopt);

// beta^2 ||Hprime||^2 / 4 (seminorm ||.|| = spectral spread).
double finite_T_bound(const HermitianOperator& Hprime, double beta);

// beta^2 h_seminorm^2 N^2 / 4 for N-site sums of one-site terms.
double local_bound(double h_seminorm, int N, double beta);

// ||Hprime||^2 / Delta^2 for a unique ground state below gap Delta.
double gapped_bound(const HermitianOperator& Hprime, double Delta);

// t^2 ||Hprime||^2 for unitary evolution of duration t.
double dynamical_bound(const HermitianOperator& Hprime, double t);

// p0 (1 - p0) seminorm^2 for states with largest population p0 in [1/2, 1].
double constrained_variance_bound(double p0, double seminorm);

// beta^2 (D-1) e^{-beta*Delta} seminorm^2; bounds the diagonal (classical)
// QFI component of a gapped commuting configuration.
double classical_decay_bound(int D, double beta, double Delta, double seminorm);

// Control Hamiltonian commuting with Hprime that saturates the finite-T bound
// as beta*(eta - epsilon) grows: extremal eigenvectors of Hprime at energy
// epsilon, orthocomplement at eta. Requires eta > epsilon and nondegenerate
// extremal eigenvalues (errc::degenerate_extremal otherwise).
HermitianOperator commuting_saturator(const HermitianOperator& Hprime,
                                      double epsilon, double eta);

// Control Hamiltonian saturating the gapped bound: ground state
// (|max> + |min>)/sqrt(2) at energy 0, first excited (|max> - |min>)/sqrt(2)
// at Delta, remaining eigenvectors of Hprime at rest_energy >= Delta.
HermitianOperator gapped_saturator(const HermitianOperator& Hprime, double Delta,
                                   double rest_energy);

} // namespace thermoqfi
