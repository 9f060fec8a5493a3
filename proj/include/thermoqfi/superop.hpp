#pragma once

#include "thermoqfi/operator_core.hpp"

namespace thermoqfi {

// Multiplication superoperators acting entrywise in the state's eigenbasis.
// Composite denotes the composition Log o BuresInverse o Log, whose
// generalized variance gives the thermal QFI up to beta^2.
enum class SuperopKind { Bures, BuresInverse, Log, LogInverse, Composite };

// Entrywise coefficient for populations (p_i, p_j); log_ratio = ln p_i - ln p_j
// must be supplied from energies (beta*(E_j - E_i)) so it stays exact when
// populations underflow. same_group marks pairs in one degeneracy group, which
// take the removable-singularity limit (p_i for Log and Composite).
//   Bures: (p_i+p_j)/2            BuresInverse: 2/(p_i+p_j)
//   Log:   (p_i-p_j)/log_ratio    LogInverse:   its reciprocal
//   Composite: 2(p_i-p_j)^2 / (log_ratio^2 (p_i+p_j))
// Near-degenerate pairs (|log_ratio| < 1e-4) use a 4-term Taylor kernel.
double superop_coefficient(SuperopKind kind, double p_i, double p_j,
                           double log_ratio, bool same_group);

// Apply the superoperator to A. rho must be full rank (every population above
// kMinPopulation), else errc::rank_deficient_state.
HermitianOperator apply_superop(SuperopKind kind, const GibbsState& rho,
                                const HermitianOperator& A);

// Tr[A * Composite_rho[A]] - Tr[rho A]^2.
double generalized_variance(const GibbsState& rho, const HermitianOperator& A);

} // namespace thermoqfi
