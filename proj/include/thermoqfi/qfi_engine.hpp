#pragma once

#include "thermoqfi/operator_core.hpp"
#include "thermoqfi/superop.hpp"

namespace thermoqfi {

// Thermal QFI split into the classical part (variance of the dephased
// perturbation) and the coherent part (off-diagonal energy couplings).
struct QFIBreakdown {
    double total = 0.0;
    double diag = 0.0;
    double offdiag = 0.0;
};

// Symmetric logarithmic derivative, expressed in the state's eigenbasis;
// basis maps it back to the computational frame.
struct SLDOperator {
    HermitianOperator matrix;
    EigenSystem basis;
};

// d(rho)/d(theta) at theta = 0 for H(theta) = H + theta*Hprime:
// -beta*(Log_rho[Hprime] - rho*Tr[rho Hprime]); traceless by construction.
HermitianOperator rho_dot(const HermitianOperator& H,
                          const HermitianOperator& Hprime, double beta);

// Exact thermal QFI of the Gibbs state of H against the perturbation Hprime.
// total = diag + offdiag with
//   diag    = beta^2 * Var_rho[dephased Hprime]
//   offdiag = sum_{E_i<E_j} 4 (p_i-p_j)^2 |Hprime_ij|^2 / ((E_i-E_j)^2 (p_i+p_j))
// Degeneracy groups come from the energy partition.
QFIBreakdown qfi_thermal(const HermitianOperator& H,
                         const HermitianOperator& Hprime, double beta);
// Reuse path for sweeps sharing one decomposition of H.
QFIBreakdown qfi_thermal(const EigenSystem& es, const HermitianOperator& Hprime,
                         double beta);

// F = Tr[rho_dot * BuresInverse_rho[rho_dot]]; the independent evaluation
// path through the state derivative.
double qfi_from_rho_dot(const GibbsState& rho, const HermitianOperator& rho_dot);

// L = BuresInverse_rho[rho_dot], in rho's eigenbasis. Tr[rho L] = 0 and
// Tr[rho_dot L] = F hold by construction.
SLDOperator sld(const GibbsState& rho, const HermitianOperator& rho_dot);

// Classical Fisher information of a projective measurement in the given
// orthonormal basis: sum_k qdot_k^2 / q_k over outcome probabilities
// q_k = <k|rho|k>. Terms with q_k and |qdot_k| both below 1e-14 are dropped;
// q_k below 1e-14 with a live derivative is errc::singular_measurement.
double measurement_fisher(const HermitianOperator& H,
                          const HermitianOperator& Hprime, double beta,
                          const EigenSystem& basis);

// Effective Fisher information of the mean-value estimator of Hprime:
// beta^2 (Tr[A Log_rho[A]])^2 / Tr[A^2 rho] with A = Hprime - Tr[rho Hprime].
// Requires Var_rho[Hprime] > 1e-14, else errc::zero_variance.
double mean_value_fisher(const HermitianOperator& H,
                         const HermitianOperator& Hprime, double beta);

// beta -> infinity limit for a unique ground state:
// sum_{i>0} 4 |Hprime_0i|^2 / (E_i - E_0)^2.
double low_T_qfi(const HermitianOperator& H, const HermitianOperator& Hprime);

// Small-beta expansion. order 2: beta^2 (Tr[Hprime^2]/D - (Tr[Hprime]/D)^2);
// order 3 subtracts beta^3 Tr[Ht Htp^2]/D with Ht = H - (Tr H/D) 1 and
// Htp likewise. Warns on stderr when beta*spectral_range >= 0.5.
double high_T_qfi(const HermitianOperator& H, const HermitianOperator& Hprime,
                  double beta, int order = 3);

// QFI of e^{-iHt}|psi> against theta in H + theta*Hprime: 4 Var_psi[G] with
// G_jk = Hprime_jk * t on degenerate pairs and
// G_jk = Hprime_jk (1 - e^{-i(E_j-E_k)t}) / (i(E_j-E_k)) otherwise.
double dynamical_qfi(const HermitianOperator& H, const HermitianOperator& Hprime,
                     double t, const StateVector& psi);

} // namespace thermoqfi
