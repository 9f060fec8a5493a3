#pragma once

#include <string>
#include <vector>

#include "thermoqfi/operator_core.hpp"

namespace thermoqfi {

// Periodic 1D Ising chain H = -J sum Z_i Z_{i+1} + B sum Z_i at inverse
// temperature beta. Index convention everywhere: first basis index <-> spin
// z = +1 (energy contribution +B per site).
struct IsingParams {
    int N = 3;       // sites, >= 3
    double J = 0.0;  // nearest-neighbour coupling
    double B = 0.0;  // longitudinal field
    double beta = 1.0;
};

// 2x2 transfer-matrix data. T = A*C*A with A = diag(e^{-beta B/2},
// e^{+beta B/2}) and C = [[e^{beta J}, e^{-beta J}], [e^{-beta J}, e^{beta J}]].
// Eigenvalues lambda_+ >= |lambda_-|, lambda_- >= 0 for J >= 0 (negative for
// antiferromagnetic J, tracked via lambda_minus_sign). Log-domain fields stay
// finite for beta*J up to ~1e3.
struct TransferContext {
    Eigen::Matrix2d A;
    Eigen::Matrix2d C;
    Eigen::Matrix2d Fmat;      // spin-flip insertion weights g(B-2J), g(B), g(B+2J)
    double ln_lambda_plus = 0.0;
    double ln_lambda_minus_abs = 0.0; // -inf when lambda_- = 0 (J = 0)
    int lambda_minus_sign = 0;        // sign(J), 0 when lambda_- = 0
    double mu_plus = 0.0;             // eigenvector slopes v+- ~ (mu+-, 1)
    double mu_minus = 0.0;
    Eigen::Vector2d v_plus;           // (cos psi, sin psi), orthonormal pair
    Eigen::Vector2d v_minus;          // (-sin psi, cos psi)
    double cos_2psi = 0.0;            // = -sinh(beta B)/s, magnetization kernel
    double sin_2psi = 0.0;            // = e^{-2 beta J}/s
    double ln_q = 0.0;                // ln(|lambda_-|/lambda_+), <= 0
};

TransferContext transfer_context(const IsingParams& p);

// Spin-flip insertion weight g(R) = sinh^2(beta R) / (R^2 cosh(beta R)),
// continuous across R = 0 where it equals beta^2.
double flip_weight(double beta, double R);

// Dense 2^N x 2^N Hamiltonian -J sum Z Z + (B + theta_Z) sum Z + theta_X sum X
// with periodic closure; N <= 12.
HermitianOperator dense_hamiltonian(const IsingParams& p, double theta_Z,
                                    double theta_X);

// ln Z = N ln lambda_+ + ln(1 + (lambda_-/lambda_+)^N); overflow-free for
// beta*J*N up to 1e5.
double partition_function_log(const IsingParams& p);

// QFI of the longitudinal field: beta^2 Var[sum Z] via the transfer-matrix
// correlation sum (resummed in closed form), equal to d^2(ln Z)/dB^2.
double qfi_parallel(const IsingParams& p);

enum class ParallelRegime { B0_exact, thermo, lowT };

// Closed-form limits of qfi_parallel. B0_exact needs B = 0; thermo and lowT
// need B > 0 (errc::regime_misuse otherwise).
double qfi_parallel_limits(const IsingParams& p, ParallelRegime regime);

enum class TransverseMethod { transfer, dense };

// QFI of a transverse-field perturbation sum X at theta_X = 0. transfer uses
// the two-insertion transfer formula in lambda_+-normalized log form; dense
// evaluates the generic thermal QFI against the 2^N Hamiltonian (N <= 12).
double qfi_transverse(const IsingParams& p, TransverseMethod method);

struct DataTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Pinned figure datasets.
//   'a': J in [0.1, 6] (60 points), beta = 1, B = 0, N in {10, 30, 90};
//        columns J, N, qfi_parallel, bound_beta2N2.
//   'b': beta log-spaced in [0.05, 50] (61 points), N = 50, J = 2, B = 0.05;
//        columns beta, qfi_parallel, qfi_transverse, bound_beta2N2,
//        overlay_lowT = N^2/(4(B+2J)^2).
DataTable figure1_datasets(char variant);

} // namespace thermoqfi
