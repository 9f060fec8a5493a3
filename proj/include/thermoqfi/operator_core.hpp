#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "thermoqfi/error.hpp"

namespace thermoqfi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using StateVector = Eigen::VectorXcd;

// Shared tolerances.
inline constexpr double kHermTol = 1e-12;        // max |M - M^dag| accepted on input
inline constexpr double kDegenRelTol = 1e-9;     // grouping, relative to max(1, range)
inline constexpr double kMinPopulation = 1e-300; // full-rank floor
inline constexpr int kMaxDim = 16384;            // 2^14 memory guard

// Dense Hermitian matrix, validated on construction.
class HermitianOperator {
public:
    // Throws errc::non_hermitian if max|m - m^dag| > kHermTol, or
    // errc::invalid_argument for empty/non-square/oversized input.
    explicit HermitianOperator(Matrix m);

    // (m + m^dag)/2 for matrices assembled from rounding-level-asymmetric
    // products; always passes validation.
    static HermitianOperator symmetrized(Matrix m);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const noexcept { return m_; }

private:
    struct unchecked_t {};
    HermitianOperator(Matrix m, unchecked_t) : m_(std::move(m)) {}
    Matrix m_;
};

// Spectral decomposition: values ascending, eigenvectors as columns of a
// unitary matrix. Phase convention: the largest-magnitude component of each
// column is real positive (first index wins ties), so results are
// deterministic across runs.
struct EigenSystem {
    RealVector values;
    Matrix vectors;
    int dim() const noexcept { return static_cast<int>(values.size()); }
};

// Thermal state in spectral form. populations[i] pairs with eigen.values[i];
// populations are nonnegative, non-increasing, and sum to 1. Entries can
// underflow to zero at extreme beta*range; operations that need full rank
// check against kMinPopulation and throw errc::rank_deficient_state.
struct GibbsState {
    double beta = 0.0;
    EigenSystem eigen;
    RealVector populations;
    int dim() const noexcept { return eigen.dim(); }
};

// Partition of a monotone value list into clusters separated by more than the
// absolute tolerance (kDegenRelTol * max(1, range) by default). groups hold
// contiguous index runs in input order; group_of maps index -> group.
struct DegeneracyPartition {
    std::vector<std::vector<int>> groups;
    std::vector<int> group_of;
    double tolerance = 0.0;
};

EigenSystem eigendecompose(const HermitianOperator& H);

GibbsState gibbs_state(const HermitianOperator& H, double beta);
GibbsState gibbs_state(EigenSystem es, double beta); // reuse a decomposition

// lambda_max - lambda_min.
double spectral_seminorm(const HermitianOperator& A);

// Tr[rho A^2] - Tr[rho A]^2.
double variance(const GibbsState& rho, const HermitianOperator& A);

// sum_k 1 x ... x h(site k) x ... x 1 on N sites; guard dim(h)^N <= kMaxDim.
HermitianOperator local_sum(const HermitianOperator& h, int N);

// Group a monotone (ascending or descending) value list; values within
// rel_tol * max(1, |range|) of their neighbour share a group.
DegeneracyPartition group_degenerate(const RealVector& monotone_values,
                                     double rel_tol = kDegenRelTol);

// sum_E P_E A P_E with projectors P_E onto the partition's groups of basis
// columns; returned in the same frame as A. Idempotent.
HermitianOperator dephase(const HermitianOperator& A, const EigenSystem& basis,
                          const DegeneracyPartition& part);

// Pauli matrices (z diag(1,-1); first basis index <-> spin up).
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

} // namespace thermoqfi
