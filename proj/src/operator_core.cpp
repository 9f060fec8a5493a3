#include "thermoqfi/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#ifdef THERMOQFI_USE_LAPACKE
#include <lapacke.h>
#endif

namespace thermoqfi {

namespace {

double max_asymmetry(const Matrix& m) {
    // Largest |m_ij - conj(m_ji)| over the upper triangle (incl. diagonal).
    double worst = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    return worst;
}

bool strictly_diagonal(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
    return true;
}

void fix_phases(Matrix& vectors) {
    // Largest-magnitude component of each column made real positive; the
    // first index wins exact ties, so output is deterministic.
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            double a = std::abs(vectors(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        Complex z = vectors(arg, j);
        if (best > 0.0) vectors.col(j) *= std::conj(z) / best;
    }
}

EigenSystem diagonal_eigensystem(const Matrix& m) {
    const int d = static_cast<int>(m.rows());
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return m(a, a).real() < m(b, b).real();
    });
    EigenSystem es;
    es.values.resize(d);
    es.vectors = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        es.values[j] = m(order[j], order[j]).real();
        es.vectors(order[j], j) = 1.0;
    }
    return es;
}

#ifdef THERMOQFI_USE_LAPACKE
bool lapack_eigh(const Matrix& m, EigenSystem& es, bool want_vectors) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    Matrix a = m; // column-major scratch, overwritten with eigenvectors
    es.values.resize(n);
    lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n, es.values.data());
    if (info != 0) return false;
    if (want_vectors) es.vectors = std::move(a);
    return true;
}
#endif

RealVector eigenvalues_only(const HermitianOperator& H) {
    if (strictly_diagonal(H.matrix())) {
        RealVector v = H.matrix().diagonal().real();
        std::sort(v.begin(), v.end());
        return v;
    }
#ifdef THERMOQFI_USE_LAPACKE
    EigenSystem es;
    if (lapack_eigh(H.matrix(), es, false)) return es.values;
#endif
    Eigen::SelfAdjointEigenSolver<Matrix> solver(H.matrix(),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

} // namespace

HermitianOperator::HermitianOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
        throw Error(errc::invalid_argument, "operator must be square and nonempty");
    if (m_.rows() > kMaxDim)
        throw Error(errc::invalid_argument,
                    "operator dimension exceeds the 2^14 guard");
    double asym = max_asymmetry(m_);
    if (!(asym <= kHermTol)) {
        std::ostringstream msg;
        msg << "operator not Hermitian: max asymmetry " << asym;
        throw Error(errc::non_hermitian, msg.str());
    }
}

HermitianOperator HermitianOperator::symmetrized(Matrix m) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw Error(errc::invalid_argument, "operator must be square and nonempty");
    Matrix h = (m + m.adjoint()) / 2.0;
    return HermitianOperator(std::move(h), unchecked_t{});
}

EigenSystem eigendecompose(const HermitianOperator& H) {
    EigenSystem es;
    if (strictly_diagonal(H.matrix())) {
        es = diagonal_eigensystem(H.matrix());
        return es;
    }
#ifdef THERMOQFI_USE_LAPACKE
    if (lapack_eigh(H.matrix(), es, true)) {
        fix_phases(es.vectors);
        return es;
    }
#endif
    Eigen::SelfAdjointEigenSolver<Matrix> solver(H.matrix());
    if (solver.info() != Eigen::Success)
        throw Error(errc::invalid_argument, "eigendecomposition failed to converge");
    es.values = solver.eigenvalues();
    es.vectors = solver.eigenvectors();
    fix_phases(es.vectors);
    return es;
}

GibbsState gibbs_state(EigenSystem es, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw Error(errc::invalid_argument, "beta must be finite and >= 0");
    const int d = es.dim();
    GibbsState rho;
    rho.beta = beta;
    rho.populations.resize(d);
    // Weights relative to the ground energy survive beta up to ~1e3.
    const double e0 = es.values[0];
    double z = 0.0;
    for (int i = 0; i < d; ++i) {
        double w = std::exp(-beta * (es.values[i] - e0));
        rho.populations[i] = w;
        z += w;
    }
    rho.populations /= z;
    rho.eigen = std::move(es);
    return rho;
}

GibbsState gibbs_state(const HermitianOperator& H, double beta) {
    return gibbs_state(eigendecompose(H), beta);
}

double spectral_seminorm(const HermitianOperator& A) {
    RealVector v = eigenvalues_only(A);
    return v[v.size() - 1] - v[0];
}

double variance(const GibbsState& rho, const HermitianOperator& A) {
    if (A.dim() != rho.dim())
        throw Error(errc::dimension_mismatch, "state and operator dimensions differ");
    const Matrix& v = rho.eigen.vectors;
    Matrix w = A.matrix() * v;
    double second = 0.0;
    double mean = 0.0;
    for (int i = 0; i < rho.dim(); ++i) {
        const double p = rho.populations[i];
        second += p * w.col(i).squaredNorm();
        mean += p * v.col(i).dot(w.col(i)).real();
    }
    return std::max(second - mean * mean, 0.0);
}

HermitianOperator local_sum(const HermitianOperator& h, int N) {
    if (N < 1) throw Error(errc::invalid_argument, "site count must be >= 1");
    const long d = h.dim();
    long total = 1;
    for (int k = 0; k < N; ++k) {
        total *= d;
        if (total > kMaxDim)
            throw Error(errc::invalid_argument,
                        "local_sum dimension exceeds the 2^14 guard");
    }
    Matrix out = Matrix::Zero(total, total);
    // Site k contributes h at entries ((a,i,b),(a,j,b)) with a indexing the
    // k leading sites and b the N-1-k trailing ones.
    for (int k = 0; k < N; ++k) {
        long lead = 1;
        for (int t = 0; t < k; ++t) lead *= d;
        const long trail = total / (lead * d);
        for (long a = 0; a < lead; ++a)
            for (long i = 0; i < d; ++i)
                for (long j = 0; j < d; ++j) {
                    const Complex hij = h.matrix()(i, j);
                    if (hij == Complex(0.0, 0.0)) continue;
                    const long row0 = (a * d + i) * trail;
                    const long col0 = (a * d + j) * trail;
                    for (long b = 0; b < trail; ++b)
                        out(row0 + b, col0 + b) += hij;
                }
    }
    return HermitianOperator(std::move(out));
}

DegeneracyPartition group_degenerate(const RealVector& monotone_values,
                                     double rel_tol) {
    const int d = static_cast<int>(monotone_values.size());
    if (d == 0) throw Error(errc::invalid_argument, "empty value list");
    DegeneracyPartition part;
    const double range = std::abs(monotone_values[d - 1] - monotone_values[0]);
    part.tolerance = rel_tol * std::max(1.0, range);
    part.group_of.resize(d);
    part.groups.push_back({0});
    part.group_of[0] = 0;
    for (int i = 1; i < d; ++i) {
        if (std::abs(monotone_values[i] - monotone_values[i - 1]) > part.tolerance)
            part.groups.emplace_back();
        part.groups.back().push_back(i);
        part.group_of[i] = static_cast<int>(part.groups.size()) - 1;
    }
    return part;
}

HermitianOperator dephase(const HermitianOperator& A, const EigenSystem& basis,
                          const DegeneracyPartition& part) {
    const int d = A.dim();
    if (basis.dim() != d || static_cast<int>(part.group_of.size()) != d)
        throw Error(errc::dimension_mismatch,
                    "operator, basis, and partition dimensions differ");
    Matrix ae = basis.vectors.adjoint() * A.matrix() * basis.vectors;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            if (part.group_of[i] != part.group_of[j]) ae(i, j) = 0.0;
    Matrix back = basis.vectors * ae * basis.vectors.adjoint();
    return HermitianOperator::symmetrized(std::move(back));
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

} // namespace thermoqfi
