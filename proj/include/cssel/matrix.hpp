#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <cssel/errors.hpp>

namespace cssel {

/// Dense real matrix, row-major storage. The universal carrier type.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline void require_finite(const Matrix& A, const char* where) {
	if (!A.allFinite()) throw InvalidInput(std::string(where) + ": non-finite entries");
}

/**
 * @brief Thin SVD truncated at the numerical rank.
 *
 * U is m x rank and V is n x rank with orthonormal columns; sigma holds the
 * rank positive singular values in nonincreasing order. Singular values at or
 * below max(m,n) * machine_epsilon * sigma_max are treated as zero.
 */
struct Svd {
	Matrix U;
	Vector sigma;
	Matrix V;
	Index rank = 0;
};

inline double rank_tolerance(Index rows, Index cols, double sigma_max) {
	return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * sigma_max;
}

namespace detail {

// Full factors of the thin SVD before rank truncation. Jacobi for small
// problems, divide-and-conquer above; both are deterministic for fixed input.
inline void svd_factors(const Matrix& A, Matrix& U, Vector& sigma, Matrix& V) {
	if (std::min(A.rows(), A.cols()) <= 32) {
		Eigen::JacobiSVD<Matrix> dec(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
		U = dec.matrixU();
		sigma = dec.singularValues();
		V = dec.matrixV();
	} else {
		Eigen::BDCSVD<Matrix> dec(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
		U = dec.matrixU();
		sigma = dec.singularValues();
		V = dec.matrixV();
	}
}

inline Vector singular_values_only(const Matrix& A) {
	if (std::min(A.rows(), A.cols()) <= 32) {
		Eigen::JacobiSVD<Matrix> dec(A);
		return dec.singularValues();
	}
	Eigen::BDCSVD<Matrix> dec(A);
	return dec.singularValues();
}

}  // namespace detail

/// Thin SVD with rank thresholding. A zero matrix yields rank 0 and empty
/// factors (m x 0, 0, n x 0).
inline Svd svd(const Matrix& A) {
	if (A.size() == 0) throw InvalidInput("svd: empty matrix");
	require_finite(A, "svd");
	Matrix U, V;
	Vector sigma;
	detail::svd_factors(A, U, sigma, V);
	const double tol = rank_tolerance(A.rows(), A.cols(), sigma.size() > 0 ? sigma(0) : 0.0);
	Index rank = 0;
	while (rank < sigma.size() && sigma(rank) > tol) ++rank;
	Svd out;
	out.rank = rank;
	out.U = U.leftCols(rank);
	out.sigma = sigma.head(rank);
	out.V = V.leftCols(rank);
	return out;
}

/// Best rank-k approximation U_k diag(sigma_k) V_k^T from a computed SVD.
/// k >= rank reproduces the full thresholded reconstruction.
inline Matrix truncate_rank_k(const Svd& S, Index k) {
	if (k < 0) throw InvalidInput("truncate_rank_k: negative rank");
	const Index t = std::min(k, S.rank);
	return S.U.leftCols(t) * S.sigma.head(t).asDiagonal() * S.V.leftCols(t).transpose();
}

/// Moore-Penrose pseudo-inverse via the thresholded SVD.
inline Matrix pseudo_inverse(const Matrix& A) {
	const Svd S = svd(A);
	Vector inv_sigma(S.rank);
	for (Index i = 0; i < S.rank; ++i) inv_sigma(i) = 1.0 / S.sigma(i);
	return S.V * inv_sigma.asDiagonal() * S.U.transpose();
}

/// Orthonormal basis Q of range(C): Q^T Q = I, cols(Q) = rank(C). Computed
/// from the SVD so the rank cutoff is the same everywhere.
inline Matrix orthonormal_basis(const Matrix& C) {
	if (C.size() == 0) throw InvalidInput("orthonormal_basis: empty matrix");
	return svd(C).U;
}

/// Largest singular value.
inline double spectral_norm(const Matrix& A) {
	if (A.size() == 0) throw InvalidInput("spectral_norm: empty matrix");
	require_finite(A, "spectral_norm");
	const Vector sigma = detail::singular_values_only(A);
	return sigma.size() > 0 ? sigma(0) : 0.0;
}

/// Sum of squared entries.
inline double frobenius_norm_sq(const Matrix& A) {
	require_finite(A, "frobenius_norm_sq");
	return A.squaredNorm();
}

/**
 * @brief Symmetric eigendecomposition, eigenvalues ascending.
 *
 * Exactly diagonal input (every off-diagonal entry == 0.0) is decomposed
 * exactly: the eigenvalues are the stably sorted diagonal and the
 * eigenvectors a permutation. This keeps scores computed from the
 * eigendecomposition of an accumulated diagonal matrix bit-identical to
 * closed-form shortcuts on its diagonal, which the general solver's internal
 * rescaling would break. Everything else goes through the standard solver.
 */
struct SymEig {
	Vector lambda;  ///< ascending
	Matrix Q;       ///< columns match lambda
};

inline bool is_exactly_diagonal(const Matrix& S) {
	for (Index i = 0; i < S.rows(); ++i)
		for (Index j = 0; j < S.cols(); ++j)
			if (i != j && S(i, j) != 0.0) return false;
	return true;
}

/// Stable ascending sort permutation of the entries of d.
inline std::vector<Index> sort_permutation_ascending(const Vector& d) {
	std::vector<Index> perm(static_cast<std::size_t>(d.size()));
	std::iota(perm.begin(), perm.end(), Index{0});
	std::stable_sort(perm.begin(), perm.end(), [&d](Index a, Index b) { return d(a) < d(b); });
	return perm;
}

inline SymEig sym_eig(const Matrix& S) {
	if (S.rows() != S.cols()) throw InvalidInput("sym_eig: square matrix required");
	SymEig out;
	const Index n = S.rows();
	if (is_exactly_diagonal(S)) {
		const Vector diag = S.diagonal();
		const std::vector<Index> perm = sort_permutation_ascending(diag);
		out.lambda.resize(n);
		out.Q = Matrix::Zero(n, n);
		for (Index j = 0; j < n; ++j) {
			out.lambda(j) = diag(perm[static_cast<std::size_t>(j)]);
			out.Q(perm[static_cast<std::size_t>(j)], j) = 1.0;
		}
		return out;
	}
	Eigen::SelfAdjointEigenSolver<Matrix> es(S);
	if (es.info() != Eigen::Success) throw NumericalBreakdown("sym_eig: eigendecomposition failed");
	out.lambda = es.eigenvalues();
	out.Q = es.eigenvectors();
	return out;
}

/// Columns of A selected by (sorted, distinct, in-range) indices.
inline Matrix gather_columns(const Matrix& A, const std::vector<Index>& indices) {
	Matrix C(A.rows(), static_cast<Index>(indices.size()));
	for (std::size_t i = 0; i < indices.size(); ++i) {
		const Index j = indices[i];
		if (j < 0 || j >= A.cols()) throw InvalidInput("gather_columns: index out of range");
		C.col(static_cast<Index>(i)) = A.col(j);
	}
	return C;
}

}  // namespace cssel
