#pragma once

#include <cssel/matrix.hpp>

namespace cssel {

/**
 * @brief Best rank-k approximation of A restricted to the column space of C.
 *
 * Built as Q (Q^T A)_k where Q is an orthonormal basis of range(C). This is
 * the exact Frobenius-norm optimum over range(C) and a factor-sqrt(2)
 * approximation of the (intractable) spectral-norm optimum.
 */
struct ProjectionResult {
	Matrix Q;       ///< orthonormal basis of range(C), m x c
	Matrix W_k;     ///< (Q^T A)_k, c x n
	Matrix approx;  ///< Q * W_k, m x n, rank <= k
	Matrix Z;       ///< right singular vectors of (Q^T A)_k, n x min(k, rank(Q^T A))
};

inline ProjectionResult project_rank_k(const Matrix& A, const Matrix& C, Index k) {
	if (k < 1) throw InvalidInput("project_rank_k: k must be >= 1");
	if (C.cols() < 1) throw InvalidInput("project_rank_k: C needs at least one column");
	if (C.rows() != A.rows()) throw InvalidInput("project_rank_k: row count mismatch between A and C");
	require_finite(A, "project_rank_k");
	require_finite(C, "project_rank_k");

	ProjectionResult out;
	out.Q = orthonormal_basis(C);
	if (out.Q.cols() == 0) {
		// C is numerically zero: the projection is the zero matrix.
		out.W_k = Matrix::Zero(0, A.cols());
		out.approx = Matrix::Zero(A.rows(), A.cols());
		out.Z = Matrix::Zero(A.cols(), 0);
		return out;
	}
	const Matrix W = out.Q.transpose() * A;
	const Svd SW = svd(W);
	const Index t = std::min(k, SW.rank);
	out.W_k = truncate_rank_k(SW, k);
	out.Z = SW.V.leftCols(t);
	out.approx = out.Q * out.W_k;
	return out;
}

/// Squared errors of one residual in both norms.
struct ErrorPair {
	double spectral2 = 0.0;
	double frob2 = 0.0;
};

/// Errors of the plain span reconstruction C C^+ A and of the rank-k
/// projection, in both norms (squared).
struct ReconstructionErrors {
	ErrorPair span;    ///< A - C C^+ A
	ErrorPair rank_k;  ///< A - Q (Q^T A)_k
};

namespace detail {

inline ErrorPair residual_errors(const Matrix& R) {
	ErrorPair e;
	const double s = spectral_norm(R);
	e.spectral2 = s * s;
	e.frob2 = R.squaredNorm();
	return e;
}

}  // namespace detail

/**
 * @brief Both reconstruction errors for a column subset.
 *
 * The span error can never exceed the rank-k projection error (projecting
 * onto a subspace of range(C) only loses accuracy); that ordering is checked
 * in each norm with 1e-10 absolute slack on the unsquared norms.
 */
inline ReconstructionErrors reconstruction_errors(const Matrix& A, const Matrix& C, Index k) {
	const ProjectionResult pr = project_rank_k(A, C, k);
	ReconstructionErrors out;
	if (pr.Q.cols() == 0) {
		out.span = detail::residual_errors(A);
		out.rank_k = out.span;
		return out;
	}
	const Matrix span_residual = A - pr.Q * (pr.Q.transpose() * A);
	const Matrix rank_residual = A - pr.approx;
	out.span = detail::residual_errors(span_residual);
	out.rank_k = detail::residual_errors(rank_residual);
	const double slack = 1e-10;
	if (std::sqrt(out.span.spectral2) > std::sqrt(out.rank_k.spectral2) + slack ||
	    std::sqrt(out.span.frob2) > std::sqrt(out.rank_k.frob2) + slack)
		throw NumericalBreakdown("reconstruction_errors: span error exceeded rank-k projection error");
	return out;
}

}  // namespace cssel
