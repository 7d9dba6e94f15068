#include <gtest/gtest.h>

#include <cmath>

#include <cssel/matrix.hpp>
#include <cssel/projection.hpp>
#include <cssel/rng.hpp>

namespace {

using cssel::Index;
using cssel::Matrix;

Matrix random_matrix(Index m, Index n, std::uint64_t seed, std::uint64_t stream = 0) {
	cssel::Rng rng(cssel::RngSpec{seed, stream});
	Matrix A(m, n);
	for (Index i = 0; i < m; ++i)
		for (Index j = 0; j < n; ++j) A(i, j) = rng.gaussian();
	return A;
}

// (n+1) x n matrix whose columns are e0 + alpha*e_{j+1}: every column subset
// of size r has the same closed-form reconstruction errors.
Matrix hard_instance(Index n, double alpha) {
	Matrix A = Matrix::Zero(n + 1, n);
	for (Index j = 0; j < n; ++j) {
		A(0, j) = 1.0;
		A(j + 1, j) = alpha;
	}
	return A;
}

TEST(ProjectRankKTest, DiagonalExample) {
	Matrix A = Matrix::Zero(3, 3);
	A(0, 0) = 3.0;
	A(1, 1) = 2.0;
	A(2, 2) = 1.0;
	const Matrix C = cssel::gather_columns(A, {0, 1});
	const cssel::ProjectionResult pr = cssel::project_rank_k(A, C, 1);
	Matrix want = Matrix::Zero(3, 3);
	want(0, 0) = 3.0;
	EXPECT_LE((pr.approx - want).cwiseAbs().maxCoeff(), 1e-12);
	const cssel::ReconstructionErrors e = cssel::reconstruction_errors(A, C, 1);
	EXPECT_NEAR(e.rank_k.frob2, 5.0, 1e-12);
	EXPECT_NEAR(e.rank_k.spectral2, 4.0, 1e-12);
	EXPECT_NEAR(e.span.frob2, 1.0, 1e-12);
	EXPECT_NEAR(e.span.spectral2, 1.0, 1e-12);
}

TEST(ProjectRankKTest, FullMatrixAtFullRankIsExact) {
	const Matrix A = random_matrix(6, 4, 21);
	const Index rank = cssel::svd(A).rank;
	const cssel::ReconstructionErrors e = cssel::reconstruction_errors(A, A, rank);
	EXPECT_LE(e.rank_k.frob2, 1e-18 * cssel::frobenius_norm_sq(A));
	EXPECT_LE(e.span.frob2, 1e-18 * cssel::frobenius_norm_sq(A));
}

// Frobenius split: rank-k error = span error + truncation tail of Q^T A.
TEST(ProjectRankKTest, FrobeniusErrorSplitsExactly) {
	for (std::uint64_t seed = 1; seed <= 5; ++seed) {
		const Matrix A = random_matrix(6, 5, 500 + seed);
		const Matrix C = cssel::gather_columns(A, {0, 2, 4});
		const Index k = 2;
		const cssel::ReconstructionErrors e = cssel::reconstruction_errors(A, C, k);
		const Matrix Q = cssel::orthonormal_basis(C);
		const Matrix W = Q.transpose() * A;
		const cssel::Svd SW = cssel::svd(W);
		double tail = 0.0;
		for (Index i = k; i < SW.sigma.size(); ++i) tail += SW.sigma(i) * SW.sigma(i);
		EXPECT_NEAR(e.rank_k.frob2, e.span.frob2 + tail, 1e-8 * (1.0 + e.rank_k.frob2));
	}
}

TEST(ProjectRankKTest, HardInstanceClosedForm) {
	// n = 3, alpha = 1, one column kept, k = 1: squared errors 2 and 3.
	const Matrix A = hard_instance(3, 1.0);
	const Matrix C = cssel::gather_columns(A, {0});
	const cssel::ReconstructionErrors e = cssel::reconstruction_errors(A, C, 1);
	EXPECT_NEAR(e.span.spectral2, 2.0, 1e-10);
	EXPECT_NEAR(e.span.frob2, 3.0, 1e-10);
	// One kept column and k = 1 make both reconstructions identical.
	EXPECT_NEAR(e.rank_k.spectral2, 2.0, 1e-10);
	EXPECT_NEAR(e.rank_k.frob2, 3.0, 1e-10);
	// Every size-1 subset of this instance gives the same errors.
	for (Index j = 1; j < 3; ++j) {
		const cssel::ReconstructionErrors ej =
		    cssel::reconstruction_errors(A, cssel::gather_columns(A, {j}), 1);
		EXPECT_NEAR(ej.span.spectral2, 2.0, 1e-10);
		EXPECT_NEAR(ej.span.frob2, 3.0, 1e-10);
	}
}

// The rank-k projection is the Frobenius-optimal rank-k matrix inside
// range(C): no challenger with the same span and rank can do better.
TEST(ProjectRankKTest, FrobeniusOptimalAgainstChallengers) {
	const Matrix A = random_matrix(7, 6, 22);
	const Matrix C = cssel::gather_columns(A, {0, 2, 4});
	const Index k = 2;
	const cssel::ProjectionResult pr = cssel::project_rank_k(A, C, k);
	const double best = cssel::frobenius_norm_sq(A - pr.approx);
	const Matrix W = pr.Q.transpose() * A;
	cssel::Rng rng(cssel::RngSpec{23, 0});
	auto gauss = [&](Index r, Index c) {
		Matrix G(r, c);
		for (Index i = 0; i < r; ++i)
			for (Index j = 0; j < c; ++j) G(i, j) = rng.gaussian();
		return G;
	};
	const double w_scale = std::sqrt(cssel::frobenius_norm_sq(W));
	for (int t = 0; t < 200; ++t) {
		Matrix Y = gauss(C.cols(), k) * gauss(k, A.cols());
		if (t % 2 == 1) {
			// Near-optimal challenger: a small perturbation of the optimum.
			Y = pr.W_k + (1e-3 * w_scale / std::sqrt(cssel::frobenius_norm_sq(Y))) * Y;
			Y = cssel::truncate_rank_k(cssel::svd(Y), k);
		}
		const double challenger = cssel::frobenius_norm_sq(A - pr.Q * Y);
		EXPECT_GE(challenger, best - 1e-10);
	}
}

TEST(ProjectRankKTest, InvariantToColumnRescaling) {
	const Matrix A = random_matrix(8, 6, 24);
	const Matrix C = cssel::gather_columns(A, {1, 3, 5});
	Matrix D = Matrix::Zero(3, 3);
	D(0, 0) = 1e-3;
	D(1, 1) = -7.0;
	D(2, 2) = 40.0;
	const cssel::ProjectionResult a = cssel::project_rank_k(A, C, 2);
	const cssel::ProjectionResult b = cssel::project_rank_k(A, C * D, 2);
	const double scale = std::sqrt(cssel::frobenius_norm_sq(a.approx));
	EXPECT_LE((a.approx - b.approx).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + scale));
}

TEST(ProjectRankKTest, ZeroSubsetGivesZeroApproximation) {
	const Matrix A = random_matrix(4, 3, 25);
	const Matrix C = Matrix::Zero(4, 2);
	const cssel::ReconstructionErrors e = cssel::reconstruction_errors(A, C, 2);
	EXPECT_EQ(e.span.frob2, e.rank_k.frob2);
	EXPECT_NEAR(e.span.frob2, cssel::frobenius_norm_sq(A), 1e-12);
	const cssel::ProjectionResult pr = cssel::project_rank_k(A, C, 2);
	EXPECT_EQ(pr.approx.cwiseAbs().maxCoeff(), 0.0);
}

TEST(ProjectRankKTest, ErrorsDecreaseWithK) {
	const Matrix A = random_matrix(8, 7, 26);
	const Matrix C = cssel::gather_columns(A, {0, 1, 2, 3});
	double prev_frob = std::numeric_limits<double>::infinity();
	double span_frob = -1.0;
	for (Index k = 1; k <= 4; ++k) {
		const cssel::ReconstructionErrors e = cssel::reconstruction_errors(A, C, k);
		EXPECT_LE(e.rank_k.frob2, prev_frob + 1e-12);
		EXPECT_LE(e.span.frob2, e.rank_k.frob2 + 1e-12);
		prev_frob = e.rank_k.frob2;
		if (span_frob < 0.0) span_frob = e.span.frob2;
		EXPECT_NEAR(e.span.frob2, span_frob, 1e-12);  // span error ignores k
	}
}

TEST(ProjectRankKTest, FactorShapesAndOrthonormality) {
	const Matrix A = random_matrix(9, 7, 27);
	const Matrix C = cssel::gather_columns(A, {0, 3, 6});
	const cssel::ProjectionResult pr = cssel::project_rank_k(A, C, 2);
	ASSERT_EQ(pr.Z.cols(), 2);
	ASSERT_EQ(pr.Z.rows(), 7);
	EXPECT_LE((pr.Z.transpose() * pr.Z - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
	const Matrix W = pr.Q.transpose() * A;
	EXPECT_LE((pr.W_k - W * pr.Z * pr.Z.transpose()).cwiseAbs().maxCoeff(),
	          1e-8 * (1.0 + W.cwiseAbs().maxCoeff()));
	EXPECT_LE((pr.approx - pr.Q * pr.W_k).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProjectRankKTest, RejectsBadArguments) {
	const Matrix A = random_matrix(4, 3, 28);
	EXPECT_THROW(cssel::project_rank_k(A, A.leftCols(2), 0), cssel::InvalidInput);
	EXPECT_THROW(cssel::project_rank_k(A, Matrix(4, 0), 1), cssel::InvalidInput);
	EXPECT_THROW(cssel::project_rank_k(A, Matrix::Identity(5, 2), 1), cssel::InvalidInput);
}

}  // namespace
