#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <cssel/css.hpp>
#include <cssel/matrix.hpp>
#include <cssel/rng.hpp>

namespace {

using cssel::Index;
using cssel::Matrix;
using cssel::Method;
using cssel::Vector;

Matrix random_matrix(Index m, Index n, std::uint64_t seed, std::uint64_t stream = 0) {
	cssel::Rng rng(cssel::RngSpec{seed, stream});
	Matrix A(m, n);
	for (Index i = 0; i < m; ++i)
		for (Index j = 0; j < n; ++j) A(i, j) = rng.gaussian();
	return A;
}

void expect_sorted_unique_in_range(const std::vector<Index>& idx, Index n) {
	for (std::size_t i = 0; i < idx.size(); ++i) {
		EXPECT_GE(idx[i], 0);
		EXPECT_LT(idx[i], n);
		if (i > 0) EXPECT_LT(idx[i - 1], idx[i]);
	}
}

double frob_tail(const Matrix& A, Index k) {
	const cssel::Svd f = cssel::svd(A);
	double t = 0.0;
	for (Index i = k; i < f.sigma.size(); ++i) t += f.sigma(i) * f.sigma(i);
	return t;
}

TEST(BoundTest, ClosedFormValues) {
	// Two-sided dual-set bound at rho = 30, k = 3, r = 12: exactly 6.
	EXPECT_NEAR(cssel::assemble_bound(Method::DetSpectral, 40, 30, 30, 3, 12, 0.0), 6.0, 1e-12);
	// Standard-basis upper side, n = 30: 3 + sqrt(10).
	EXPECT_NEAR(cssel::assemble_bound(Method::DetSpectralVkOnly, 40, 30, 30, 3, 12, 0.0),
	            3.0 + std::sqrt(10.0), 1e-12);
	// Frobenius bound at k = 1, r = 4: 1 + 1/(1/2)^2 = 5.
	EXPECT_NEAR(cssel::assemble_bound(Method::DetFrobenius, 10, 10, 10, 1, 4, 0.0), 5.0, 1e-12);
	EXPECT_NEAR(cssel::assemble_bound(Method::FastFrobenius, 10, 10, 10, 1, 4, 0.5), 7.5, 1e-12);
	EXPECT_NEAR(cssel::assemble_bound(Method::FastSpectral, 40, 30, 30, 3, 12, 0.5),
	            (std::sqrt(2.0) + 0.5) * (3.0 + std::sqrt(10.0)), 1e-12);
	EXPECT_NEAR(cssel::assemble_bound(Method::RelativeError, 40, 30, 30, 3, 12, 0.25), 1.25,
	            1e-15);
	EXPECT_NEAR(cssel::assemble_bound(Method::NormSampling, 40, 30, 30, 3, 12, 0.0), 0.25,
	            1e-15);
}

TEST(RelErrParamsTest, DerivedBudgets) {
	{
		const cssel::RelErrParams p = cssel::make_rel_err_params(5, 0.5);
		EXPECT_NEAR(p.eps0, std::cbrt(0.25), 1e-15);
		EXPECT_NEAR(p.alpha, std::cbrt((1.0 + p.eps0) / 0.5), 1e-15);
		EXPECT_NEAR(p.d, (1.0 + p.alpha) * (1.0 + p.alpha), 1e-12);
		EXPECT_EQ(p.r_hat, 31);
		EXPECT_EQ(p.s, 62);
		EXPECT_EQ(p.r_hat + p.s, 93);
	}
	{
		const cssel::RelErrParams p = cssel::make_rel_err_params(3, 0.5);
		EXPECT_EQ(p.r_hat, 19);
		EXPECT_EQ(p.s, 37);
	}
	{
		// Economy preset: d = 100 and eps0 = 62/181 make c0 exactly 3 in real
		// arithmetic, so s = ceil(3k/eps).
		const cssel::RelErrParams p = cssel::make_rel_err_params(2, 0.5, /*economy=*/true);
		EXPECT_EQ(p.d, 100.0);
		EXPECT_NEAR(p.eps0, 62.0 / 181.0, 1e-15);
		EXPECT_EQ(p.r_hat, 200);
		EXPECT_NEAR(p.c0, 3.0, 1e-9);
		EXPECT_EQ(p.s, 12);
	}
	EXPECT_THROW(cssel::make_rel_err_params(0, 0.5), cssel::InvalidInput);
	EXPECT_THROW(cssel::make_rel_err_params(3, 0.0), cssel::InvalidInput);
	EXPECT_THROW(cssel::make_rel_err_params(3, 1.0), cssel::InvalidInput);
}

TEST(DetSpectralTest, SeededInstanceStaysWithinBound) {
	const Matrix A = random_matrix(40, 30, 51);
	for (const auto& kr : {std::pair<Index, Index>{3, 12}, std::pair<Index, Index>{5, 15}}) {
		const cssel::SelectionResult res = cssel::det_spectral(A, kr.first, kr.second);
		expect_sorted_unique_in_range(res.indices, 30);
		EXPECT_LE(res.indices.size(), static_cast<std::size_t>(kr.second));
		ASSERT_EQ(res.weights.size(), 30);
		// Proven guarantee (the sqrt(2) covers the tractable projection).
		EXPECT_LE(res.report.ratio, std::sqrt(2.0) * res.report.bound_value + 1e-9);
		EXPECT_GE(res.report.ratio, 1.0 - 1e-8);
	}
	// Pinned empirical outcome at (3, 12): well within the bare constant.
	const cssel::SelectionResult res = cssel::det_spectral(A, 3, 12);
	EXPECT_NEAR(res.report.bound_value, 6.0, 1e-12);
	EXPECT_LE(res.report.ratio, 6.0);
}

TEST(DetSpectralVkOnlyTest, SeededInstanceStaysWithinBound) {
	const Matrix A = random_matrix(40, 30, 52);
	const cssel::SelectionResult res = cssel::det_spectral_vk_only(A, 3, 12);
	expect_sorted_unique_in_range(res.indices, 30);
	EXPECT_NEAR(res.report.bound_value, 3.0 + std::sqrt(10.0), 1e-12);
	EXPECT_LE(res.report.ratio, std::sqrt(2.0) * res.report.bound_value + 1e-9);
	EXPECT_GE(res.report.ratio, 1.0 - 1e-8);
}

TEST(DetFrobeniusTest, SeededInstancesStayWithinBound) {
	const Matrix A = random_matrix(40, 30, 53);
	for (const auto& kr : {std::pair<Index, Index>{3, 12}, std::pair<Index, Index>{5, 15}}) {
		const cssel::SelectionResult res = cssel::det_frobenius(A, kr.first, kr.second);
		expect_sorted_unique_in_range(res.indices, 30);
		EXPECT_LE(res.indices.size(), static_cast<std::size_t>(kr.second));
		// Deterministic guarantee on the squared Frobenius ratio.
		EXPECT_LE(res.report.ratio, res.report.bound_value + 1e-9);
		EXPECT_GE(res.report.ratio, 1.0 - 1e-8);
		// The report's tail values match an independent recomputation.
		EXPECT_NEAR(res.report.tail_frob2, frob_tail(A, kr.first),
		            1e-10 * res.report.tail_frob2);
	}
}

TEST(DetDriversTest, ValidateArguments) {
	const Matrix A = random_matrix(10, 8, 54);
	EXPECT_THROW(cssel::det_frobenius(A, 3, 3, {}), cssel::InvalidInput);   // r must exceed k
	EXPECT_THROW(cssel::det_frobenius(A, 3, 9, {}), cssel::InvalidInput);   // r > n
	EXPECT_THROW(cssel::det_spectral(A, 0, 4, {}), cssel::InvalidInput);    // k < 1
	// Rank k input leaves no trailing subspace to control.
	const Matrix L = random_matrix(10, 3, 55) * random_matrix(3, 8, 56);
	EXPECT_THROW(cssel::det_spectral(L, 3, 6, {}), cssel::InvalidInput);
	EXPECT_THROW(cssel::det_frobenius(L, 3, 6, {}), cssel::InvalidInput);
}

TEST(DetDriversTest, RunsAreDeterministic) {
	const Matrix A = random_matrix(30, 24, 57);
	const cssel::SelectionResult a = cssel::det_frobenius(A, 3, 10);
	const cssel::SelectionResult b = cssel::det_frobenius(A, 3, 10);
	ASSERT_EQ(a.indices, b.indices);
	for (Index i = 0; i < a.weights.size(); ++i) EXPECT_EQ(a.weights(i), b.weights(i));
	EXPECT_EQ(a.report.frob_err2, b.report.frob_err2);
	EXPECT_EQ(a.report.spectral_err2, b.report.spectral_err2);
	EXPECT_EQ(a.report.ratio, b.report.ratio);
}

TEST(FastDriversTest, SeededRunsReproduceAndReportConsistently) {
	const Matrix A = random_matrix(24, 40, 58);
	const cssel::SelectionResult a = cssel::fast_frobenius(A, 3, 14, 0.5, 99);
	const cssel::SelectionResult b = cssel::fast_frobenius(A, 3, 14, 0.5, 99);
	ASSERT_EQ(a.indices, b.indices);
	for (Index i = 0; i < a.weights.size(); ++i) EXPECT_EQ(a.weights(i), b.weights(i));
	EXPECT_EQ(a.report.frob_err2, b.report.frob_err2);
	expect_sorted_unique_in_range(a.indices, 40);
	EXPECT_LE(a.indices.size(), 14u);
	EXPECT_GE(a.report.ratio, 1.0 - 1e-8);
	EXPECT_NEAR(a.report.bound_value, 1.5 * (1.0 + 1.0 / std::pow(1.0 - std::sqrt(3.0 / 14.0), 2)),
	            1e-12);

	const cssel::SelectionResult s = cssel::fast_spectral(A, 3, 14, 0.5, 99);
	const cssel::SelectionResult s2 = cssel::fast_spectral(A, 3, 14, 0.5, 99);
	ASSERT_EQ(s.indices, s2.indices);
	expect_sorted_unique_in_range(s.indices, 40);
	EXPECT_GE(s.report.ratio, 1.0 - 1e-8);
	// A different seed is allowed to pick different columns but never to break
	// the rank invariant (the driver would throw).
	const cssel::SelectionResult c = cssel::fast_frobenius(A, 3, 14, 0.5, 100);
	EXPECT_LE(c.indices.size(), 14u);
}

TEST(FastDriversTest, ValidateArguments) {
	const Matrix A = random_matrix(12, 20, 59);
	EXPECT_THROW(cssel::fast_frobenius(A, 1, 8, 0.5, 1), cssel::InvalidInput);
	EXPECT_THROW(cssel::fast_frobenius(A, 3, 3, 0.5, 1), cssel::InvalidInput);
	EXPECT_THROW(cssel::fast_frobenius(A, 3, 8, 1.5, 1), cssel::InvalidInput);
	EXPECT_THROW(cssel::fast_spectral(A, 3, 21, 0.5, 1), cssel::InvalidInput);
}

TEST(NormSamplingTest, ProbabilitiesMatchSquaredColumnNorms) {
	Matrix A = Matrix::Zero(2, 2);
	A(0, 0) = 3.0;
	A(1, 1) = 4.0;
	const Vector p = cssel::column_sampling_probabilities(A);
	EXPECT_NEAR(p(0), 9.0 / 25.0, 1e-15);
	EXPECT_NEAR(p(1), 16.0 / 25.0, 1e-15);
	EXPECT_NEAR(p.sum(), 1.0, 1e-12);
	const Vector q = cssel::column_sampling_probabilities(random_matrix(9, 13, 60));
	EXPECT_NEAR(q.sum(), 1.0, 1e-12);
	for (Index j = 0; j < q.size(); ++j) EXPECT_GE(q(j), 0.0);
	EXPECT_THROW(cssel::column_sampling_probabilities(Matrix::Zero(3, 3)), cssel::InvalidInput);
}

TEST(NormSamplingTest, EmpiricalDrawFrequencies) {
	Matrix A = Matrix::Zero(2, 2);
	A(0, 0) = 3.0;
	A(1, 1) = 4.0;
	const Vector p = cssel::column_sampling_probabilities(A);
	std::vector<double> cum{p(0), p(0) + p(1)};
	cssel::Rng rng(cssel::RngSpec{61, 1});
	const int n = 10000;
	int hits0 = 0;
	for (int i = 0; i < n; ++i)
		if (cssel::sample_from_cumulative(cum, rng.uniform01()) == 0) ++hits0;
	const double want = 9.0 / 25.0;
	const double sigma = std::sqrt(want * (1.0 - want) * n);
	EXPECT_NEAR(static_cast<double>(hits0), want * n, 4.0 * sigma);
}

TEST(NormSamplingTest, SingleMassColumnAlwaysWins) {
	Matrix A = Matrix::Zero(3, 4);
	A(1, 2) = 5.0;
	const cssel::SelectionResult res = cssel::norm_sampling(A, 1, 5, 7);
	ASSERT_EQ(res.indices.size(), 1u);
	EXPECT_EQ(res.indices[0], 2);
	EXPECT_EQ(res.report.raw_draws, 5);
	// Rank-1 input, k = 1: the tail vanishes and the ratio pins to 1.
	EXPECT_EQ(res.report.ratio, 1.0);
	EXPECT_EQ(res.report.bound_value, 1.0);
	EXPECT_LE(res.report.frob_err2, 1e-18);
}

TEST(NormSamplingTest, ReportNormalizesAdditiveBound) {
	Matrix A = Matrix::Zero(2, 2);
	A(0, 0) = 3.0;
	A(1, 1) = 4.0;
	const cssel::SelectionResult res = cssel::norm_sampling(A, 1, 5, 8);
	// tail = 9, ||A||_F^2 = 25, coefficient k/r = 1/5.
	EXPECT_NEAR(res.report.bound_value, 1.0 + (1.0 / 5.0) * 25.0 / 9.0, 1e-12);
	EXPECT_EQ(res.report.raw_draws, 5);
	EXPECT_GE(res.report.ratio, 1.0 - 1e-8);

	const cssel::SelectionResult again = cssel::norm_sampling(A, 1, 5, 8);
	EXPECT_EQ(res.indices, again.indices);
	EXPECT_EQ(res.report.frob_err2, again.report.frob_err2);
	EXPECT_THROW(cssel::norm_sampling(A, 1, 0, 8), cssel::InvalidInput);
	EXPECT_THROW(cssel::norm_sampling(A, 3, 2, 8), cssel::InvalidInput);
}

TEST(AdaptiveSampleTest, VanishedResidualShortCircuits) {
	// Columns 2..5 are combinations of columns 0 and 1.
	const Matrix base = random_matrix(8, 2, 62);
	Matrix A(8, 6);
	A.col(0) = base.col(0);
	A.col(1) = base.col(1);
	for (Index j = 2; j < 6; ++j) A.col(j) = base.col(0) * static_cast<double>(j) - base.col(1);
	const cssel::SelectionResult res = cssel::adaptive_sample(A, {0, 1}, 4, 9);
	EXPECT_TRUE(res.early_exact);
	EXPECT_TRUE(res.indices.empty());
}

TEST(AdaptiveSampleTest, ResidualMassDirectsDraws) {
	const Matrix A = Matrix::Identity(3, 3);
	const cssel::SelectionResult res = cssel::adaptive_sample(A, {0, 1}, 6, 10);
	EXPECT_FALSE(res.early_exact);
	ASSERT_EQ(res.indices.size(), 1u);
	EXPECT_EQ(res.indices[0], 2);
	EXPECT_EQ(res.report.raw_draws, 6);
	EXPECT_THROW(cssel::adaptive_sample(A, {0}, 0, 10), cssel::InvalidInput);
}

TEST(RelativeErrorTest, TwoStageRunOnGenericInput) {
	const Matrix A = random_matrix(20, 60, 63);
	const cssel::SelectionResult res = cssel::relative_error_css(A, 3, 0.5, 11);
	const cssel::RelErrParams p = cssel::make_rel_err_params(3, 0.5);
	expect_sorted_unique_in_range(res.indices, 60);
	EXPECT_LE(res.indices.size(), static_cast<std::size_t>(p.r_hat + p.s));
	EXPECT_NEAR(res.report.bound_value, 1.5, 1e-12);
	EXPECT_GE(res.report.ratio, 1.0 - 1e-8);
	EXPECT_FALSE(res.early_exact);

	// Stage 2 can only help: the union's error never exceeds stage 1 alone.
	const cssel::SelectionResult stage1 = cssel::fast_frobenius(A, 3, p.r_hat, p.eps0, 11);
	EXPECT_LE(res.report.frob_err2, stage1.report.frob_err2 + 1e-10);
	EXPECT_EQ(res.report.raw_draws,
	          static_cast<Index>(stage1.indices.size()) + p.s);

	const cssel::SelectionResult again = cssel::relative_error_css(A, 3, 0.5, 11);
	EXPECT_EQ(res.indices, again.indices);
	EXPECT_EQ(res.report.frob_err2, again.report.frob_err2);
}

TEST(RelativeErrorTest, ExactRankInputStopsEarly) {
	const Matrix A = random_matrix(20, 3, 64) * random_matrix(3, 60, 65);
	const cssel::SelectionResult res = cssel::relative_error_css(A, 3, 0.5, 12);
	EXPECT_TRUE(res.early_exact);
	EXPECT_EQ(res.report.ratio, 1.0);
	EXPECT_LE(res.report.frob_err2, 1e-16 * cssel::frobenius_norm_sq(A));
	const cssel::RelErrParams p = cssel::make_rel_err_params(3, 0.5);
	EXPECT_LE(res.indices.size(), static_cast<std::size_t>(p.r_hat));
}

TEST(RelativeErrorTest, ValidatesArguments) {
	const Matrix A = random_matrix(10, 12, 66);
	EXPECT_THROW(cssel::relative_error_css(A, 1, 0.5, 1), cssel::InvalidInput);
	EXPECT_THROW(cssel::relative_error_css(A, 3, 1.5, 1), cssel::InvalidInput);
	// Derived budget r_hat = 19 exceeds n = 12.
	EXPECT_THROW(cssel::relative_error_css(A, 3, 0.5, 1), cssel::InvalidInput);
}

TEST(RunSelectionTest, DispatchesToTheNamedMethod) {
	const Matrix A = random_matrix(24, 20, 67);
	cssel::SelectionRequest req;
	req.method = Method::DetFrobenius;
	req.k = 3;
	req.r = 9;
	const cssel::SelectionResult via = cssel::run_selection(A, req);
	const cssel::SelectionResult direct = cssel::det_frobenius(A, 3, 9);
	ASSERT_EQ(via.indices, direct.indices);
	for (Index i = 0; i < via.weights.size(); ++i) EXPECT_EQ(via.weights(i), direct.weights(i));

	req.method = Method::NormSampling;
	req.seed = 5;
	const cssel::SelectionResult ns = cssel::run_selection(A, req);
	EXPECT_EQ(ns.indices, cssel::norm_sampling(A, 3, 9, 5).indices);
	EXPECT_EQ(ns.weights.size(), 0);
}

TEST(ReportTest, RecomputesFromIndicesAlone) {
	const Matrix A = random_matrix(18, 15, 68);
	const cssel::SelectionResult res = cssel::det_frobenius(A, 2, 8);
	const cssel::ErrorReport rep =
	    cssel::build_report(A, res.indices, Method::DetFrobenius, 2, 8, 0.0);
	EXPECT_EQ(rep.frob_err2, res.report.frob_err2);
	EXPECT_EQ(rep.spectral_err2, res.report.spectral_err2);
	EXPECT_EQ(rep.span_frob_err2, res.report.span_frob_err2);
	EXPECT_EQ(rep.ratio, res.report.ratio);
	EXPECT_EQ(rep.bound_value, res.report.bound_value);
	// Span projection is never worse than the rank-k projection.
	EXPECT_LE(rep.span_frob_err2, rep.frob_err2 + 1e-12);
}

}  // namespace
