#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <cssel/approx_svd.hpp>
#include <cssel/matrix.hpp>
#include <cssel/projection.hpp>
#include <cssel/rng.hpp>
#include <cssel/sparsifier.hpp>

namespace cssel {

/**
 * End-to-end column selection drivers. Every method picks column indices C of
 * A so that the best rank-k approximation of A inside span(C) is provably
 * close to the best rank-k approximation overall:
 *
 *  - det_spectral:          dual-set run on (V_k rows, V_{rho-k} rows)
 *  - det_spectral_vk_only:  dual-set run on (V_k rows, standard basis)
 *  - det_frobenius:         dual-set run on (V_k rows, residual columns)
 *  - fast_spectral:         randomized factorization + (Z rows, standard basis)
 *  - fast_frobenius:        randomized factorization + (Z rows, residual columns)
 *  - norm_sampling:         i.i.d. draws proportional to squared column norms
 *  - relative_error_css:    fast_frobenius stage + adaptive residual sampling
 */

enum class Method {
	DetSpectral,
	DetSpectralVkOnly,
	DetFrobenius,
	FastSpectral,
	FastFrobenius,
	RelativeError,
	NormSampling,
};

struct SelectionRequest {
	Method method = Method::DetFrobenius;
	Index k = 0;
	Index r = 0;          ///< budget (ignored by RelativeError, which derives its own)
	double eps = 0.0;     ///< randomized methods only
	std::uint64_t seed = 0;
	bool economy = false;  ///< RelativeError preset with d = 100, eps0 = 62/181
};

/// Everything a run reports about its reconstruction quality. Squared errors
/// are stored for both the plain span projection C C⁺ A and the rank-k
/// projection within span(C).
struct ErrorReport {
	double spectral_err2 = 0.0;       ///< ||A - Q (QᵀA)_k||_2^2
	double frob_err2 = 0.0;           ///< ||A - Q (QᵀA)_k||_F^2
	double span_spectral_err2 = 0.0;  ///< ||A - C C⁺ A||_2^2
	double span_frob_err2 = 0.0;      ///< ||A - C C⁺ A||_F^2
	double sigma_kplus1_sq = 0.0;     ///< sigma_{k+1}(A)^2
	double tail_frob2 = 0.0;          ///< ||A - A_k||_F^2
	double bound_value = 0.0;         ///< the method's guaranteed ratio ceiling
	double ratio = 1.0;               ///< achieved/optimal in the method's native norm (1 when the tail vanishes)
	Index raw_draws = 0;              ///< draws before duplicate collapse (sampling methods)
	double wall_ms = 0.0;
};

struct SelectionResult {
	std::vector<Index> indices;  ///< sorted distinct column indices
	Vector weights;              ///< length n when the method produces weights, else empty
	ErrorReport report;
	bool early_exact = false;    ///< the residual vanished before stage-2 sampling
};

/// Derived budget arithmetic for relative_error_css.
struct RelErrParams {
	double eps0 = 0.0;
	double alpha = 0.0;
	double d = 0.0;
	double c0 = 0.0;
	Index r_hat = 0;
	Index s = 0;
};

namespace detail {

/// Ceiling with a few-ulp downward nudge: budget formulas that are designed
/// to land exactly on an integer (e.g. the economy preset, where c0 = 3 in
/// exact arithmetic) must not be bumped to the next integer by rounding in
/// the preceding floating-point arithmetic.
inline Index ceil_budget(double x) {
	return static_cast<Index>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))));
}

}  // namespace detail

inline RelErrParams make_rel_err_params(Index k, double eps, bool economy = false) {
	if (k < 1) throw InvalidInput("make_rel_err_params: k must be >= 1");
	if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("make_rel_err_params: need 0 < eps < 1");
	RelErrParams p;
	if (economy) {
		p.eps0 = 62.0 / 181.0;
		p.d = 100.0;
		p.alpha = std::sqrt(p.d) - 1.0;
	} else {
		p.eps0 = std::cbrt(eps * eps);
		p.alpha = std::cbrt((1.0 + p.eps0) / eps);
		p.d = (1.0 + p.alpha) * (1.0 + p.alpha);
	}
	p.r_hat = detail::ceil_budget(p.d * static_cast<double>(k));
	const double root = std::sqrt(static_cast<double>(k) / static_cast<double>(p.r_hat));
	p.c0 = (1.0 + p.eps0) * (1.0 + 1.0 / ((1.0 - root) * (1.0 - root)));
	p.s = detail::ceil_budget(p.c0 * static_cast<double>(k) / eps);
	return p;
}

/// Closed-form guaranteed multiplier of each method. Spectral-family values
/// multiply sigma_{k+1}; Frobenius-family values multiply ||A - A_k||_F^2.
/// NormSampling returns the additive coefficient k/r of its bound
/// tail + (k/r) ||A||_F^2.
inline double assemble_bound(Method method, Index m, Index n, Index rho, Index k, Index r,
                             double eps) {
	(void)m;
	const double kd = static_cast<double>(k);
	const double rd = static_cast<double>(r);
	const double nd = static_cast<double>(n);
	switch (method) {
		case Method::DetSpectral: {
			const double rest = static_cast<double>(rho - k);
			return 1.0 + (1.0 + std::sqrt(rest / rd)) / (1.0 - std::sqrt(kd / rd));
		}
		case Method::DetSpectralVkOnly:
			return 1.0 + (1.0 + std::sqrt(nd / rd)) / (1.0 - std::sqrt(kd / rd));
		case Method::DetFrobenius: {
			const double root = 1.0 - std::sqrt(kd / rd);
			return 1.0 + 1.0 / (root * root);
		}
		case Method::FastSpectral:
			return (std::sqrt(2.0) + eps) *
			       (1.0 + (1.0 + std::sqrt(nd / rd)) / (1.0 - std::sqrt(kd / rd)));
		case Method::FastFrobenius: {
			const double root = 1.0 - std::sqrt(kd / rd);
			return (1.0 + eps) * (1.0 + 1.0 / (root * root));
		}
		case Method::RelativeError:
			return 1.0 + eps;
		case Method::NormSampling:
			return kd / rd;
	}
	throw InvalidInput("assemble_bound: unknown method");
}

inline bool is_spectral_method(Method m) {
	return m == Method::DetSpectral || m == Method::DetSpectralVkOnly || m == Method::FastSpectral;
}

namespace detail {

struct TailInfo {
	Index rho = 0;              ///< numerical rank of A
	double sigma_kplus1_sq = 0.0;
	double tail_frob2 = 0.0;
	Matrix V_k;                 ///< n x k leading right singular vectors
	Matrix V_rest;              ///< n x (rho - k) trailing right singular vectors
	Matrix residual;            ///< A - A_k
};

inline TailInfo tail_info(const Matrix& A, Index k, bool want_factors) {
	const Svd f = svd(A);
	TailInfo t;
	t.rho = f.rank;
	if (k < 1 || k > std::min(A.rows(), A.cols()))
		throw InvalidInput("column selection: need 1 <= k <= min(m, n)");
	if (k < f.sigma.size()) t.sigma_kplus1_sq = f.sigma(k) * f.sigma(k);
	for (Index i = k; i < f.sigma.size(); ++i) t.tail_frob2 += f.sigma(i) * f.sigma(i);
	if (want_factors) {
		t.V_k = f.V.leftCols(std::min(k, f.rank));
		if (f.rank > k) t.V_rest = f.V.middleCols(k, f.rank - k);
		Matrix Ak = Matrix::Zero(A.rows(), A.cols());
		const Index kk = std::min(k, f.rank);
		if (kk > 0)
			Ak = f.U.leftCols(kk) * f.sigma.head(kk).asDiagonal() * f.V.leftCols(kk).transpose();
		t.residual = A - Ak;
	}
	return t;
}

/// Independent check of the sparsifier's lower-side guarantee on the rows it
/// actually ran on: sigma_k(V_kᵀ S) >= 1 - sqrt(k/r) - 1e-8.
inline void check_selection_rank(const Matrix& V_k, const Vector& weights, Index k, Index r,
                                 const char* who) {
	const Matrix G = V_k.transpose() * weights.asDiagonal() * V_k;
	const double lam_min = sym_eig(G).lambda(0);
	const double sigma_k = std::sqrt(std::max(0.0, lam_min));
	const double target = 1.0 - std::sqrt(static_cast<double>(k) / static_cast<double>(r));
	if (sigma_k < target - 1e-8)
		throw NumericalBreakdown(std::string(who) +
		                         ": selected columns lost rank (sigma_k(VᵀS) = " +
		                         std::to_string(sigma_k) + " < " + std::to_string(target) + ")");
}

inline std::vector<Index> collapse_sorted(const std::vector<Index>& draws) {
	std::set<Index> uniq(draws.begin(), draws.end());
	return std::vector<Index>(uniq.begin(), uniq.end());
}

struct Stopwatch {
	std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
	double ms() const {
		return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
			.count();
	}
};

}  // namespace detail

/**
 * @brief Full error report for a set of selected columns.
 *
 * Recomputes everything from scratch: the SVD tail of A, the span-projection
 * errors, the rank-k projection errors, the method's bound, and the
 * native-norm ratio (spectral methods compare unsquared spectral error to
 * sigma_{k+1}; the rest compare squared Frobenius error to the tail). A
 * vanishing tail yields ratio 1 by convention.
 */
inline ErrorReport build_report(const Matrix& A, const std::vector<Index>& indices, Method method,
                                Index k, Index r, double eps) {
	const detail::TailInfo tail = detail::tail_info(A, k, false);
	ErrorReport rep;
	rep.sigma_kplus1_sq = tail.sigma_kplus1_sq;
	rep.tail_frob2 = tail.tail_frob2;
	const Matrix C = gather_columns(A, indices);
	const ReconstructionErrors errs = reconstruction_errors(A, C, k);
	rep.spectral_err2 = errs.rank_k.spectral2;
	rep.frob_err2 = errs.rank_k.frob2;
	rep.span_spectral_err2 = errs.span.spectral2;
	rep.span_frob_err2 = errs.span.frob2;
	if (method == Method::NormSampling) {
		const double coeff = assemble_bound(method, A.rows(), A.cols(), tail.rho, k, r, eps);
		rep.bound_value = rep.tail_frob2 > 0.0
			                  ? 1.0 + coeff * frobenius_norm_sq(A) / rep.tail_frob2
			                  : 1.0;
	} else {
		rep.bound_value = assemble_bound(method, A.rows(), A.cols(), tail.rho, k, r, eps);
	}
	if (is_spectral_method(method)) {
		rep.ratio = rep.sigma_kplus1_sq > 0.0
			            ? std::sqrt(rep.spectral_err2 / rep.sigma_kplus1_sq)
			            : 1.0;
	} else {
		rep.ratio = rep.tail_frob2 > 0.0 ? rep.frob_err2 / rep.tail_frob2 : 1.0;
	}
	rep.raw_draws = static_cast<Index>(indices.size());
	return rep;
}

/// Deterministic spectral-objective selection from the two trailing-and-
/// leading singular subspaces; needs the full SVD (rank rho > k).
inline SelectionResult det_spectral(const Matrix& A, Index k, Index r,
                                    const SparsifierOptions& opts = {}) {
	detail::Stopwatch watch;
	require_finite(A, "det_spectral");
	if (!(k >= 1 && k < r && r <= A.cols())) throw InvalidInput("det_spectral: need 1 <= k < r <= n");
	const detail::TailInfo tail = detail::tail_info(A, k, true);
	if (tail.rho <= k) throw InvalidInput("det_spectral: rank(A) must exceed k");
	const WeightedSelection ws = dual_set_spectral(tail.V_k, tail.V_rest, r, opts);
	detail::check_selection_rank(tail.V_k, ws.weights, k, r, "det_spectral");
	SelectionResult out;
	out.indices = ws.support;
	out.weights = ws.weights;
	out.report = build_report(A, out.indices, Method::DetSpectral, k, r, 0.0);
	out.report.raw_draws = static_cast<Index>(out.indices.size());
	out.report.wall_ms = watch.ms();
	return out;
}

/// Spectral-objective selection scoring only V_k against the standard basis;
/// weaker constant, much cheaper upper side.
inline SelectionResult det_spectral_vk_only(const Matrix& A, Index k, Index r,
                                            const SparsifierOptions& opts = {}) {
	detail::Stopwatch watch;
	require_finite(A, "det_spectral_vk_only");
	if (!(k >= 1 && k < r && r <= A.cols()))
		throw InvalidInput("det_spectral_vk_only: need 1 <= k < r <= n");
	const detail::TailInfo tail = detail::tail_info(A, k, true);
	if (tail.rho <= k) throw InvalidInput("det_spectral_vk_only: rank(A) must exceed k");
	const WeightedSelection ws = dual_set_spectral(tail.V_k, IdentityRows{A.cols()}, r, opts);
	detail::check_selection_rank(tail.V_k, ws.weights, k, r, "det_spectral_vk_only");
	SelectionResult out;
	out.indices = ws.support;
	out.weights = ws.weights;
	out.report = build_report(A, out.indices, Method::DetSpectralVkOnly, k, r, 0.0);
	out.report.raw_draws = static_cast<Index>(out.indices.size());
	out.report.wall_ms = watch.ms();
	return out;
}

/// Deterministic Frobenius-objective selection: V_k rows against the columns
/// of the rank-k residual.
inline SelectionResult det_frobenius(const Matrix& A, Index k, Index r,
                                     const SparsifierOptions& opts = {}) {
	detail::Stopwatch watch;
	require_finite(A, "det_frobenius");
	if (!(k >= 1 && k < r && r <= A.cols()))
		throw InvalidInput("det_frobenius: need 1 <= k < r <= n");
	const detail::TailInfo tail = detail::tail_info(A, k, true);
	if (tail.rho <= k) throw InvalidInput("det_frobenius: rank(A) must exceed k");
	const Matrix Arows = tail.residual.transpose();  // row i = i-th residual column
	const WeightedSelection ws = dual_set_spectral_frobenius(tail.V_k, Arows, r, opts);
	detail::check_selection_rank(tail.V_k, ws.weights, k, r, "det_frobenius");
	SelectionResult out;
	out.indices = ws.support;
	out.weights = ws.weights;
	out.report = build_report(A, out.indices, Method::DetFrobenius, k, r, 0.0);
	out.report.raw_draws = static_cast<Index>(out.indices.size());
	out.report.wall_ms = watch.ms();
	return out;
}

/// Randomized spectral-objective selection: factorization Z rows against the
/// standard basis.
inline SelectionResult fast_spectral(const Matrix& A, Index k, Index r, double eps,
                                     std::uint64_t seed, const SparsifierOptions& opts = {}) {
	detail::Stopwatch watch;
	require_finite(A, "fast_spectral");
	if (!(k >= 2 && k < r && r <= A.cols()))
		throw InvalidInput("fast_spectral: need 2 <= k < r <= n");
	if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("fast_spectral: need 0 < eps < 1");
	const SpectralFactorization fac = fast_spectral_factorization(A, k, eps, RngSpec{seed, 0});
	if (fac.Z.cols() < k)
		throw NumericalBreakdown("fast_spectral: sketch lost rank below k");
	const WeightedSelection ws = dual_set_spectral(fac.Z, IdentityRows{A.cols()}, r, opts);
	detail::check_selection_rank(fac.Z, ws.weights, k, r, "fast_spectral");
	SelectionResult out;
	out.indices = ws.support;
	out.weights = ws.weights;
	out.report = build_report(A, out.indices, Method::FastSpectral, k, r, eps);
	out.report.raw_draws = static_cast<Index>(out.indices.size());
	out.report.wall_ms = watch.ms();
	return out;
}

/// Randomized Frobenius-objective selection: factorization Z rows against the
/// columns of the factorization residual.
inline SelectionResult fast_frobenius(const Matrix& A, Index k, Index r, double eps,
                                      std::uint64_t seed, const SparsifierOptions& opts = {}) {
	detail::Stopwatch watch;
	require_finite(A, "fast_frobenius");
	if (!(k >= 2 && k < r && r <= A.cols()))
		throw InvalidInput("fast_frobenius: need 2 <= k < r <= n");
	if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("fast_frobenius: need 0 < eps < 1");
	const SpectralFactorization fac = fast_frobenius_factorization(A, k, eps, RngSpec{seed, 0});
	if (fac.Z.cols() < k)
		throw NumericalBreakdown("fast_frobenius: sketch lost rank below k");
	const Matrix Arows = fac.E.transpose();
	const WeightedSelection ws = dual_set_spectral_frobenius(fac.Z, Arows, r, opts);
	detail::check_selection_rank(fac.Z, ws.weights, k, r, "fast_frobenius");
	SelectionResult out;
	out.indices = ws.support;
	out.weights = ws.weights;
	out.report = build_report(A, out.indices, Method::FastFrobenius, k, r, eps);
	out.report.raw_draws = static_cast<Index>(out.indices.size());
	out.report.wall_ms = watch.ms();
	return out;
}

/// Squared-column-norm sampling probabilities of A.
inline Vector column_sampling_probabilities(const Matrix& A) {
	const double total = frobenius_norm_sq(A);
	if (!(total > 0.0)) throw InvalidInput("norm_sampling: zero matrix has no distribution");
	Vector p(A.cols());
	for (Index j = 0; j < A.cols(); ++j) p(j) = A.col(j).squaredNorm() / total;
	return p;
}

namespace detail {

inline std::vector<Index> draw_iid(const Vector& p, Index count, Rng& rng) {
	std::vector<double> cum(static_cast<std::size_t>(p.size()));
	double acc = 0.0;
	for (Index i = 0; i < p.size(); ++i) {
		acc += p(i);
		cum[static_cast<std::size_t>(i)] = acc;
	}
	std::vector<Index> draws;
	draws.reserve(static_cast<std::size_t>(count));
	for (Index t = 0; t < count; ++t)
		draws.push_back(static_cast<Index>(sample_from_cumulative(cum, rng.uniform01())));
	return draws;
}

}  // namespace detail

/// r i.i.d. column draws with probability proportional to squared column
/// norm; duplicates collapse in the returned indices, the report keeps the
/// raw draw count.
inline SelectionResult norm_sampling(const Matrix& A, Index k, Index r, std::uint64_t seed) {
	detail::Stopwatch watch;
	require_finite(A, "norm_sampling");
	if (r < 1) throw InvalidInput("norm_sampling: need r >= 1");
	if (k < 1 || k > std::min(A.rows(), A.cols()))
		throw InvalidInput("norm_sampling: need 1 <= k <= min(m, n)");
	const Vector p = column_sampling_probabilities(A);
	Rng rng(RngSpec{seed, 1});
	const std::vector<Index> draws = detail::draw_iid(p, r, rng);
	SelectionResult out;
	out.indices = detail::collapse_sorted(draws);
	out.report = build_report(A, out.indices, Method::NormSampling, k, r, 0.0);
	out.report.raw_draws = r;
	out.report.wall_ms = watch.ms();
	return out;
}

/**
 * @brief Stage-2 adaptive sampling: s extra draws proportional to squared
 * residual column norms after reconstructing from the stage-1 columns.
 *
 * Returns only the extra indices (no error report; callers evaluate the
 * union). A numerically vanished residual (||B||_F <= 1e-12 ||A||_F) sets
 * early_exact instead of sampling.
 */
inline SelectionResult adaptive_sample(const Matrix& A, const std::vector<Index>& stage1, Index s,
                                       std::uint64_t seed) {
	detail::Stopwatch watch;
	require_finite(A, "adaptive_sample");
	if (s < 1) throw InvalidInput("adaptive_sample: need s >= 1");
	const Matrix C = gather_columns(A, stage1);
	const Matrix B = A - C * (pseudo_inverse(C) * A);
	SelectionResult out;
	const double total = frobenius_norm_sq(B);
	if (std::sqrt(total) <= 1e-12 * std::sqrt(frobenius_norm_sq(A))) {
		out.early_exact = true;
		out.report.wall_ms = watch.ms();
		return out;
	}
	Vector p(B.cols());
	for (Index j = 0; j < B.cols(); ++j) p(j) = B.col(j).squaredNorm() / total;
	Rng rng(RngSpec{seed, 2});
	const std::vector<Index> draws = detail::draw_iid(p, s, rng);
	out.indices = detail::collapse_sorted(draws);
	out.report.raw_draws = s;
	out.report.wall_ms = watch.ms();
	return out;
}

/**
 * @brief Two-stage relative-error selection: a fast_frobenius run with budget
 * r_hat = ceil(d k) at accuracy eps0, then s = ceil(c0 k / eps) adaptive
 * draws on the residual. Expected squared Frobenius error (1 + eps) times
 * the optimal tail, with at most r_hat + s columns.
 */
inline SelectionResult relative_error_css(const Matrix& A, Index k, double eps, std::uint64_t seed,
                                          bool economy = false,
                                          const SparsifierOptions& opts = {}) {
	detail::Stopwatch watch;
	require_finite(A, "relative_error_css");
	if (!(k >= 2)) throw InvalidInput("relative_error_css: need k >= 2");
	if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("relative_error_css: need 0 < eps < 1");
	const RelErrParams params = make_rel_err_params(k, eps, economy);
	if (params.r_hat > A.cols())
		throw InvalidInput("relative_error_css: derived budget exceeds column count (r_hat = " +
		                   std::to_string(params.r_hat) + " > n = " + std::to_string(A.cols()) + ")");
	const SelectionResult stage1 = fast_frobenius(A, k, params.r_hat, params.eps0, seed, opts);
	const SelectionResult stage2 = adaptive_sample(A, stage1.indices, params.s, seed);
	SelectionResult out;
	out.indices = stage1.indices;
	if (!stage2.early_exact) {
		out.indices.insert(out.indices.end(), stage2.indices.begin(), stage2.indices.end());
		out.indices = detail::collapse_sorted(out.indices);
	}
	out.early_exact = stage2.early_exact;
	out.report = build_report(A, out.indices, Method::RelativeError, k, params.r_hat + params.s, eps);
	out.report.raw_draws = static_cast<Index>(stage1.indices.size()) + stage2.report.raw_draws;
	out.report.wall_ms = watch.ms();
	return out;
}

/// Uniform entry point used by the command-line front end.
inline SelectionResult run_selection(const Matrix& A, const SelectionRequest& req,
                                     const SparsifierOptions& opts = {}) {
	switch (req.method) {
		case Method::DetSpectral: return det_spectral(A, req.k, req.r, opts);
		case Method::DetSpectralVkOnly: return det_spectral_vk_only(A, req.k, req.r, opts);
		case Method::DetFrobenius: return det_frobenius(A, req.k, req.r, opts);
		case Method::FastSpectral: return fast_spectral(A, req.k, req.r, req.eps, req.seed, opts);
		case Method::FastFrobenius: return fast_frobenius(A, req.k, req.r, req.eps, req.seed, opts);
		case Method::RelativeError:
			return relative_error_css(A, req.k, req.eps, req.seed, req.economy, opts);
		case Method::NormSampling: return norm_sampling(A, req.k, req.r, req.seed);
	}
	throw InvalidInput("run_selection: unknown method");
}

}  // namespace cssel
