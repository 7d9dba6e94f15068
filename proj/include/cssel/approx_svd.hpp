#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <cssel/matrix.hpp>
#include <cssel/projection.hpp>
#include <cssel/rng.hpp>

namespace cssel {

/**
 * Randomized approximate factorizations A = B Zᵀ + E with B = A Z and
 * orthonormal Z (n x k). Two flavors:
 *
 *  - Spectral: Gaussian sketch of width 2k driven through q rounds of power
 *    iteration, with q chosen so that in expectation
 *    ||E||_2 <= (sqrt(2) + eps) ||A - A_k||_2.
 *  - Frobenius: single-pass Gaussian sketch of width k + p, p = ceil(k/eps)+1,
 *    giving in expectation ||E||_F^2 <= (1 + eps) ||A - A_k||_F^2.
 */

enum class FactorizationFlavor { Spectral, Frobenius };

struct FactorizationParams {
	Index p = 0;     ///< oversampling columns
	Index q = 0;     ///< power-iteration exponent
	RngSpec rng{};   ///< seed/stream that generated the sketch
};

struct SpectralFactorization {
	Matrix B;  ///< m x k, equal to A * Z
	Matrix Z;  ///< n x k, orthonormal columns
	Matrix E;  ///< m x n residual A - B * Zᵀ
	FactorizationFlavor flavor = FactorizationFlavor::Spectral;
	FactorizationParams params;
};

/// Dense matrix of i.i.d. standard normal entries, filled row-major from the
/// seeded stream; identical bytes for identical (seed, stream).
inline Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
	if (rows < 1 || cols < 1) throw InvalidInput("gaussian_matrix: need rows, cols >= 1");
	Matrix G(rows, cols);
	for (Index i = 0; i < rows; ++i)
		for (Index j = 0; j < cols; ++j) G(i, j) = rng.gaussian();
	return G;
}

inline Matrix gaussian_matrix(Index rows, Index cols, const RngSpec& spec) {
	Rng rng(spec);
	return gaussian_matrix(rows, cols, rng);
}

/// Y = (A Aᵀ)^q A R with R an n x width Gaussian draw, computed by
/// alternating multiplications (the Gram power is never formed).
inline Matrix power_iteration_sketch(const Matrix& A, Index width, Index q, const RngSpec& spec) {
	if (width < 1) throw InvalidInput("power_iteration_sketch: width must be >= 1");
	if (q < 0) throw InvalidInput("power_iteration_sketch: q must be >= 0");
	require_finite(A, "power_iteration_sketch");
	const Matrix R = gaussian_matrix(A.cols(), width, spec);
	Matrix Y = A * R;
	for (Index i = 0; i < q; ++i) Y = A * (A.transpose() * Y);
	return Y;
}

namespace detail {

/// Smallest integer q >= 0 with base^(1/(2q+1)) <= 1 + eps/sqrt(2), where
/// base = 1 + sqrt(k/(p-1)) + (e sqrt(k+p)/p) sqrt(min(m,n) - k) is the
/// expected one-shot spectral overshoot of the sketch.
inline Index minimal_power_exponent(Index m, Index n, Index k, Index p, double eps) {
	const double kd = static_cast<double>(k);
	const double pd = static_cast<double>(p);
	const double small = static_cast<double>(std::min(m, n) - k);
	const double base = 1.0 + std::sqrt(kd / (pd - 1.0)) +
	                    (std::exp(1.0) * std::sqrt(kd + pd) / pd) * std::sqrt(std::max(0.0, small));
	const double target = 1.0 + eps / std::sqrt(2.0);
	for (Index q = 0; q <= 10000; ++q) {
		const double root = std::pow(base, 1.0 / (2.0 * static_cast<double>(q) + 1.0));
		if (root <= target) return q;
	}
	throw NumericalBreakdown("fast_spectral_factorization: power exponent search did not converge");
}

inline void check_factorization_inputs(const Matrix& A, Index k, double eps, const char* who) {
	require_finite(A, who);
	if (A.rows() < 1 || A.cols() < 1) throw InvalidInput(std::string(who) + ": empty matrix");
	if (k < 2 || k > std::min(A.rows(), A.cols()))
		throw InvalidInput(std::string(who) + ": need 2 <= k <= min(m, n)");
	if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput(std::string(who) + ": need 0 < eps < 1");
}

inline SpectralFactorization finish_factorization(const Matrix& A, const Matrix& Y, Index k,
                                                  FactorizationFlavor flavor,
                                                  FactorizationParams params) {
	const ProjectionResult proj = project_rank_k(A, Y, k);
	SpectralFactorization fac;
	fac.Z = proj.Z;
	fac.B = A * fac.Z;
	fac.E = A - fac.B * fac.Z.transpose();
	fac.flavor = flavor;
	fac.params = params;
	return fac;
}

}  // namespace detail

/**
 * @brief Spectral-flavor randomized factorization.
 *
 * Sketch width 2k (oversampling p = k) with the minimal power exponent q that
 * drives the expected overshoot below 1 + eps/sqrt(2). Inputs of rank <= k
 * are reproduced exactly (E vanishes to rounding).
 */
inline SpectralFactorization fast_spectral_factorization(const Matrix& A, Index k, double eps,
                                                         const RngSpec& spec = {}) {
	detail::check_factorization_inputs(A, k, eps, "fast_spectral_factorization");
	const Index p = k;
	const Index q = detail::minimal_power_exponent(A.rows(), A.cols(), k, p, eps);
	const Matrix Y = power_iteration_sketch(A, k + p, q, spec);
	FactorizationParams params;
	params.p = p;
	params.q = q;
	params.rng = spec;
	return detail::finish_factorization(A, Y, k, FactorizationFlavor::Spectral, params);
}

/**
 * @brief Frobenius-flavor randomized factorization.
 *
 * Single-pass sketch of width k + p with p = ceil(k/eps) + 1 and no power
 * iteration.
 */
inline SpectralFactorization fast_frobenius_factorization(const Matrix& A, Index k, double eps,
                                                          const RngSpec& spec = {}) {
	detail::check_factorization_inputs(A, k, eps, "fast_frobenius_factorization");
	const Index p = static_cast<Index>(std::ceil(static_cast<double>(k) / eps)) + 1;
	const Matrix Y = power_iteration_sketch(A, k + p, 0, spec);
	FactorizationParams params;
	params.p = p;
	params.q = 0;
	params.rng = spec;
	return detail::finish_factorization(A, Y, k, FactorizationFlavor::Frobenius, params);
}

}  // namespace cssel
