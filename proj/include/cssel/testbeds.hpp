#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <cssel/matrix.hpp>
#include <cssel/rng.hpp>

namespace cssel {

/**
 * Hard-instance generators with closed-form reconstruction errors, plus a
 * seeded generator for matrices with a prescribed singular spectrum.
 */

enum class LowerBoundVariant { SpectralSingle, FrobeniusBlock };

struct LowerBoundSpec {
	LowerBoundVariant variant = LowerBoundVariant::SpectralSingle;
	Index n = 0;
	Index k = 1;       ///< FrobeniusBlock block count (must divide n)
	double alpha = 0.0;
};

/**
 * @brief (n+1) x n matrix whose column j is e_1 + alpha e_{j+2}.
 *
 * Its Gram matrix is 1 1ᵀ + alpha² I, so sigma_1² = n + alpha² and every other
 * squared singular value equals alpha². Any r columns reconstruct it equally
 * well, with
 *
 *   ||A - C C⁺ A||_2² = alpha² (n + alpha²) / (r + alpha²)
 *   ||A - C C⁺ A||_F² = alpha² (n - r) (1 + 1/(r + alpha²))
 *
 * and optimal mixing weights 1/(r + alpha²) onto each selected column.
 */
inline Matrix gen_spectral_lb(Index n, double alpha) {
	if (n < 2) throw InvalidInput("gen_spectral_lb: need n >= 2");
	if (!(alpha > 0.0)) throw InvalidInput("gen_spectral_lb: need alpha > 0");
	Matrix A = Matrix::Zero(n + 1, n);
	for (Index j = 0; j < n; ++j) {
		A(0, j) = 1.0;
		A(j + 1, j) = alpha;
	}
	return A;
}

/// Block-diagonal stack of k copies of gen_spectral_lb(n/k, alpha); the
/// optimal rank-k tail is (n - k) alpha² and balanced column picks meet the
/// closed-form Frobenius floor (n-r)/(n-k) (1 + k/(r + k alpha²)) times it.
inline Matrix gen_frobenius_lb(Index n, Index k, double alpha) {
	if (k < 1) throw InvalidInput("gen_frobenius_lb: need k >= 1");
	if (n < 2 * k || n % k != 0)
		throw InvalidInput("gen_frobenius_lb: k must divide n with n/k >= 2");
	if (!(alpha > 0.0)) throw InvalidInput("gen_frobenius_lb: need alpha > 0");
	const Index nb = n / k;
	const Matrix block = gen_spectral_lb(nb, alpha);
	Matrix B = Matrix::Zero(k * (nb + 1), n);
	for (Index b = 0; b < k; ++b)
		B.block(b * (nb + 1), b * nb, nb + 1, nb) = block;
	return B;
}

namespace detail {

/// Thin orthonormal factor from the QR of a seeded Gaussian draw, with the
/// sign convention R_jj >= 0 so the result is reproduction-stable.
inline Matrix random_orthonormal(Index rows, Index cols, Rng& rng) {
	Matrix G(rows, cols);
	for (Index i = 0; i < rows; ++i)
		for (Index j = 0; j < cols; ++j) G(i, j) = rng.gaussian();
	const Eigen::HouseholderQR<Matrix> qr(G);
	Matrix Q = qr.householderQ() * Matrix::Identity(rows, cols);
	const Matrix& QR = qr.matrixQR();
	for (Index j = 0; j < cols; ++j)
		if (QR(j, j) < 0.0) Q.col(j) = -Q.col(j);
	return Q;
}

}  // namespace detail

/// Seeded m x n matrix with the given (nonincreasing, nonnegative) singular
/// values and Haar-ish random singular subspaces.
inline Matrix gen_spectrum(Index m, Index n, const Vector& sigmas, std::uint64_t seed) {
	if (m < 1 || n < 1) throw InvalidInput("gen_spectrum: need m, n >= 1");
	const Index t = sigmas.size();
	if (t < 1 || t > std::min(m, n))
		throw InvalidInput("gen_spectrum: need 1 <= len(sigmas) <= min(m, n)");
	for (Index i = 0; i < t; ++i) {
		if (!(sigmas(i) >= 0.0) || !std::isfinite(sigmas(i)))
			throw InvalidInput("gen_spectrum: singular values must be finite and >= 0");
		if (i > 0 && sigmas(i) > sigmas(i - 1))
			throw InvalidInput("gen_spectrum: singular values must be nonincreasing");
	}
	Rng rng(RngSpec{seed, 0});
	const Matrix U = detail::random_orthonormal(m, t, rng);
	const Matrix V = detail::random_orthonormal(n, t, rng);
	return U * sigmas.asDiagonal() * V.transpose();
}

}  // namespace cssel
