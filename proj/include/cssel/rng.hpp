#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <cssel/errors.hpp>

namespace cssel {

/// Identifies one reproducible random stream. Same (seed, stream) always
/// yields the same sequence; distinct streams are independent substreams of
/// the same seed.
struct RngSpec {
	std::uint64_t seed = 0;
	std::uint64_t stream = 0;
};

/**
 * @brief Seed-deterministic random source.
 *
 * mt19937_64 and seed_seq are fully specified by the C++ standard, so the raw
 * bit stream is identical on every platform. Uniform and Gaussian variates
 * are derived with explicit arithmetic rather than the standard distribution
 * classes, whose output is implementation-defined and therefore not
 * reproducible across standard libraries.
 */
class Rng {
public:
	explicit Rng(RngSpec spec) {
		std::seed_seq seq{
			static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
			static_cast<std::uint32_t>(spec.stream), static_cast<std::uint32_t>(spec.stream >> 32)};
		gen_.seed(seq);
	}

	/// Uniform draw in the open interval (0, 1) with 53-bit resolution.
	double uniform01() {
		return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
	}

	/// Standard normal draw via Box-Muller; consumes exactly two uniforms per
	/// call (no cached second variate, keeping consumption positional).
	double gaussian() {
		const double u1 = uniform01();
		const double u2 = uniform01();
		return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
	}

	std::uint64_t next_u64() { return gen_(); }

private:
	static constexpr double kPi = 3.14159265358979323846;
	std::mt19937_64 gen_;
};

/**
 * @brief Inverse-CDF draw from unnormalized cumulative sums.
 *
 * cum must be nondecreasing with cum.back() > 0. Returns the smallest index i
 * with cum[i] > u01 * cum.back(); zero-mass indices are never returned, and a
 * draw that rounds onto the very top of the range falls back to the last
 * index carrying mass.
 */
inline std::ptrdiff_t sample_from_cumulative(const std::vector<double>& cum, double u01) {
	if (cum.empty() || !(cum.back() > 0.0))
		throw InvalidInput("sample_from_cumulative: no probability mass");
	const double target = u01 * cum.back();
	std::ptrdiff_t i = std::upper_bound(cum.begin(), cum.end(), target) - cum.begin();
	if (i >= static_cast<std::ptrdiff_t>(cum.size())) i = static_cast<std::ptrdiff_t>(cum.size()) - 1;
	while (i > 0 && cum[static_cast<std::size_t>(i)] == cum[static_cast<std::size_t>(i) - 1]) --i;
	return i;
}

}  // namespace cssel
