#pragma once

#include <stdexcept>
#include <string>

namespace cssel {

/// Precondition or argument violation (CLI exit code 2).
struct InvalidInput : std::runtime_error {
	explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

/// File, stream, or format problem (CLI exit code 3).
struct IOFailure : std::runtime_error {
	explicit IOFailure(const std::string& msg) : std::runtime_error(msg) {}
};

/// A mathematically guaranteed invariant failed in floating point, e.g. a
/// barrier wall crossed an eigenvalue or no admissible index exists at some
/// greedy step (CLI exit code 4).
struct NumericalBreakdown : std::runtime_error {
	explicit NumericalBreakdown(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cssel
