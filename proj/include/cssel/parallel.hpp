#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cssel {

/// Worker count for fork-join loops. Controlled by the CSSEL_THREADS
/// environment variable (read on every call so tests can change it at
/// runtime); unset or invalid means sequential.
inline int thread_count() {
	if (const char* env = std::getenv("CSSEL_THREADS")) {
		char* end = nullptr;
		const long v = std::strtol(env, &end, 10);
		if (end != env && v >= 1) return static_cast<int>(std::min<long>(v, 256));
	}
	return 1;
}

/**
 * @brief Deterministic fork-join loop: f(i) for i in [0, n).
 *
 * Work is split into contiguous blocks, one per worker. Each index must write
 * only to its own output slot(s); under that discipline the result is
 * bit-identical for every worker count, because no reduction or scheduling
 * decision depends on thread interleaving. Exceptions thrown by f are
 * captured and the first one is rethrown after all workers join.
 */
template <class F>
void parallel_for(std::ptrdiff_t n, F&& f) {
	if (n <= 0) return;
	const std::ptrdiff_t workers = std::min<std::ptrdiff_t>(thread_count(), n);
	if (workers <= 1) {
		for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
		return;
	}
	std::vector<std::thread> pool;
	pool.reserve(static_cast<std::size_t>(workers));
	std::mutex err_mutex;
	std::exception_ptr first_error;
	const std::ptrdiff_t chunk = (n + workers - 1) / workers;
	for (std::ptrdiff_t w = 0; w < workers; ++w) {
		const std::ptrdiff_t begin = w * chunk;
		const std::ptrdiff_t end = std::min(n, begin + chunk);
		if (begin >= end) break;
		pool.emplace_back([&f, &err_mutex, &first_error, begin, end] {
			try {
				for (std::ptrdiff_t i = begin; i < end; ++i) f(i);
			} catch (...) {
				std::lock_guard<std::mutex> lock(err_mutex);
				if (!first_error) first_error = std::current_exception();
			}
		});
	}
	for (auto& t : pool) t.join();
	if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cssel
