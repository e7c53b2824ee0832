#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace htrm {

using Rng = std::mt19937_64;

// Stream seeds are a pure function of (seed, stream), so results do not depend on
// how tasks are spread over workers.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

// Runs task(i) for i in [0, count) on `jobs` threads (jobs <= 0 picks hardware concurrency).
void parallel_for(int count, int jobs, const std::function<void(int)>& task);

}  // namespace htrm
