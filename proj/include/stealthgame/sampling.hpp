#pragma once

#include <cstdint>

#include "stealthgame/linalg.hpp"

namespace stealthgame {

/// Rows per independently seeded chunk in sample_gaussian_rows.
inline constexpr Eigen::Index kSampleChunkRows = 4096;

/// Mixes (seed, stream) into a fresh 64-bit seed (splitmix64 finaliser).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// n_samples x dim matrix whose rows are i.i.d. N(0, cov).
///
/// Each draw is S z with S the symmetric square root of cov and z standard
/// normal. Rows are generated in chunks of kSampleChunkRows, chunk k seeded
/// with derive_seed(seed, k), so the output is byte-identical for a given
/// seed no matter how chunks are distributed over worker threads.
/// Throws NumericalError if cov is not symmetric PSD.
Matrix sample_gaussian_rows(const Matrix& cov, Eigen::Index n_samples, std::uint64_t seed);

}  // namespace stealthgame
