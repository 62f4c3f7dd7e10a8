#include "stealthgame/sampling.hpp"

#include <cstdlib>
#include <random>
#include <string>

#include <boost/random/normal_distribution.hpp>

#include "stealthgame/errors.hpp"
#include "stealthgame/parallel.hpp"

namespace stealthgame {

unsigned worker_count() {
  if (const char* env = std::getenv("STEALTHGAME_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix sample_gaussian_rows(const Matrix& cov, Eigen::Index n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("sample count must be positive");
  if (!is_symmetric(cov)) throw NumericalError("covariance is not symmetric");
  if (min_eigenvalue(cov) < -kPsdTolerance * std::max(1.0, cov.diagonal().maxCoeff())) {
    throw NumericalError("covariance is not positive semidefinite");
  }
  const Matrix root = symmetric_sqrt(cov);
  const Eigen::Index dim = cov.rows();
  Matrix out(n_samples, dim);

  const auto chunks =
      static_cast<std::size_t>((n_samples + kSampleChunkRows - 1) / kSampleChunkRows);
  parallel_for(chunks, [&](std::size_t k) {
    const Eigen::Index first = static_cast<Eigen::Index>(k) * kSampleChunkRows;
    const Eigen::Index rows = std::min(kSampleChunkRows, n_samples - first);
    std::mt19937_64 rng(derive_seed(seed, k));
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(rows, dim);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) z(r, c) = normal(rng);
    }
    // root is symmetric, so (root z^T)^T = z root
    out.middleRows(first, rows).noalias() = z * root;
  });
  return out;
}

}  // namespace stealthgame
