#include "pnorm/random.hpp"
#include "pnorm/parallel.hpp"

#include <cstdlib>
#include <string>

namespace pnorm {

std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DenseMatrix random_complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(rows, cols);
  // Fill in row-major order so results read naturally when printed.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

DenseVector random_complex_gaussian(Index dim, Rng& rng) {
  return random_complex_gaussian(dim, 1, rng);
}

ComplexMatrix random_matrix(Index rows, Index cols, Rng& rng) {
  return ComplexMatrix(random_complex_gaussian(rows, cols, rng));
}

unsigned thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("PNORM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

}  // namespace pnorm
