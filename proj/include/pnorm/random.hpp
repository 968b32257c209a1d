#pragma once

#include "pnorm/matrix.hpp"

#include <cstdint>
#include <random>

namespace pnorm {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; derives independent stream seeds from one base
/// seed so any subtask can be reproduced from (seed, stream) alone.
std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream);

inline Rng make_rng(std::uint64_t base, std::uint64_t stream) { return Rng(split_seed(base, stream)); }

/// Entries with independent standard normal real and imaginary parts.
DenseMatrix random_complex_gaussian(Index rows, Index cols, Rng& rng);
DenseVector random_complex_gaussian(Index dim, Rng& rng);

ComplexMatrix random_matrix(Index rows, Index cols, Rng& rng);

}  // namespace pnorm
