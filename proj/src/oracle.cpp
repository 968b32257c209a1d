#include "pnorm/detail/kernels.hpp"
#include "pnorm/norms.hpp"
#include "pnorm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace pnorm {

namespace {

int floor_pow2(int r) {
  int v = 1;
  while (v * 2 <= r) v *= 2;
  return v;
}

int magnitude_steps(int resolution) { return floor_pow2(std::max(1, resolution)); }
int phase_count(int resolution) { return std::max(8, floor_pow2(std::max(1, resolution))); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// All compositions of total into dim nonnegative parts, lexicographic.
void enumerate_compositions(int dim, int total, std::vector<std::vector<int>>& out) {
  std::vector<int> parts(dim, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == dim - 1) {
      parts[pos] = left;
      out.push_back(parts);
      return;
    }
    for (int k = left; k >= 0; --k) {
      parts[pos] = k;
      self(self, pos + 1, left - k);
    }
  };
  rec(rec, 0, total);
}

// Max of ||sum_i phase_i * cols_i||_q over the phase odometer, with the
// first column's phase fixed to 1.
double phase_sweep(const std::vector<DenseVector>& cols, const std::vector<Complex>& phases, PExponent q) {
  const std::size_t s = cols.size();
  const int P = static_cast<int>(phases.size());
  std::vector<int> digit(s, 0);
  DenseVector y(cols[0].size());
  double best = 0.0;
  while (true) {
    y = cols[0];
    for (std::size_t i = 1; i < s; ++i) y += phases[digit[i]] * cols[i];
    best = std::max(best, detail::p_norm(y, q));
    std::size_t pos = 1;
    while (pos < s && ++digit[pos] == P) digit[pos++] = 0;
    if (pos >= s) break;
  }
  return best;
}

}  // namespace

std::uint64_t oracle_grid_size(Index dim, PExponent p, int resolution) {
  const int N = magnitude_steps(resolution);
  const double P = phase_count(resolution);
  const int d = static_cast<int>(dim);
  double total = 0.0;
  if (p.is_infinite()) {
    total = std::pow(P, d - 1);
  } else {
    for (int s = 1; s <= std::min(d, N); ++s) total += binomial(d, s) * binomial(N - 1, s - 1) * std::pow(P, s - 1);
  }
  if (total >= 1.8e19) return UINT64_MAX;
  return static_cast<std::uint64_t>(total);
}

double oracle_covering_radius(Index dim, PExponent p, int resolution) {
  const double phase_err = std::numbers::pi / phase_count(resolution);
  // For p = inf the grid covers the extreme points |xi_i| = 1, where a
  // convex objective attains its maximum over the ball.
  if (p.is_infinite()) return phase_err;
  // Rounding |xi| / ||xi||_1 to the simplex grid moves each coordinate by
  // less than 1/N; radial projection to the p-sphere at most doubles the
  // relative error, and ||.||_p >= d^(1/p - 1) ||.||_1 on the simplex.
  const double rel = static_cast<double>(dim) / magnitude_steps(resolution);
  return (p.is_one() ? rel : 2.0 * rel) + phase_err;
}

double oracle_upper_bound(double oracle_value, Index dim, PExponent p, int resolution) {
  const double delta = oracle_covering_radius(dim, p, resolution);
  if (delta >= 1.0) return std::numeric_limits<double>::infinity();
  return oracle_value / (1.0 - delta);
}

double op_norm_oracle(const ComplexMatrix& a, PExponent p, PExponent q, int resolution, std::uint64_t budget) {
  if (resolution < 1) throw std::invalid_argument("oracle resolution must be >= 1");
  const std::uint64_t size = oracle_grid_size(a.cols(), p, resolution);
  if (size > budget) {
    throw BudgetExceeded("oracle grid of " + std::to_string(size) + " points exceeds budget " +
                         std::to_string(budget));
  }
  const DenseMatrix& m = a.dense();
  const int d = static_cast<int>(m.cols());
  const int P = phase_count(resolution);
  std::vector<Complex> phases(P);
  for (int k = 0; k < P; ++k) phases[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / P);

  std::vector<std::vector<int>> cells;
  if (p.is_infinite()) {
    cells.push_back({});
  } else {
    enumerate_compositions(d, magnitude_steps(resolution), cells);
  }
  std::vector<double> cell_max(cells.size(), 0.0);
  parallel_for(cells.size(), [&](std::size_t c) {
    double scale = 1.0;
    if (!p.is_infinite()) {
      DenseVector k(d);
      for (int i = 0; i < d; ++i) k(i) = cells[c][i];
      scale = 1.0 / detail::p_norm(k, p);
    }
    std::vector<DenseVector> cols;
    for (int i = 0; i < d; ++i) {
      double mag = 1.0;
      if (!p.is_infinite()) {
        if (cells[c][i] == 0) continue;
        mag = cells[c][i] * scale;
      }
      cols.emplace_back(mag * m.col(i));
    }
    cell_max[c] = phase_sweep(cols, phases, q);
  });
  return *std::max_element(cell_max.begin(), cell_max.end());
}

}  // namespace pnorm
