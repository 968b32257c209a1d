#include "pnorm/block_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pnorm {

namespace {

DenseVector vec(const DenseMatrix& m) { return Eigen::Map<const DenseVector>(m.data(), m.size()); }

[[noreturn]] void not_block(const char* what) {
  throw std::invalid_argument(std::string(what) + " requires a block-diagonal algebra");
}

const BlockDiagAlgebra& require_block(const Algebra& alg, const char* what) {
  const BlockDiagAlgebra* blk = as_block(alg);
  if (!blk) not_block(what);
  return *blk;
}

void check_block_index(const BlockDiagAlgebra& alg, int j) {
  if (j < 0 || j >= alg.composition().length()) throw std::out_of_range("block index out of range");
}

void check_members(const Algebra& alg, const std::vector<ComplexMatrix>& blocks) {
  const int d = algebra_dim(alg);
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    if (blocks[l].rows() != d || blocks[l].cols() != d) {
      throw std::invalid_argument("module block " + std::to_string(l) + " is not " + std::to_string(d) + "x" +
                                  std::to_string(d));
    }
    if (!membership(blocks[l], alg)) {
      throw std::invalid_argument("module block " + std::to_string(l) + " is not in the algebra " + describe(alg));
    }
  }
}

}  // namespace

Composition::Composition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("composition needs at least one part");
  offsets_.reserve(parts_.size());
  for (int part : parts_) {
    if (part < 1) throw std::invalid_argument("composition parts must be >= 1");
    offsets_.push_back(total_);
    total_ += part;
  }
}

Composition Composition::parse(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse composition '" + text + "'");
    }
    if (used != item.size()) throw std::invalid_argument("cannot parse composition '" + text + "'");
    parts.push_back(v);
  }
  return Composition(std::move(parts));
}

std::string Composition::to_string() const {
  std::string s;
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    if (j) s += ',';
    s += std::to_string(parts_[j]);
  }
  return s;
}

ParametrizedAlgebra::ParametrizedAlgebra(int dim, std::vector<ComplexMatrix> basis)
    : dim_(dim), basis_(std::move(basis)) {
  if (dim_ < 1) throw std::invalid_argument("algebra dimension must be >= 1");
  if (basis_.empty()) throw std::invalid_argument("algebra basis must be nonempty");
  stacked_.resize(static_cast<Index>(dim_) * dim_, static_cast<Index>(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i].rows() != dim_ || basis_[i].cols() != dim_) {
      throw std::invalid_argument("basis matrix " + std::to_string(i) + " has the wrong shape");
    }
    stacked_.col(static_cast<Index>(i)) = vec(basis_[i].dense());
  }
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(stacked_);
  qr.setThreshold(1e-10);
  if (qr.rank() != static_cast<Index>(basis_.size())) {
    throw std::invalid_argument("algebra basis is linearly dependent");
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      const ComplexMatrix prod = basis_[i] * basis_[j];
      if (residual(prod) > 1e-10 * std::max(1.0, prod.frobenius_norm())) {
        throw std::invalid_argument("algebra basis is not closed under multiplication (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
      }
    }
  }
}

std::vector<Complex> ParametrizedAlgebra::coordinates(const ComplexMatrix& m) const {
  if (m.rows() != dim_ || m.cols() != dim_) throw std::invalid_argument("coordinates: dimension mismatch");
  const DenseVector c = stacked_.colPivHouseholderQr().solve(vec(m.dense()));
  return {c.data(), c.data() + c.size()};
}

ComplexMatrix ParametrizedAlgebra::element(const std::vector<Complex>& coords) const {
  if (coords.size() != basis_.size()) throw std::invalid_argument("element: coordinate count mismatch");
  DenseMatrix m = DenseMatrix::Zero(dim_, dim_);
  for (std::size_t i = 0; i < coords.size(); ++i) m += coords[i] * basis_[i].dense();
  return ComplexMatrix(std::move(m));
}

double ParametrizedAlgebra::residual(const ComplexMatrix& m) const {
  if (m.rows() != dim_ || m.cols() != dim_) throw std::invalid_argument("membership: dimension mismatch");
  const DenseVector v = vec(m.dense());
  const DenseVector c = stacked_.colPivHouseholderQr().solve(v);
  return (stacked_ * c - v).norm();
}

double BlockDiagAlgebra::off_block_mass(const ComplexMatrix& m) const {
  if (m.rows() != dim() || m.cols() != dim()) throw std::invalid_argument("membership: dimension mismatch");
  std::vector<int> block_of(dim());
  for (int j = 0; j < composition_.length(); ++j)
    for (int r = 0; r < composition_.part(j); ++r) block_of[composition_.offset(j) + r] = j;
  double mass2 = 0.0;
  for (int r = 0; r < dim(); ++r)
    for (int c = 0; c < dim(); ++c)
      if (block_of[r] != block_of[c]) mass2 += std::norm(m(r, c));
  return std::sqrt(mass2);
}

ParametrizedAlgebra BlockDiagAlgebra::as_parametrized() const {
  std::vector<ComplexMatrix> basis;
  for (int j = 0; j < composition_.length(); ++j) {
    const int o = composition_.offset(j), s = composition_.part(j);
    for (int r = 0; r < s; ++r)
      for (int c = 0; c < s; ++c) basis.push_back(ComplexMatrix::unit(dim(), dim(), o + r, o + c));
  }
  return ParametrizedAlgebra(dim(), std::move(basis));
}

int algebra_dim(const Algebra& alg) {
  return std::visit([](const auto& a) { return a.dim(); }, alg);
}

const BlockDiagAlgebra* as_block(const Algebra& alg) { return std::get_if<BlockDiagAlgebra>(&alg); }

ParametrizedAlgebra parametrize(const Algebra& alg) {
  if (const auto* blk = as_block(alg)) return blk->as_parametrized();
  return std::get<ParametrizedAlgebra>(alg);
}

std::string describe(const Algebra& alg) {
  if (const auto* blk = as_block(alg)) return "block(" + blk->composition().to_string() + ")";
  const auto& pa = std::get<ParametrizedAlgebra>(alg);
  return "basis(dim=" + std::to_string(pa.dim()) + ", m=" + std::to_string(pa.size()) + ")";
}

bool membership(const ComplexMatrix& m, const Algebra& alg, double tol) {
  const double scale = m.frobenius_norm();
  if (const auto* blk = as_block(alg)) return blk->off_block_mass(m) <= tol * scale;
  return std::get<ParametrizedAlgebra>(alg).residual(m) <= tol * scale;
}

ComplexMatrix block_diag(const std::vector<ComplexMatrix>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("block_diag needs at least one block");
  Index total = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols()) throw std::invalid_argument("block_diag blocks must be square");
    total += b.rows();
  }
  DenseMatrix m = DenseMatrix::Zero(total, total);
  Index o = 0;
  for (const auto& b : blocks) {
    m.block(o, o, b.rows(), b.cols()) = b.dense();
    o += b.rows();
  }
  return ComplexMatrix(std::move(m));
}

ColumnModuleElement::ColumnModuleElement(Algebra alg, ComplexMatrix matrix, std::vector<ComplexMatrix> blocks)
    : algebra_(std::move(alg)), matrix_(std::move(matrix)), blocks_(std::move(blocks)) {}

ColumnModuleElement ColumnModuleElement::from_blocks(Algebra alg, std::vector<ComplexMatrix> blocks) {
  if (blocks.empty()) throw std::invalid_argument("module element needs n >= 1 blocks");
  check_members(alg, blocks);
  const Index d = algebra_dim(alg);
  DenseMatrix m(d * static_cast<Index>(blocks.size()), d);
  for (std::size_t l = 0; l < blocks.size(); ++l) m.block(static_cast<Index>(l) * d, 0, d, d) = blocks[l].dense();
  return ColumnModuleElement(std::move(alg), ComplexMatrix(std::move(m)), std::move(blocks));
}

ColumnModuleElement ColumnModuleElement::from_matrix(Algebra alg, ComplexMatrix matrix) {
  const Index d = algebra_dim(alg);
  if (matrix.cols() != d || matrix.rows() % d != 0) {
    throw std::invalid_argument("column module element must be nd x d with d=" + std::to_string(d));
  }
  std::vector<ComplexMatrix> blocks;
  for (Index l = 0; l < matrix.rows() / d; ++l) blocks.push_back(matrix.block(l * d, 0, d, d));
  check_members(alg, blocks);
  return ColumnModuleElement(std::move(alg), std::move(matrix), std::move(blocks));
}

RowModuleElement::RowModuleElement(Algebra alg, ComplexMatrix matrix, std::vector<ComplexMatrix> blocks)
    : algebra_(std::move(alg)), matrix_(std::move(matrix)), blocks_(std::move(blocks)) {}

RowModuleElement RowModuleElement::from_blocks(Algebra alg, std::vector<ComplexMatrix> blocks) {
  if (blocks.empty()) throw std::invalid_argument("module element needs n >= 1 blocks");
  check_members(alg, blocks);
  const Index d = algebra_dim(alg);
  DenseMatrix m(d, d * static_cast<Index>(blocks.size()));
  for (std::size_t l = 0; l < blocks.size(); ++l) m.block(0, static_cast<Index>(l) * d, d, d) = blocks[l].dense();
  return RowModuleElement(std::move(alg), ComplexMatrix(std::move(m)), std::move(blocks));
}

RowModuleElement RowModuleElement::from_matrix(Algebra alg, ComplexMatrix matrix) {
  const Index d = algebra_dim(alg);
  if (matrix.rows() != d || matrix.cols() % d != 0) {
    throw std::invalid_argument("row module element must be d x nd with d=" + std::to_string(d));
  }
  std::vector<ComplexMatrix> blocks;
  for (Index l = 0; l < matrix.cols() / d; ++l) blocks.push_back(matrix.block(0, l * d, d, d));
  check_members(alg, blocks);
  return RowModuleElement(std::move(alg), std::move(matrix), std::move(blocks));
}

ComplexMatrix column_slice(const ColumnModuleElement& a, int j) {
  const auto& alg = require_block(a.algebra(), "column_slice");
  check_block_index(alg, j);
  const auto& c = alg.composition();
  return a.matrix().block(0, c.offset(j), a.matrix().rows(), c.part(j));
}

ComplexMatrix column_block(const ColumnModuleElement& a, int j) {
  const auto& alg = require_block(a.algebra(), "column_block");
  check_block_index(alg, j);
  const auto& c = alg.composition();
  const int s = c.part(j), o = c.offset(j);
  DenseMatrix m(static_cast<Index>(a.n()) * s, s);
  for (int l = 0; l < a.n(); ++l) m.block(static_cast<Index>(l) * s, 0, s, s) = a.blocks()[l].dense().block(o, o, s, s);
  return ComplexMatrix(std::move(m));
}

ComplexMatrix row_slice(const RowModuleElement& b, int j) {
  const auto& alg = require_block(b.algebra(), "row_slice");
  check_block_index(alg, j);
  const auto& c = alg.composition();
  return b.matrix().block(c.offset(j), 0, c.part(j), b.matrix().cols());
}

ComplexMatrix row_block(const RowModuleElement& b, int j) {
  const auto& alg = require_block(b.algebra(), "row_block");
  check_block_index(alg, j);
  const auto& c = alg.composition();
  const int s = c.part(j), o = c.offset(j);
  DenseMatrix m(s, static_cast<Index>(b.n()) * s);
  for (int l = 0; l < b.n(); ++l) m.block(0, static_cast<Index>(l) * s, s, s) = b.blocks()[l].dense().block(o, o, s, s);
  return ComplexMatrix(std::move(m));
}

double stacked_norm(const ColumnModuleElement& a, PExponent p, const OptimizerConfig& cfg) {
  const auto& alg = require_block(a.algebra(), "stacked_norm");
  double best = 0.0;
  for (int j = 0; j < alg.composition().length(); ++j) {
    best = std::max(best, op_norm_estimate(column_slice(a, j), p, p, cfg).value);
  }
  return best;
}

double stacked_norm(const RowModuleElement& b, PExponent p, const OptimizerConfig& cfg) {
  const auto& alg = require_block(b.algebra(), "stacked_norm");
  double best = 0.0;
  for (int j = 0; j < alg.composition().length(); ++j) {
    best = std::max(best, op_norm_estimate(row_slice(b, j), p, p, cfg).value);
  }
  return best;
}

double element_norm(const ColumnModuleElement& a, PExponent p, const OptimizerConfig& cfg) {
  return op_norm_estimate(a.matrix(), p, p, cfg).value;
}

double element_norm(const RowModuleElement& b, PExponent p, const OptimizerConfig& cfg) {
  return op_norm_estimate(b.matrix(), p, p, cfg).value;
}

}  // namespace pnorm
