#pragma once

#include "pnorm/matrix.hpp"
#include "pnorm/norms.hpp"

#include <string>
#include <variant>
#include <vector>

namespace pnorm {

/// Ordered block sizes (d_1, ..., d_k) of d, with prefix-sum offsets.
class Composition {
 public:
  explicit Composition(std::vector<int> parts);
  /// "1,2,1" -> (1, 2, 1).
  static Composition parse(const std::string& text);
  static Composition full(int d) { return Composition({d}); }
  static Composition diagonal(int d) { return Composition(std::vector<int>(d, 1)); }

  int length() const { return static_cast<int>(parts_.size()); }
  int total() const { return total_; }
  int part(int j) const { return parts_.at(j); }
  int offset(int j) const { return offsets_.at(j); }
  const std::vector<int>& parts() const { return parts_; }
  std::string to_string() const;

  friend bool operator==(const Composition& a, const Composition& b) { return a.parts_ == b.parts_; }

 private:
  std::vector<int> parts_;
  std::vector<int> offsets_;
  int total_ = 0;
};

/// Span of m linearly independent d x d matrices, closed under products.
class ParametrizedAlgebra {
 public:
  /// Checks independence and closure (residual <= 1e-10); throws
  /// std::invalid_argument otherwise.
  ParametrizedAlgebra(int dim, std::vector<ComplexMatrix> basis);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(basis_.size()); }
  const std::vector<ComplexMatrix>& basis() const { return basis_; }

  /// Least-squares coordinates of m in the basis.
  std::vector<Complex> coordinates(const ComplexMatrix& m) const;
  ComplexMatrix element(const std::vector<Complex>& coords) const;
  /// ||m - proj(m)||_F, absolute.
  double residual(const ComplexMatrix& m) const;

 private:
  int dim_;
  std::vector<ComplexMatrix> basis_;
  DenseMatrix stacked_;  // column i = vec(basis_[i])
};

/// A_{c(d,k)}: block-diagonal matrices for a composition of d.
class BlockDiagAlgebra {
 public:
  explicit BlockDiagAlgebra(Composition composition) : composition_(std::move(composition)) {}

  const Composition& composition() const { return composition_; }
  int dim() const { return composition_.total(); }
  bool is_full() const { return composition_.length() == 1; }
  /// Frobenius mass outside the diagonal blocks.
  double off_block_mass(const ComplexMatrix& m) const;
  /// Matrix units E_{ab} inside each block, block by block, row-major.
  ParametrizedAlgebra as_parametrized() const;

 private:
  Composition composition_;
};

using Algebra = std::variant<BlockDiagAlgebra, ParametrizedAlgebra>;

int algebra_dim(const Algebra& alg);
/// Null for non-block algebras.
const BlockDiagAlgebra* as_block(const Algebra& alg);
ParametrizedAlgebra parametrize(const Algebra& alg);
std::string describe(const Algebra& alg);

inline constexpr double kMembershipTol = 1e-10;

/// m in A, with tol relative to ||m||_F (zero is always a member).
bool membership(const ComplexMatrix& m, const Algebra& alg, double tol = kMembershipTol);

ComplexMatrix block_diag(const std::vector<ComplexMatrix>& blocks);

/// n stacked d x d algebra elements forming an nd x d matrix.
class ColumnModuleElement {
 public:
  static ColumnModuleElement from_blocks(Algebra alg, std::vector<ComplexMatrix> blocks);
  static ColumnModuleElement from_matrix(Algebra alg, ComplexMatrix matrix);

  const Algebra& algebra() const { return algebra_; }
  int n() const { return static_cast<int>(blocks_.size()); }
  int d() const { return algebra_dim(algebra_); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const std::vector<ComplexMatrix>& blocks() const { return blocks_; }

 private:
  ColumnModuleElement(Algebra alg, ComplexMatrix matrix, std::vector<ComplexMatrix> blocks);
  Algebra algebra_;
  ComplexMatrix matrix_;
  std::vector<ComplexMatrix> blocks_;
};

/// n side-by-side d x d algebra elements forming a d x nd matrix.
class RowModuleElement {
 public:
  static RowModuleElement from_blocks(Algebra alg, std::vector<ComplexMatrix> blocks);
  static RowModuleElement from_matrix(Algebra alg, ComplexMatrix matrix);

  const Algebra& algebra() const { return algebra_; }
  int n() const { return static_cast<int>(blocks_.size()); }
  int d() const { return algebra_dim(algebra_); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const std::vector<ComplexMatrix>& blocks() const { return blocks_; }

 private:
  RowModuleElement(Algebra alg, ComplexMatrix matrix, std::vector<ComplexMatrix> blocks);
  Algebra algebra_;
  ComplexMatrix matrix_;
  std::vector<ComplexMatrix> blocks_;
};

// Block extraction for block-diagonal algebras; j is 0-based.
/// a(:, [j]): the nd x d_j columns of block j.
ComplexMatrix column_slice(const ColumnModuleElement& a, int j);
/// a_[j]: the nd_j x d_j matrix of the n j-th blocks (zero rows dropped).
ComplexMatrix column_block(const ColumnModuleElement& a, int j);
/// b([j], :): the d_j x nd rows of block j.
ComplexMatrix row_slice(const RowModuleElement& b, int j);
/// b_[j]: the d_j x nd_j matrix of the n j-th blocks (zero columns dropped).
ComplexMatrix row_block(const RowModuleElement& b, int j);

/// max_j of the p->p slice norms; equals the norm of the full matrix for
/// block-diagonal algebras. Throws std::invalid_argument otherwise.
double stacked_norm(const ColumnModuleElement& a, PExponent p, const OptimizerConfig& cfg = {});
double stacked_norm(const RowModuleElement& b, PExponent p, const OptimizerConfig& cfg = {});

/// Norm of the element as an nd x d (column) or d x nd (row) matrix at p->p.
double element_norm(const ColumnModuleElement& a, PExponent p, const OptimizerConfig& cfg = {});
double element_norm(const RowModuleElement& b, PExponent p, const OptimizerConfig& cfg = {});

}  // namespace pnorm
