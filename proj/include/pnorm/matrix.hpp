#pragma once

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <string>

namespace pnorm {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Exponent p in [1, inf]. Infinity is a tag, never a floating-point inf,
/// so 1/p and p/(p-1) are only ever evaluated on finite values.
class PExponent {
 public:
  explicit PExponent(double value);
  static PExponent infinity();

  bool is_infinite() const { return infinite_; }
  /// Finite value; throws std::domain_error for the infinite tag.
  double value() const;
  bool equals(double v) const { return !infinite_ && value_ == v; }
  bool is_one() const { return equals(1.0); }
  bool is_two() const { return equals(2.0); }

  /// Hoelder conjugate: 1' = inf, inf' = 1, otherwise p / (p - 1).
  PExponent conjugate() const;

  /// "inf" for the tag, shortest round-trip decimal otherwise.
  std::string to_string() const;
  /// Accepts a decimal >= 1 or one of "inf", "infinity", "Inf".
  static PExponent parse(const std::string& text);

  friend bool operator==(const PExponent& a, const PExponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  PExponent() = default;
  double value_ = 1.0;
  bool infinite_ = false;
};

inline PExponent conjugate_exponent(PExponent p) { return p.conjugate(); }

/// Dense complex vector with at least one entry, all finite.
class ComplexVector {
 public:
  explicit ComplexVector(DenseVector v);
  ComplexVector(std::initializer_list<Complex> entries);
  static ComplexVector zeros(Index dim);
  static ComplexVector unit(Index dim, Index k);

  Index dim() const { return v_.size(); }
  Complex operator[](Index i) const { return v_(i); }
  const DenseVector& dense() const { return v_; }

 private:
  DenseVector v_;
};

/// Dense complex matrix with rows, cols >= 1 and finite entries.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(DenseMatrix m);
  /// Row-major entry list.
  ComplexMatrix(Index rows, Index cols, std::initializer_list<Complex> entries);
  static ComplexMatrix zeros(Index rows, Index cols);
  static ComplexMatrix identity(Index n);
  /// E_{ij} with a single unit entry.
  static ComplexMatrix unit(Index rows, Index cols, Index i, Index j);

  Index rows() const { return m_.rows(); }
  Index cols() const { return m_.cols(); }
  Complex operator()(Index i, Index j) const { return m_(i, j); }
  const DenseMatrix& dense() const { return m_; }

  /// Plain transpose (no conjugation), matching the bilinear pairing.
  ComplexMatrix transpose() const { return ComplexMatrix(DenseMatrix(m_.transpose())); }
  ComplexMatrix scaled(Complex s) const { return ComplexMatrix(DenseMatrix(s * m_)); }
  ComplexMatrix block(Index r0, Index c0, Index nr, Index nc) const;
  ComplexVector apply(const ComplexVector& x) const;
  double frobenius_norm() const { return m_.norm(); }

 private:
  DenseMatrix m_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace pnorm
