#include "pnorm/matrix.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pnorm {

namespace {

bool all_finite(const Complex* data, Index n) {
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(data[i].real()) || !std::isfinite(data[i].imag())) return false;
  }
  return true;
}

}  // namespace

PExponent::PExponent(double value) : value_(value) {
  if (!std::isfinite(value)) {
    throw std::domain_error("exponent must be finite; use PExponent::infinity()");
  }
  if (!(value >= 1.0)) throw std::domain_error("exponent must be >= 1");
}

PExponent PExponent::infinity() {
  PExponent p;
  p.infinite_ = true;
  return p;
}

double PExponent::value() const {
  if (infinite_) throw std::domain_error("value() called on the infinite exponent");
  return value_;
}

PExponent PExponent::conjugate() const {
  if (infinite_) return PExponent(1.0);
  if (value_ == 1.0) return infinity();
  if (value_ == 2.0) return PExponent(2.0);
  return PExponent(value_ / (value_ - 1.0));
}

std::string PExponent::to_string() const {
  if (infinite_) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value_);
  return std::string(buf, res.ptr);
}

PExponent PExponent::parse(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity" || text == "INF") return infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse exponent '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("cannot parse exponent '" + text + "'");
  return PExponent(v);
}

ComplexVector::ComplexVector(DenseVector v) : v_(std::move(v)) {
  if (v_.size() < 1) throw std::invalid_argument("vector dimension must be >= 1");
  if (!all_finite(v_.data(), v_.size())) throw std::invalid_argument("vector entries must be finite");
}

ComplexVector::ComplexVector(std::initializer_list<Complex> entries)
    : ComplexVector(DenseVector(Eigen::Map<const DenseVector>(entries.begin(),
                                                              static_cast<Index>(entries.size())))) {}

ComplexVector ComplexVector::zeros(Index dim) { return ComplexVector(DenseVector::Zero(dim)); }

ComplexVector ComplexVector::unit(Index dim, Index k) {
  if (k < 0 || k >= dim) throw std::out_of_range("unit vector index out of range");
  DenseVector v = DenseVector::Zero(dim);
  v(k) = 1.0;
  return ComplexVector(std::move(v));
}

ComplexMatrix::ComplexMatrix(DenseMatrix m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.cols() < 1) throw std::invalid_argument("matrix dimensions must be >= 1");
  if (!all_finite(m_.data(), m_.size())) throw std::invalid_argument("matrix entries must be finite");
}

ComplexMatrix::ComplexMatrix(Index rows, Index cols, std::initializer_list<Complex> entries) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dimensions must be >= 1");
  if (static_cast<Index>(entries.size()) != rows * cols) {
    throw std::invalid_argument("entry count does not match rows * cols");
  }
  DenseMatrix m(rows, cols);
  auto it = entries.begin();
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = *it++;
  *this = ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::zeros(Index rows, Index cols) {
  return ComplexMatrix(DenseMatrix::Zero(rows, cols));
}

ComplexMatrix ComplexMatrix::identity(Index n) { return ComplexMatrix(DenseMatrix::Identity(n, n)); }

ComplexMatrix ComplexMatrix::unit(Index rows, Index cols, Index i, Index j) {
  if (i < 0 || i >= rows || j < 0 || j >= cols) throw std::out_of_range("unit matrix index out of range");
  DenseMatrix m = DenseMatrix::Zero(rows, cols);
  m(i, j) = 1.0;
  return ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::block(Index r0, Index c0, Index nr, Index nc) const {
  if (r0 < 0 || c0 < 0 || nr < 1 || nc < 1 || r0 + nr > rows() || c0 + nc > cols()) {
    throw std::out_of_range("block out of range");
  }
  return ComplexMatrix(DenseMatrix(m_.block(r0, c0, nr, nc)));
}

ComplexVector ComplexMatrix::apply(const ComplexVector& x) const {
  if (x.dim() != cols()) throw std::invalid_argument("matrix-vector dimension mismatch");
  return ComplexVector(DenseVector(m_ * x.dense()));
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
  return ComplexMatrix(DenseMatrix(a.dense() * b.dense()));
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum dimension mismatch");
  return ComplexMatrix(DenseMatrix(a.dense() + b.dense()));
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix difference dimension mismatch");
  return ComplexMatrix(DenseMatrix(a.dense() - b.dense()));
}

}  // namespace pnorm
