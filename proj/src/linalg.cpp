#include "pocs/linalg.hpp"

#include <string>

namespace pocs {

namespace {

void check_matvec(Index rows, Index cols, Index vlen, const char* op) {
  if (cols != vlen) {
    throw DimensionMismatch(std::string(op) + ": matrix is " + std::to_string(rows) + "x" +
                            std::to_string(cols) + ", vector has length " + std::to_string(vlen));
  }
}

void check_same_length(Index a, Index b, const char* op) {
  if (a != b) {
    throw DimensionMismatch(std::string(op) + ": lengths " + std::to_string(a) + " and " +
                            std::to_string(b) + " differ");
  }
}

}  // namespace

RealVector matvec(const RealMatrix& A, const RealVector& v) {
  check_matvec(A.rows(), A.cols(), v.size(), "matvec");
  return A * v;
}

ComplexVector matvec(const ComplexMatrix& A, const ComplexVector& v) {
  check_matvec(A.rows(), A.cols(), v.size(), "matvec");
  return A * v;
}

ComplexVector matvec(const ComplexMatrix& A, const RealVector& v) {
  check_matvec(A.rows(), A.cols(), v.size(), "matvec");
  return A * v.cast<Complex>();
}

RealVector adjoint_matvec(const RealMatrix& A, const RealVector& w) {
  check_matvec(A.cols(), A.rows(), w.size(), "adjoint_matvec");
  return A.transpose() * w;
}

ComplexVector adjoint_matvec(const ComplexMatrix& A, const ComplexVector& w) {
  check_matvec(A.cols(), A.rows(), w.size(), "adjoint_matvec");
  return A.adjoint() * w;
}

double norm_l1(const RealVector& v) { return v.lpNorm<1>(); }

double norm_l1(const ComplexVector& v) { return v.cwiseAbs().sum(); }

double norm_l2(const RealVector& v) { return v.norm(); }

double norm_l2(const ComplexVector& v) { return v.norm(); }

double inner_product(const RealVector& u, const RealVector& w) {
  check_same_length(u.size(), w.size(), "inner_product");
  return u.dot(w);
}

Complex inner_product(const ComplexVector& u, const ComplexVector& w) {
  check_same_length(u.size(), w.size(), "inner_product");
  return u.dot(w);  // Eigen's dot conjugates the first argument
}

bool all_finite(const RealMatrix& A) { return A.allFinite(); }

bool all_finite(const ComplexMatrix& A) {
  return A.real().allFinite() && A.imag().allFinite();
}

bool all_finite(const RealVector& v) { return v.allFinite(); }

bool all_finite(const ComplexVector& v) {
  return v.real().allFinite() && v.imag().allFinite();
}

}  // namespace pocs
