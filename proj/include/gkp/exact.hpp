#pragma once

// Exact integer-matrix routines: fraction-free (Bareiss) determinants,
// unimodularity checks, and exact inverses of unimodular matrices. Used by
// the canonization pipeline, which must not accumulate floating error.

#include "gkp/core.hpp"

#include <boost/multiprecision/eigen.hpp>

#include <cstdlib>
#include <type_traits>
#include <limits>
#include <stdexcept>

namespace gkp {

// Explicit product for big-integer matrices. Eigen's operator* is avoided
// for this scalar type: its scalar-times-matrix overload instantiates a
// boost trait that fails hard during overload resolution.
inline BigMat big_mul(const BigMat& a, const BigMat& b) {
  const int n = static_cast<int>(a.rows());
  const int k = static_cast<int>(a.cols());
  const int m = static_cast<int>(b.cols());
  if (k != b.rows()) throw std::invalid_argument("big_mul: shape mismatch");
  BigMat out(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      BigInt acc(0);
      for (int l = 0; l < k; ++l) acc += a(i, l) * b(l, j);
      out(i, j) = std::move(acc);
    }
  return out;
}

inline BigMat big_identity(int n) {
  BigMat eye(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) eye(i, j) = BigInt(i == j ? 1 : 0);
  return eye;
}

inline BigMat to_big(const Mat& m, double tol = kTauInt) {
  BigMat out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const double r = std::round(m(i, j));
      if (std::abs(m(i, j) - r) > tol)
        throw std::invalid_argument("matrix entry is not an integer");
      out(i, j) = BigInt(static_cast<long long>(r));
    }
  return out;
}

inline Mat to_double(const BigMat& m) {
  Mat out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).convert_to<double>();
  return out;
}

// Fraction-free elimination; every division below is exact.
inline BigInt bareiss_determinant(BigMat a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("determinant needs a square matrix");
  if (n == 0) return BigInt(1);
  BigInt sign(1);
  BigInt prev(1);
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int pivot = -1;
      for (int i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          pivot = i;
          break;
        }
      if (pivot < 0) return BigInt(0);
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

inline bool is_unimodular(const BigMat& r) {
  if (r.rows() != r.cols()) return false;
  const BigInt det = bareiss_determinant(r);
  return det == 1 || det == -1;
}

// True iff all entries are integers (within kTauInt) and |det| = 1, with the
// determinant evaluated in exact integer arithmetic. Template so that Eigen
// expressions bind here instead of tripping the BigMat overload.
template <typename Derived,
          std::enable_if_t<std::is_same_v<typename Derived::Scalar, double>, int> = 0>
inline bool is_unimodular(const Eigen::MatrixBase<Derived>& expr) {
  const Mat r = expr;
  if (r.rows() != r.cols()) return false;
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j)
      if (std::abs(r(i, j) - std::round(r(i, j))) > kTauInt) return false;
  return is_unimodular(to_big(r));
}

// Exact inverse of a unimodular integer matrix via integer Gauss-Jordan over
// a common denominator. inverse = adj(U)/det(U) stays integral when
// det = +-1; we eliminate with Bareiss-style cross-multiplication on the
// augmented system and divide by the final pivot product, which is exact.
inline BigMat unimodular_inverse(const BigMat& u) {
  const int n = static_cast<int>(u.rows());
  if (u.cols() != n) throw std::invalid_argument("inverse needs a square matrix");
  const BigInt det = bareiss_determinant(u);
  if (det != 1 && det != -1) throw std::invalid_argument("matrix is not unimodular");

  // Solve U X = det * I with integer row ops, then divide by det.
  BigMat a = u;
  BigMat x = big_identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) *= det;

  for (int k = 0; k < n; ++k) {
    int pivot = -1;
    for (int i = k; i < n; ++i)
      if (a(i, k) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) throw std::invalid_argument("matrix is singular");
    if (pivot != k) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(k, j), a(pivot, j));
        std::swap(x(k, j), x(pivot, j));
      }
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      const BigInt num = a(i, k);
      const BigInt den = a(k, k);
      // row_i <- row_i * den - row_k * num ; keeps entries integral.
      for (int j = 0; j < n; ++j) {
        a(i, j) = a(i, j) * den - a(k, j) * num;
        x(i, j) = x(i, j) * den - x(k, j) * num;
      }
    }
  }
  // a is now diagonal; divide each row by its pivot (exact since U X = det I
  // has the integer solution X = adj(U) * sign(det)). That solves to
  // X = det * U^{-1}, so scale by det once more to get the inverse itself.
  for (int i = 0; i < n; ++i) {
    const BigInt piv = a(i, i);
    for (int j = 0; j < n; ++j) {
      if (x(i, j) % piv != 0)
        throw std::logic_error("unimodular inverse is not integral");
      x(i, j) /= piv;
      if (det == -1) x(i, j) = -x(i, j);
    }
  }
  return x;
}

inline long long to_int64_checked(const BigInt& v) {
  if (v > BigInt(std::numeric_limits<long long>::max()) ||
      v < BigInt(std::numeric_limits<long long>::min()))
    throw std::overflow_error("integer matrix entry exceeds 64 bits");
  return v.convert_to<long long>();
}

}  // namespace gkp
