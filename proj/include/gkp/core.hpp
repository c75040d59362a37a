#pragma once

// Core linear-algebra aliases, numeric tolerances, and quadrature-ordering
// primitives shared by every other header in the library.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gkp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using IVec = Eigen::VectorXi;

// Arbitrary-width integers: storage via Eigen, arithmetic routines of our own
// (Eigen's LU would divide, which truncates on integers).
using BigInt = boost::multiprecision::cpp_int;
using BigMat = Eigen::Matrix<BigInt, Eigen::Dynamic, Eigen::Dynamic>;

// Absolute tolerance for detecting integer-valued matrix entries (Gram,
// duality products).
inline constexpr double kTauInt = 1e-9;
// Max-norm tolerance for the symplectic check S*Omega*S^T = Omega.
inline constexpr double kTauSympl = 1e-9;
// Reconstruction tolerance for matrix decompositions (RLQ etc.).
inline constexpr double kTauDecomp = 1e-9;
// Tolerance when rounding displacement coefficients to integers.
inline constexpr double kCoeffTol = 1e-6;

inline constexpr double kPi = std::numbers::pi;
inline const double kTwoPi = 2.0 * std::numbers::pi;
inline const double kSqrtPi = std::sqrt(std::numbers::pi);
inline const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

// Quadrature ordering of phase-space coordinates: interleaved
// (q1,p1,q2,p2,...) or stacked (q1,...,qN,p1,...,pN).
enum class Ordering { qpqp, qqpp };

inline std::string to_string(Ordering o) {
  return o == Ordering::qpqp ? "qpqp" : "qqpp";
}

inline Ordering ordering_from_string(const std::string& s) {
  if (s == "qpqp") return Ordering::qpqp;
  if (s == "qqpp") return Ordering::qqpp;
  throw std::invalid_argument("unknown ordering: " + s);
}

// Symplectic form Omega for n modes in the given ordering.
// qpqp: block-diagonal in omega = [[0,1],[-1,0]]; qqpp: [[0,I],[-I,0]].
// Satisfies Omega^2 = -I and Omega^T = -Omega.
inline Mat symplectic_form(int n_modes, Ordering ordering) {
  if (n_modes < 1) throw std::invalid_argument("n_modes must be >= 1");
  const int n = 2 * n_modes;
  Mat omega = Mat::Zero(n, n);
  if (ordering == Ordering::qpqp) {
    for (int i = 0; i < n_modes; ++i) {
      omega(2 * i, 2 * i + 1) = 1.0;
      omega(2 * i + 1, 2 * i) = -1.0;
    }
  } else {
    for (int i = 0; i < n_modes; ++i) {
      omega(i, n_modes + i) = 1.0;
      omega(n_modes + i, i) = -1.0;
    }
  }
  return omega;
}

// Permutation taking qpqp coordinates to qqpp coordinates:
// (T x)_i = q_i for i < N, p_{i-N} for i >= N.
inline Mat ordering_permutation(int n_modes) {
  const int n = 2 * n_modes;
  Mat t = Mat::Zero(n, n);
  for (int i = 0; i < n_modes; ++i) {
    t(i, 2 * i) = 1.0;
    t(n_modes + i, 2 * i + 1) = 1.0;
  }
  return t;
}

// Reorder a phase-space vector between orderings.
inline Vec reorder_vector(const Vec& x, Ordering from, Ordering to) {
  if (x.size() % 2 != 0) throw std::invalid_argument("vector dimension must be even");
  if (from == to) return x;
  const int n_modes = static_cast<int>(x.size()) / 2;
  Vec y(x.size());
  if (from == Ordering::qpqp) {
    for (int i = 0; i < n_modes; ++i) {
      y[i] = x[2 * i];
      y[n_modes + i] = x[2 * i + 1];
    }
  } else {
    for (int i = 0; i < n_modes; ++i) {
      y[2 * i] = x[i];
      y[2 * i + 1] = x[n_modes + i];
    }
  }
  return y;
}

// Reorder a generator matrix between orderings. Rows are lattice vectors, so
// changing coordinate convention permutes columns: M_to = M_from * T^T where
// T maps coordinates from->to. Applying the reverse reorder is the inverse.
inline Mat reorder(const Mat& m, Ordering from, Ordering to) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0)
    throw std::invalid_argument("matrix dimensions must be even");
  if (from == to) return m;
  const int n_modes = static_cast<int>(m.cols()) / 2;
  const Mat t = ordering_permutation(n_modes);
  if (from == Ordering::qpqp) return m * t.transpose();
  return m * t;
}

}  // namespace gkp
