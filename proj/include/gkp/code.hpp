#pragma once

// GkpCode: a GKP quantum error-correcting code presented as a lattice. Rows
// of the generator M are the sqrt(2*pi)-scaled stabilizer translation
// vectors; the symplectic Gram matrix A = M * Omega * M^T must be integral.

#include "gkp/core.hpp"
#include "gkp/exact.hpp"

#include <optional>
#include <string>
#include <utility>

namespace gkp {

struct SymplecticForm {
  int n_modes = 0;
  Ordering ordering = Ordering::qpqp;
  Mat matrix;
};

inline SymplecticForm make_symplectic_form(int n_modes, Ordering ordering) {
  return SymplecticForm{n_modes, ordering, symplectic_form(n_modes, ordering)};
}

class GkpCode {
 public:
  // Validates symplectic integrality on construction; the instance is
  // immutable afterwards and safe to share across threads.
  GkpCode(Mat generator, Ordering ordering)
      : ordering_(ordering), m_(std::move(generator)) {
    if (m_.rows() != m_.cols() || m_.rows() % 2 != 0 || m_.rows() == 0)
      throw std::invalid_argument("generator must be square with even dimension");
    n_modes_ = static_cast<int>(m_.rows()) / 2;
    omega_ = symplectic_form(n_modes_, ordering_);
    const Mat a_real = m_ * omega_ * m_.transpose();
    gram_ = Mat(a_real.rows(), a_real.cols());
    for (int i = 0; i < a_real.rows(); ++i)
      for (int j = 0; j < a_real.cols(); ++j) {
        const double r = std::round(a_real(i, j));
        if (std::abs(a_real(i, j) - r) > kTauInt)
          throw std::invalid_argument("not a valid GKP lattice");
        gram_(i, j) = r;
      }
    det_m_ = m_.partialPivLu().determinant();
    if (std::abs(det_m_) < 1.0 - kTauInt)
      throw std::invalid_argument("generator determinant must satisfy |det M| >= 1");
  }

  int n_modes() const { return n_modes_; }
  Ordering ordering() const { return ordering_; }
  const Mat& generator() const { return m_; }
  const Mat& omega() const { return omega_; }
  // Integer-valued symplectic Gram matrix A = M Omega M^T.
  const Mat& gram() const { return gram_; }
  double det_generator() const { return det_m_; }

 private:
  int n_modes_ = 0;
  Ordering ordering_;
  Mat m_;
  Mat omega_;
  Mat gram_;
  double det_m_ = 0.0;
};

struct DualGenerator {
  Mat m_perp;  // rows generate the symplectic dual lattice
};

inline Mat gram_matrix(const GkpCode& code) { return code.gram(); }

// M_perp = Omega (M^T)^{-1} Omega^{-1}; rows generate the dual lattice whose
// symplectic products with the stabilizer lattice are integers.
inline DualGenerator dual_generator(const GkpCode& code) {
  const Mat& m = code.generator();
  const Mat& omega = code.omega();
  Eigen::PartialPivLU<Mat> lu(m.transpose());
  if (std::abs(lu.determinant()) < 1e-300)
    throw std::invalid_argument("generator is singular");
  const Mat m_perp = omega * lu.solve(-omega);  // Omega^{-1} = -Omega
  const Mat check = m_perp * omega * m.transpose();
  for (int i = 0; i < check.rows(); ++i)
    for (int j = 0; j < check.cols(); ++j)
      if (std::abs(check(i, j) - std::round(check(i, j))) > kTauInt)
        throw std::logic_error("dual generator failed integrality check");
  return DualGenerator{m_perp};
}

// Number of distinct logical operators, |det M|^2.
inline long long num_logical_operators(const GkpCode& code) {
  const double d = code.det_generator();
  return static_cast<long long>(std::llround(d * d));
}

// Gaussian (symplectic) transformation: M -> M S^T. The Gram matrix is
// invariant, so the transformed lattice encodes the same code.
inline GkpCode apply_gaussian(const GkpCode& code, const Mat& s) {
  const Mat& omega = code.omega();
  if (s.rows() != omega.rows() || s.cols() != omega.cols())
    throw std::invalid_argument("symplectic matrix has wrong dimension");
  const Mat defect = s * omega * s.transpose() - omega;
  if (defect.cwiseAbs().maxCoeff() > kTauSympl)
    throw std::invalid_argument("matrix is not symplectic");
  return GkpCode(code.generator() * s.transpose(), code.ordering());
}

}  // namespace gkp
