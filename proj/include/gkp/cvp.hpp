#pragma once

// Exact closest-point machinery: RLQ decomposition, LLL and KZ reduction of
// lattice bases, Schnorr-Euchner sphere decoding, shortest-vector search, and
// an exhaustive brute-force oracle used by the test suite.
//
// Conventions: basis rows are lattice vectors; a lattice point is M^T c for
// an integer coefficient column c. Reduction keeps the book U with
// rows(L*Q) = U * rows(M), so coefficients transport exactly as c = U^T u.

#include "gkp/core.hpp"
#include "gkp/exact.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gkp {

using LVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

struct ClosestPointResult {
  Vec point;    // lattice point in the original coordinates
  LVec coeffs;  // integer coordinates in the given basis: point = M^T coeffs
  double dist = 0.0;
};

enum class Reduction { none, LLL, KZ };

// KZ recursion enumerates shortest vectors in every trailing block; above
// this dimension the cost is prohibitive and LLL should be used instead.
inline constexpr int kKzDimensionCap = 36;

struct ReducedBasis {
  Mat L;       // lower-triangular, positive diagonal
  Mat Q;       // orthogonal
  BigMat R;    // unimodular, M = R * L * Q
  BigMat U;    // R^{-1}: rows of L*Q = U * rows of M
  Mat u_real;  // U as doubles
};

namespace detail {

// LQ factorization of basis rows: B = L * Q with positive diagonal.
inline void lq_factor(const Mat& b, Mat& lo, Mat& q) {
  const int n = static_cast<int>(b.rows());
  Eigen::HouseholderQR<Mat> qr(b.transpose());
  Mat r0 = qr.matrixQR().triangularView<Eigen::Upper>();
  Mat q0 = qr.householderQ();
  lo = r0.transpose();
  q = q0.transpose();
  for (int i = 0; i < n; ++i) {
    if (lo(i, i) < 0) {
      lo.col(i) = -lo.col(i);
      q.row(i) = -q.row(i);
    }
    if (lo(i, i) <= 0) throw std::invalid_argument("basis matrix is singular");
  }
  // Scrub the numerically-zero upper triangle.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) lo(i, j) = 0.0;
}

// Right-multiplied Givens rotation mixing columns (c1, c2) of L so that
// L(r, c2) becomes zero; Q absorbs the transpose so L*Q is invariant.
inline void givens_cols(Mat& lo, Mat& q, int r, int c1, int c2) {
  const double a = lo(r, c1), b = lo(r, c2);
  if (b == 0.0) return;
  const double h = std::hypot(a, b);
  const double c = a / h, s = b / h;
  const int n = static_cast<int>(lo.rows());
  for (int i = r; i < n; ++i) {
    const double x = lo(i, c1), y = lo(i, c2);
    lo(i, c1) = c * x + s * y;
    lo(i, c2) = -s * x + c * y;
  }
  lo(r, c2) = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = q(c1, j), y = q(c2, j);
    q(c1, j) = c * x + s * y;
    q(c2, j) = -s * x + c * y;
  }
}

// Restore lower-triangular positive-diagonal form for rows >= start after
// integer row operations destroyed it.
inline void retriangularize(Mat& lo, Mat& q, int start) {
  const int n = static_cast<int>(lo.rows());
  for (int r = start; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) givens_cols(lo, q, r, r, c);
    if (lo(r, r) < 0) {
      lo.col(r) = -lo.col(r);
      q.row(r) = -q.row(r);
    }
    if (lo(r, r) == 0.0) throw std::invalid_argument("basis matrix is singular");
  }
}

// row r1 <- row r1 - m * row r2 on L and the bookkeeping U.
inline void row_reduce(Mat& lo, BigMat& u, int r1, int r2, long long m) {
  if (m == 0) return;
  lo.row(r1) -= static_cast<double>(m) * lo.row(r2);
  const int n = static_cast<int>(u.cols());
  for (int j = 0; j < n; ++j) u(r1, j) -= BigInt(m) * u(r2, j);
}

inline void row_swap(Mat& lo, BigMat& u, int r1, int r2) {
  lo.row(r1).swap(lo.row(r2));
  const int n = static_cast<int>(u.cols());
  for (int j = 0; j < n; ++j) std::swap(u(r1, j), u(r2, j));
}

// LLL on the triangular form, acting on the trailing block starting at
// `start`. Swap rule enforces ||v_1|| <= (2/sqrt(3)) ||v_2|| at every
// recursion level, i.e. L(j,j)^2 <= (4/3)(L(j+1,j)^2 + L(j+1,j+1)^2), plus
// full size reduction of the first column of each level.
inline void lll_inplace(Mat& lo, Mat& q, BigMat& u, int start) {
  const int n = static_cast<int>(lo.rows());
  int k = start + 1;
  while (k < n) {
    long long m = std::llround(lo(k, k - 1) / lo(k - 1, k - 1));
    row_reduce(lo, u, k, k - 1, m);
    const double lhs = lo(k - 1, k - 1) * lo(k - 1, k - 1);
    const double rhs = lo(k, k - 1) * lo(k, k - 1) + lo(k, k) * lo(k, k);
    if (lhs > (4.0 / 3.0) * rhs) {
      row_swap(lo, u, k - 1, k);
      retriangularize(lo, q, k - 1);
      k = std::max(k - 1, start + 1);
    } else {
      for (int j = k - 2; j >= start; --j) {
        m = std::llround(lo(k, j) / lo(j, j));
        row_reduce(lo, u, k, j, m);
      }
      ++k;
    }
  }
}

// Near-tie slack for enumeration pruning. The search frame carries QR
// rounding error, so candidates within this relative margin of the running
// best are kept and re-scored by the caller in the original coordinates.
inline constexpr double kEnumSlack = 1e-9;

struct EnumCandidate {
  std::vector<long long> u;
  double d2;
};

// Schnorr-Euchner enumeration over the lower-triangular basis `lo`: finds
// integer u minimizing ||y - lo^T u||^2, optionally excluding u = 0. Layers
// at each level are visited in ascending vertical distance, so the first
// bound violation prunes the whole remaining subtree. Appends the shrinking
// bound sequence to rho_trace when given; when `near_ties` is given, every
// candidate within the slack margin of the running best is recorded.
inline bool sphere_decode(const Mat& lo, const Vec& y, LVec& best_u, double& best_d2,
                          bool exclude_zero = false,
                          std::vector<double>* rho_trace = nullptr,
                          std::vector<EnumCandidate>* near_ties = nullptr) {
  const int n = static_cast<int>(lo.rows());
  std::vector<double> resid(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> dacc(n, 0.0);
  std::vector<long long> uu(n, 0);
  std::vector<long long> step(n, 1);
  bool found = false;

  auto enter = [&](int k) {
    const double c = resid[static_cast<size_t>(k) * n + k] / lo(k, k);
    uu[k] = std::llround(c);
    step[k] = (c >= static_cast<double>(uu[k])) ? 1 : -1;
  };
  auto advance = [&](int k) {
    uu[k] += step[k];
    step[k] = -step[k] - (step[k] > 0 ? 1 : -1);
  };
  auto bound = [&]() {
    return near_ties ? best_d2 * (1.0 + kEnumSlack) + 1e-300 : best_d2;
  };

  int k = n - 1;
  for (int i = 0; i < n; ++i) resid[static_cast<size_t>(k) * n + i] = y[i];
  dacc[k] = 0.0;
  enter(k);

  while (true) {
    const double off = resid[static_cast<size_t>(k) * n + k] - lo(k, k) * uu[k];
    const double nd = dacc[k] + off * off;
    if (nd < bound()) {
      if (k == 0) {
        bool zero = exclude_zero;
        if (exclude_zero)
          for (int i = 0; i < n && zero; ++i) zero = (uu[i] == 0);
        if (!zero) {
          if (nd < best_d2) {
            for (int i = 0; i < n; ++i) best_u[i] = uu[i];
            best_d2 = nd;
            found = true;
            if (rho_trace) rho_trace->push_back(nd);
          }
          if (near_ties && near_ties->size() < 256)
            near_ties->push_back({uu, nd});
        }
        advance(k);
      } else {
        dacc[k - 1] = nd;
        const size_t rk = static_cast<size_t>(k) * n;
        const size_t rk1 = static_cast<size_t>(k - 1) * n;
        for (int i = 0; i < k; ++i)
          resid[rk1 + i] = resid[rk + i] - lo(k, i) * static_cast<double>(uu[k]);
        --k;
        enter(k);
      }
    } else {
      ++k;
      if (k == n) break;
      advance(k);
    }
  }
  return found;
}

// Shortest nonzero coefficient vector of the trailing block lo[j.., j..].
inline std::vector<long long> shortest_coeffs_of_block(const Mat& lo, int j) {
  const int n = static_cast<int>(lo.rows());
  const int m = n - j;
  Mat block = lo.block(j, j, m, m);
  Vec zero = Vec::Zero(m);
  LVec u(m);
  double d2 = std::numeric_limits<double>::infinity();
  if (!sphere_decode(block, zero, u, d2, /*exclude_zero=*/true))
    throw std::logic_error("shortest-vector search found no candidate");
  std::vector<long long> z(m);
  for (int i = 0; i < m; ++i) z[i] = u[i];
  return z;
}

// Unimodular completion: W with first row equal to the primitive vector z.
// Built by accumulating the inverses of the gcd-chain column operations that
// reduce z to e_1.
inline BigMat unimodular_completion(const std::vector<long long>& z) {
  const int m = static_cast<int>(z.size());
  BigMat w = big_identity(m);
  BigInt g(z[0]);
  for (int i = 1; i < m; ++i) {
    const BigInt a(z[i]);
    if (a == 0 && g != 0) continue;
    // ext-gcd block on coordinates (0, i); accumulate the inverse as row ops.
    BigInt old_g = g;
    if (old_g == 0 && a == 0) continue;
    // column op E: col0' = x col0 + y coli ; coli' = (-a/g') col0 + (g/g') coli
    // inverse block rows: row0' = (g/g') row0 + (a/g') rowi ; rowi' = -y row0 + x rowi
    const auto bz = [&] {
      // local extended gcd on BigInt
      BigInt r0 = abs(old_g), r1 = abs(a), x0(1), x1(0), y0(0), y1(1);
      while (r1 != 0) {
        BigInt qq = r0 / r1;
        BigInt t = r0 - qq * r1; r0 = r1; r1 = t;
        t = x0 - qq * x1; x0 = x1; x1 = t;
        t = y0 - qq * y1; y0 = y1; y1 = t;
      }
      if (old_g < 0) x0 = -x0;
      if (a < 0) y0 = -y0;
      struct { BigInt g, x, y; } out{r0, x0, y0};
      return out;
    }();
    const BigInt gp = bz.g;
    for (int col = 0; col < m; ++col) {
      const BigInt r0 = w(0, col), ri = w(i, col);
      w(0, col) = (old_g / gp) * r0 + (a / gp) * ri;
      w(i, col) = -bz.y * r0 + bz.x * ri;
    }
    g = gp;
  }
  if (!(g == 1 || g == -1))
    throw std::logic_error("shortest vector coefficients are not primitive");
  if (g == -1)
    for (int col = 0; col < m; ++col) w(0, col) = -w(0, col);
  for (int col = 0; col < m; ++col)
    if (w(0, col) != BigInt(z[col]))
      throw std::logic_error("unimodular completion failed");
  return w;
}

// KZ reduction: for every trailing block, rotate a shortest lattice vector of
// the block into the leading row, then size-reduce the first column.
inline void kz_inplace(Mat& lo, Mat& q, BigMat& u) {
  const int n = static_cast<int>(lo.rows());
  lll_inplace(lo, q, u, 0);
  for (int j = 0; j < n - 1; ++j) {
    const int m = n - j;
    const std::vector<long long> z = shortest_coeffs_of_block(lo, j);
    bool is_e1 = (z[0] == 1 || z[0] == -1);
    for (int i = 1; i < m && is_e1; ++i) is_e1 = (z[i] == 0);
    if (!is_e1) {
      const BigMat w = unimodular_completion(z);
      // rows j.. <- W * rows j.. on both L and U.
      Mat lo_block = lo.bottomRows(m);
      Mat w_real(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) w_real(a, b) = w(a, b).convert_to<double>();
      lo.bottomRows(m) = w_real * lo_block;
      BigMat u_block(m, static_cast<int>(u.cols()));
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < u.cols(); ++b) u_block(a, b) = u(j + a, b);
      BigMat u_new = big_mul(w, u_block);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < u.cols(); ++b) u(j + a, b) = u_new(a, b);
      retriangularize(lo, q, j);
    } else if (z[0] == -1) {
      // negate the leading row so the recorded vector is the +representative
      lo.row(j) = -lo.row(j);
      for (int b = 0; b < u.cols(); ++b) u(j, b) = -u(j, b);
      retriangularize(lo, q, j);
    }
    for (int i = j + 1; i < n; ++i) {
      const long long mm = std::llround(lo(i, j) / lo(j, j));
      row_reduce(lo, u, i, j, mm);
    }
  }
  // Final sweep: later passes may have disturbed earlier size reductions.
  for (int i = 1; i < n; ++i)
    for (int j = i - 1; j >= 0; --j) {
      const long long mm = std::llround(lo(i, j) / lo(j, j));
      row_reduce(lo, u, i, j, mm);
    }
}

inline ReducedBasis finish_basis(const Mat& m, Mat lo, Mat q, BigMat u) {
  ReducedBasis rb;
  rb.L = std::move(lo);
  rb.Q = std::move(q);
  rb.U = std::move(u);
  rb.R = unimodular_inverse(rb.U);
  rb.u_real = to_double(rb.U);
  const Mat recon = to_double(rb.R) * rb.L * rb.Q;
  if ((recon - m).cwiseAbs().maxCoeff() > 1e-6)
    throw std::logic_error("RLQ reconstruction failed");
  return rb;
}

}  // namespace detail

// M = R L Q with R = I (no reduction requested here).
inline ReducedBasis rlq_decompose(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("basis matrix must be square");
  Mat lo, q;
  detail::lq_factor(m, lo, q);
  return detail::finish_basis(m, std::move(lo), std::move(q),
                              big_identity(static_cast<int>(m.rows())));
}

inline ReducedBasis lll_reduce(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("basis matrix must be square");
  Mat lo, q;
  detail::lq_factor(m, lo, q);
  BigMat u = big_identity(static_cast<int>(m.rows()));
  detail::lll_inplace(lo, q, u, 0);
  return detail::finish_basis(m, std::move(lo), std::move(q), std::move(u));
}

inline ReducedBasis kz_reduce(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("basis matrix must be square");
  if (m.rows() > kKzDimensionCap)
    throw std::invalid_argument(
        "dimension exceeds the KZ cap; use LLL reduction instead");
  Mat lo, q;
  detail::lq_factor(m, lo, q);
  BigMat u = big_identity(static_cast<int>(m.rows()));
  detail::kz_inplace(lo, q, u);
  return detail::finish_basis(m, std::move(lo), std::move(q), std::move(u));
}

// Decoder with a cached reduced basis; one reduction, many queries. Queries
// allocate their own scratch, so a shared instance is safe across threads.
class ExactDecoder {
 public:
  explicit ExactDecoder(const Mat& m, Reduction reduction = Reduction::KZ) {
    switch (reduction) {
      case Reduction::none: rb_ = rlq_decompose(m); break;
      case Reduction::LLL: rb_ = lll_reduce(m); break;
      case Reduction::KZ: rb_ = kz_reduce(m); break;
    }
    b_red_t_ = (rb_.L * rb_.Q).transpose();
    const int n = static_cast<int>(rb_.U.rows());
    ut_int_.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ut_int_(i, j) = to_int64_checked(rb_.U(j, i));
  }

  const ReducedBasis& basis() const { return rb_; }

  ClosestPointResult decode(const Vec& t, std::vector<double>* rho_trace = nullptr) const {
    const int n = static_cast<int>(rb_.L.rows());
    const Vec y = rb_.Q * t;
    LVec u(n);
    double d2 = std::numeric_limits<double>::infinity();
    std::vector<detail::EnumCandidate> ties;
    detail::sphere_decode(rb_.L, y, u, d2, false, rho_trace, &ties);
    pick_best(ties, &t, u);
    ClosestPointResult out;
    out.point = b_red_t_ * u.cast<double>();
    out.coeffs = ut_int_ * u;
    out.dist = (t - out.point).norm();
    return out;
  }

  ClosestPointResult shortest() const {
    const int n = static_cast<int>(rb_.L.rows());
    LVec u(n);
    double d2 = std::numeric_limits<double>::infinity();
    std::vector<detail::EnumCandidate> ties;
    detail::sphere_decode(rb_.L, Vec::Zero(n), u, d2, /*exclude_zero=*/true, nullptr,
                          &ties);
    pick_best(ties, nullptr, u);
    ClosestPointResult out;
    out.point = b_red_t_ * u.cast<double>();
    out.coeffs = ut_int_ * u;
    out.dist = out.point.norm();
    return out;
  }

  // Exact decode restricted to the open ball of the given radius around t:
  // a tight warm-start radius (for example from a matching decoder) turns
  // the enumeration into a cheap verification pass. Returns nothing when no
  // lattice point lies strictly inside the ball.
  std::optional<ClosestPointResult> decode_within(const Vec& t, double radius) const {
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw std::invalid_argument("search radius must be positive");
    const int n = static_cast<int>(rb_.L.rows());
    const Vec y = rb_.Q * t;
    LVec u(n);
    double d2 = radius * radius;
    std::vector<detail::EnumCandidate> ties;
    if (!detail::sphere_decode(rb_.L, y, u, d2, false, nullptr, &ties))
      return std::nullopt;
    pick_best(ties, &t, u);
    ClosestPointResult out;
    out.point = b_red_t_ * u.cast<double>();
    out.coeffs = ut_int_ * u;
    out.dist = (t - out.point).norm();
    return out;
  }

 private:
  // Re-score near-tie candidates in the original coordinates; the search
  // frame only carries them to within QR rounding error. Seeded with the
  // incoming winner so a crowded-out tie list can never displace it.
  void pick_best(const std::vector<detail::EnumCandidate>& ties, const Vec* t,
                 LVec& u) const {
    if (ties.size() <= 1) return;
    const int n = static_cast<int>(rb_.L.rows());
    double best;
    {
      const Vec p = b_red_t_ * u.cast<double>();
      best = t ? (*t - p).squaredNorm() : p.squaredNorm();
    }
    for (const auto& cand : ties) {
      LVec cu(n);
      for (int i = 0; i < n; ++i) cu[i] = cand.u[i];
      const Vec p = b_red_t_ * cu.cast<double>();
      const double d2 = t ? (*t - p).squaredNorm() : p.squaredNorm();
      if (d2 < best) {
        best = d2;
        u = cu;
      }
    }
  }

  ReducedBasis rb_;
  Mat b_red_t_;
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> ut_int_;
};

// One-shot exact closest point. LLL is the default preprocessing for single
// queries; pass Reduction::KZ when the caller will keep the basis anyway.
inline ClosestPointResult closest_point(const Mat& m, const Vec& t,
                                        Reduction reduction = Reduction::LLL,
                                        std::vector<double>* rho_trace = nullptr) {
  if (!t.allFinite()) throw std::invalid_argument("target must be finite");
  ExactDecoder dec(m, reduction);
  return dec.decode(t, rho_trace);
}

inline ClosestPointResult shortest_vector(const Mat& m,
                                          Reduction reduction = Reduction::LLL) {
  ExactDecoder dec(m, reduction);
  return dec.shortest();
}

// Exhaustive oracle: enumerates all integer coefficient vectors in a box
// centered on round((M^T)^{-1} t). The per-axis half-width is the rigorous
// triangle-inequality bound |c_i - c0_i| <= ||row_i((M^T)^{-1})|| * 2 d0
// (d0 = distance of the rounded center), so the optimum is always inside;
// if that bound exceeds coeff_radius the box is refused rather than clipped.
inline ClosestPointResult brute_force_closest(const Mat& m, const Vec& t,
                                              int coeff_radius = 4) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw std::invalid_argument("basis matrix must be square");
  const Mat mt_inv = m.transpose().inverse();
  const Vec c_real = mt_inv * t;
  LVec c0(n);
  for (int i = 0; i < n; ++i) c0[i] = std::llround(c_real[i]);
  const Vec p0 = m.transpose() * c0.cast<double>();
  const double d0 = (t - p0).norm();

  std::vector<long long> radius(n);
  double total = 1.0;
  for (int i = 0; i < n; ++i) {
    const double bound = mt_inv.row(i).norm() * 2.0 * d0;
    radius[i] = static_cast<long long>(std::ceil(bound + 1e-12));
    if (radius[i] > coeff_radius)
      throw std::invalid_argument("brute force box too large; increase coeff_radius");
    total *= static_cast<double>(2 * radius[i] + 1);
    if (total > 3e8) throw std::invalid_argument("brute force box too large");
  }

  LVec c = c0;
  for (int i = 0; i < n; ++i) c[i] -= radius[i];
  Vec p = m.transpose() * c.cast<double>();

  LVec best_c = c0;
  Vec best_p = p0;
  double best_d2 = (t - p0).squaredNorm();
  double best_csq = static_cast<double>(c0.squaredNorm());

  // Odometer enumeration with incremental point updates. The incremental
  // point drifts by rounding, so any candidate within the margin of the
  // running best is re-scored from scratch before it is compared.
  const double margin = 1e-9 * std::max(1.0, best_d2);
  std::vector<long long> digit(n, 0);
  while (true) {
    const double d2_fast = (t - p).squaredNorm();
    if (d2_fast < best_d2 + margin) {
      const Vec pe = m.transpose() * c.cast<double>();
      const double d2 = (t - pe).squaredNorm();
      const double csq = static_cast<double>(c.squaredNorm());
      if (d2 < best_d2 - 1e-15 ||
          (std::abs(d2 - best_d2) <= 1e-15 && csq < best_csq)) {
        best_d2 = d2;
        best_c = c;
        best_p = pe;
        best_csq = csq;
      }
    }
    int i = 0;
    while (i < n && digit[i] == 2 * radius[i]) {
      // reset axis i and carry
      digit[i] = 0;
      c[i] -= 2 * radius[i];
      ++i;
    }
    if (i == n) break;
    ++digit[i];
    ++c[i];
    if (i == 0) {
      p += m.row(0).transpose();
    } else {
      p = m.transpose() * c.cast<double>();  // refresh on carry, bounds drift
    }
  }

  ClosestPointResult out;
  out.point = best_p;
  out.coeffs = best_c;
  out.dist = std::sqrt(std::max(0.0, best_d2));
  return out;
}

}  // namespace gkp
