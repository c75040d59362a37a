#pragma once

// Linear-time closest-point kernels for the integer, checkerboard, and dual
// checkerboard lattices, their per-axis scaled variants, and the combinators
// (direct sums, coset unions) built from them. Also the O(N) decoders for
// the repetition-rectangular family and its YY-stabilized variant, which
// operate on the sqrt(2*pi)-scaled dual lattices of those codes.

#include "gkp/core.hpp"
#include "gkp/cvp.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

namespace gkp {

namespace detail {

// Nearest integer; exact .5 ties resolve toward the smaller absolute value.
inline double round_tie_small(double x) {
  const double f = std::floor(x);
  const double frac = x - f;
  if (frac > 0.5) return f + 1.0;
  if (frac < 0.5) return f;
  return std::abs(f) <= std::abs(f + 1.0) ? f : f + 1.0;
}

// Round the wrong way: the second-nearest integer, always 1 away from the
// nearest one.
inline double round_wrong_way(double x) {
  const double r = round_tie_small(x);
  return x >= r ? r + 1.0 : r - 1.0;
}

inline void check_finite(const Vec& t) {
  if (!t.allFinite()) throw std::invalid_argument("target must be finite");
}

}  // namespace detail

inline LVec closest_point_zn(const Vec& t) {
  detail::check_finite(t);
  LVec out(t.size());
  for (int i = 0; i < t.size(); ++i)
    out[i] = static_cast<long long>(detail::round_tie_small(t[i]));
  return out;
}

// Nearest integer vector with exactly one coordinate rounded the wrong way:
// the one whose fractional part is largest, so the distance increase is
// minimal.
inline LVec second_closest_zn(const Vec& t) {
  detail::check_finite(t);
  if (t.size() < 1) throw std::invalid_argument("second_closest_zn needs n >= 1");
  LVec out(t.size());
  int k = 0;
  double worst = -1.0;
  for (int i = 0; i < t.size(); ++i) {
    const double r = detail::round_tie_small(t[i]);
    out[i] = static_cast<long long>(r);
    const double frac = std::abs(t[i] - r);
    if (frac > worst) {
      worst = frac;
      k = i;
    }
  }
  out[k] = static_cast<long long>(detail::round_wrong_way(t[k]));
  return out;
}

// Checkerboard lattice: integer vectors with even coordinate sum. Exactly
// one of {nearest, second-nearest} integer vector has even sum.
inline LVec closest_point_dn(const Vec& t) {
  if (t.size() < 2) throw std::invalid_argument("closest_point_dn needs n >= 2");
  LVec r = closest_point_zn(t);
  long long sum = 0;
  for (int i = 0; i < r.size(); ++i) sum += r[i];
  if (sum % 2 == 0) return r;
  return second_closest_zn(t);
}

// Dual of the checkerboard: Z^n together with its half-integer coset. Equal
// distances keep the integer coset.
inline Vec closest_point_dn_dual(const Vec& t) {
  if (t.size() < 2) throw std::invalid_argument("closest_point_dn_dual needs n >= 2");
  const int n = static_cast<int>(t.size());
  Vec a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = detail::round_tie_small(t[i]);
    b[i] = 0.5 + detail::round_tie_small(t[i] - 0.5);
  }
  return (t - a).squaredNorm() <= (t - b).squaredNorm() ? a : b;
}

struct ScaledLatticeSpec {
  enum class Kind { Zn, Dn, DnDual };
  Kind kind = Kind::Zn;
  Vec lambda;  // per-axis lattice constants, all positive
};

inline Vec closest_point_scaled(const ScaledLatticeSpec& spec, const Vec& t) {
  const int n = static_cast<int>(t.size());
  if (spec.lambda.size() != n)
    throw std::invalid_argument("lambda dimension mismatch");
  for (int i = 0; i < n; ++i)
    if (!(spec.lambda[i] > 0))
      throw std::invalid_argument("lattice constants must be positive");
  detail::check_finite(t);
  const Vec& lam = spec.lambda;

  switch (spec.kind) {
    case ScaledLatticeSpec::Kind::Zn: {
      Vec out(n);
      for (int i = 0; i < n; ++i)
        out[i] = lam[i] * detail::round_tie_small(t[i] / lam[i]);
      return out;
    }
    case ScaledLatticeSpec::Kind::Dn: {
      if (n < 2) throw std::invalid_argument("scaled Dn needs n >= 2");
      Vec out(n);
      long long sum = 0;
      for (int i = 0; i < n; ++i) {
        const double r = detail::round_tie_small(t[i] / lam[i]);
        out[i] = lam[i] * r;
        sum += static_cast<long long>(r);
      }
      if (sum % 2 == 0) return out;
      // flip the coordinate whose wrong-way rounding costs least in the
      // scaled metric, not the one with the largest fractional part
      int k = 0;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        const double y = t[i] / lam[i];
        const double good = t[i] - detail::round_tie_small(y) * lam[i];
        const double bad = t[i] - detail::round_wrong_way(y) * lam[i];
        const double cost = bad * bad - good * good;
        if (cost < best) {
          best = cost;
          k = i;
        }
      }
      out[k] = lam[k] * detail::round_wrong_way(t[k] / lam[k]);
      return out;
    }
    case ScaledLatticeSpec::Kind::DnDual: {
      if (n < 2) throw std::invalid_argument("scaled DnDual needs n >= 2");
      ScaledLatticeSpec zn{ScaledLatticeSpec::Kind::Zn, lam};
      const Vec a = closest_point_scaled(zn, t);
      const Vec shift = 0.5 * lam;
      const Vec b = shift + closest_point_scaled(zn, t - shift);
      return (t - a).squaredNorm() <= (t - b).squaredNorm() ? a : b;
    }
  }
  throw std::logic_error("unknown scaled lattice kind");
}

// --- Combinators -------------------------------------------------------------

struct DecoderPart {
  int dim = 0;
  std::function<Vec(const Vec&)> decode;
};

inline Vec decode_direct_sum(const std::vector<DecoderPart>& parts, const Vec& t) {
  int total = 0;
  for (const auto& p : parts) total += p.dim;
  if (total != t.size())
    throw std::invalid_argument("direct sum dimensions do not match the target");
  Vec out(t.size());
  int off = 0;
  for (const auto& p : parts) {
    out.segment(off, p.dim) = p.decode(t.segment(off, p.dim));
    off += p.dim;
  }
  return out;
}

struct CosetUnionSpec {
  std::variant<Mat, ScaledLatticeSpec> base;
  std::vector<Vec> coset_vectors;  // zero vector first
};

// Decode the union of lattice cosets: best of r_i + base(t - r_i). Ties keep
// the earliest coset in the list, so the zero coset wins over its shifts.
inline Vec decode_coset_union(const CosetUnionSpec& spec,
                              const std::function<Vec(const Vec&)>& base_decoder,
                              const Vec& t) {
  if (spec.coset_vectors.empty())
    throw std::invalid_argument("coset union needs at least one coset");
  if (!spec.coset_vectors.front().isZero(0.0))
    throw std::invalid_argument("first coset vector must be zero");
  Vec best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const Vec& r : spec.coset_vectors) {
    if (r.size() != t.size())
      throw std::invalid_argument("coset vector dimension mismatch");
    const Vec cand = r + base_decoder(t - r);
    const double d2 = (t - cand).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = cand;
    }
  }
  return best;
}

// --- Structured lattice generators (rows are basis vectors) -----------------

// Checkerboard: bidiagonal rows plus a doubled last axis.
inline Mat dn_generator(int n) {
  if (n < 1) throw std::invalid_argument("dn_generator needs n >= 1");
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i) = 1;
    m(i, i + 1) = 1;
  }
  m(n - 1, n - 1) = 2;
  return m;
}

// Dual checkerboard: unit rows plus the all-halves glue row.
inline Mat dn_dual_generator(int n) {
  if (n < 1) throw std::invalid_argument("dn_dual_generator needs n >= 1");
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) m(i, i) = 1;
  for (int j = 0; j < n; ++j) m(n - 1, j) = 0.5;
  return m;
}

namespace detail {

// Integer coefficients of a checkerboard point in the dn_generator basis;
// forward substitution against the bidiagonal transpose.
inline void dn_coeffs(const Vec& v, long long* out) {
  const int n = static_cast<int>(v.size());
  long long prev = 0;
  for (int j = 0; j < n - 1; ++j) {
    const long long vj = std::llround(v[j]);
    out[j] = vj - prev;
    prev = out[j];
  }
  const long long last = std::llround(v[n - 1]) - prev;
  out[n - 1] = last / 2;
}

// Integer coefficients of a dual-checkerboard point in the dn_dual_generator
// basis.
inline void dn_dual_coeffs(const Vec& v, long long* out) {
  const int n = static_cast<int>(v.size());
  const double vn = v[n - 1];
  out[n - 1] = std::llround(2.0 * vn);
  for (int j = 0; j < n - 1; ++j) out[j] = std::llround(v[j] - vn);
}

}  // namespace detail

// --- Repetition-rectangular decoder ------------------------------------------

// The sqrt(2*pi)-scaled dual lattice splits into a scaled integer lattice on
// the position half and a scaled dual checkerboard on the momentum half.
class RepRecDecoder {
 public:
  explicit RepRecDecoder(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("rep-rec needs N >= 1");
    const double root = std::pow(static_cast<double>(n), 0.25);
    lambda_q_ = kSqrt2Pi * root / std::sqrt(2.0);
    lambda_p_ = kSqrt2Pi * std::sqrt(2.0) / root;
  }

  int n_modes() const { return n_; }
  double lambda_q() const { return lambda_q_; }
  double lambda_p() const { return lambda_p_; }

  ClosestPointResult decode(const Vec& t) const {
    if (t.size() != 2 * n_)
      throw std::invalid_argument("rep-rec decoder expects 2N components");
    detail::check_finite(t);
    const int n = n_;
    Vec tp(n);
    ClosestPointResult out;
    out.point.resize(2 * n);
    out.coeffs.resize(2 * n);
    // position half: scaled integer lattice, one rounding per mode
    for (int i = 0; i < n; ++i) {
      const double r = detail::round_tie_small(t[2 * i] / lambda_q_);
      out.coeffs[i] = static_cast<long long>(r);
      out.point[2 * i] = lambda_q_ * r;
      tp[i] = t[2 * i + 1];
    }
    // momentum half: scaled dual checkerboard via its two integer cosets
    Vec a(n), b(n);
    for (int i = 0; i < n; ++i) {
      const double y = tp[i] / lambda_p_;
      a[i] = detail::round_tie_small(y);
      b[i] = 0.5 + detail::round_tie_small(y - 0.5);
    }
    const Vec ap = lambda_p_ * a;
    const Vec bp = lambda_p_ * b;
    const Vec& vp = (tp - ap).squaredNorm() <= (tp - bp).squaredNorm() ? a : b;
    detail::dn_dual_coeffs(vp, out.coeffs.data() + n);
    for (int i = 0; i < n; ++i) out.point[2 * i + 1] = lambda_p_ * vp[i];
    out.dist = (t - out.point).norm();
    return out;
  }

 private:
  int n_;
  double lambda_q_ = 0;
  double lambda_p_ = 0;
};

// Basis matching RepRecDecoder coefficients: N scaled position rows, then
// the N scaled dual-checkerboard momentum rows (columns interleaved qpqp).
inline Mat rep_rec_dual_basis(int n) {
  RepRecDecoder dec(n);
  Mat b = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) b(i, 2 * i) = dec.lambda_q();
  const Mat dd = dn_dual_generator(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(n + i, 2 * j + 1) = dec.lambda_p() * dd(i, j);
  return b;
}

inline ClosestPointResult decode_rep_rec(int n, const Vec& t) {
  return RepRecDecoder(n).decode(t);
}

// --- YY repetition-rectangular decoder ---------------------------------------

// 2N-mode code; the scaled dual lattice is a two-coset glue of a scaled
// checkerboard (positions) with a scaled dual checkerboard (momenta). The
// glue vector carries the logical-X translation squeezed into the same frame.
class YyRepRecDecoder {
 public:
  explicit YyRepRecDecoder(int n) : n_(n) {
    if (n < 2 || n % 2 != 0)
      throw std::invalid_argument("YY rep-rec needs even N >= 2");
    const double root = std::pow(static_cast<double>(n), 0.25);
    lambda_q_ = kSqrt2Pi * root / std::sqrt(2.0);
    lambda_p_ = kSqrt2Pi * std::sqrt(2.0) / root;
    const int m = 2 * n;  // modes
    glue_ = Vec::Zero(2 * m);
    glue_[2 * (n - 1)] = kSqrt2Pi * root / std::sqrt(2.0);  // q_N component
    for (int i = n; i < m; ++i)
      glue_[2 * i + 1] = kSqrt2Pi / (root * std::sqrt(2.0));  // p of block 2

    // Coefficients (doubled, hence integral) of the glue vector in the
    // unglued block basis: q half in the checkerboard basis, p half in the
    // dual checkerboard basis. The last position row has the lone
    // half-integer coefficient and is the row the glue vector replaces.
    two_h_.assign(2 * m, 0);
    long long sign = 2;
    for (int j = n - 1; j < m - 1; ++j) {
      two_h_[j] = sign;  // alternating +-1 doubled
      sign = -sign;
    }
    two_h_[m - 1] = sign / 2;  // +-1: the half coefficient, doubled
    for (int j = 0; j < n; ++j) two_h_[m + j] = -1;
    two_h_[2 * m - 1] = 2;
    replaced_row_ = m - 1;
    replaced_sign_ = two_h_[replaced_row_];  // +-1
  }

  int n_per_block() const { return n_; }
  int n_modes() const { return 2 * n_; }
  const Vec& glue_vector() const { return glue_; }
  int replaced_row() const { return replaced_row_; }

  ClosestPointResult decode(const Vec& t) const {
    const int m = 2 * n_;
    if (t.size() != 2 * m)
      throw std::invalid_argument("YY rep-rec decoder expects 4N components");
    detail::check_finite(t);

    Vec pt0(2 * m), pt1(2 * m);
    std::vector<long long> c0(2 * m), c1(2 * m);
    const double d0 = decode_blocks(t, pt0, c0.data());
    const Vec shifted = t - glue_;
    double d1 = decode_blocks(shifted, pt1, c1.data());
    ClosestPointResult out;
    const bool take_glue = d1 < d0;  // tie keeps the unshifted coset
    const std::vector<long long>& cb = take_glue ? c1 : c0;
    const long long coset = take_glue ? 1 : 0;
    if (take_glue) {
      out.point = glue_ + pt1;
      out.dist = std::sqrt(d1);
    } else {
      out.point = pt0;
      out.dist = std::sqrt(d0);
    }
    // Change of basis: the replaced row b_r satisfies
    // b_r = s*(2 glue - sum_{j != r} two_h_j b_j), s = replaced_sign_.
    out.coeffs.resize(2 * m);
    const long long cr = cb[replaced_row_];
    for (int j = 0; j < 2 * m; ++j) {
      if (j == replaced_row_) continue;
      out.coeffs[j] = cb[j] - replaced_sign_ * two_h_[j] * cr;
    }
    out.coeffs[replaced_row_] = coset + 2 * replaced_sign_ * cr;
    return out;
  }

 private:
  // Decode both halves against the unglued block lattice; returns squared
  // distance, fills the lattice point and the per-block integer coefficients.
  double decode_blocks(const Vec& t, Vec& point, long long* coeffs) const {
    const int m = 2 * n_;
    Vec yq(m), tq(m), tp(m);
    for (int i = 0; i < m; ++i) {
      tq[i] = t[2 * i];
      tp[i] = t[2 * i + 1];
      yq[i] = tq[i] / lambda_q_;
    }
    // positions: scaled checkerboard
    Vec vq(m);
    long long sum = 0;
    for (int i = 0; i < m; ++i) {
      vq[i] = detail::round_tie_small(yq[i]);
      sum += static_cast<long long>(vq[i]);
    }
    if (sum % 2 != 0) {
      int k = 0;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double good = tq[i] - vq[i] * lambda_q_;
        const double bad = tq[i] - detail::round_wrong_way(yq[i]) * lambda_q_;
        const double cost = bad * bad - good * good;
        if (cost < best) {
          best = cost;
          k = i;
        }
      }
      vq[k] = detail::round_wrong_way(yq[k]);
    }
    // momenta: scaled dual checkerboard
    Vec a(m), b(m);
    for (int i = 0; i < m; ++i) {
      const double y = tp[i] / lambda_p_;
      a[i] = detail::round_tie_small(y);
      b[i] = 0.5 + detail::round_tie_small(y - 0.5);
    }
    const Vec ap = lambda_p_ * a;
    const Vec bp = lambda_p_ * b;
    const Vec& vp = (tp - ap).squaredNorm() <= (tp - bp).squaredNorm() ? a : b;

    double d2 = 0;
    for (int i = 0; i < m; ++i) {
      point[2 * i] = lambda_q_ * vq[i];
      point[2 * i + 1] = lambda_p_ * vp[i];
      const double eq = tq[i] - point[2 * i];
      const double ep = tp[i] - point[2 * i + 1];
      d2 += eq * eq + ep * ep;
    }
    detail::dn_coeffs(vq, coeffs);
    detail::dn_dual_coeffs(vp, coeffs + m);
    return d2;
  }

  int n_;
  double lambda_q_ = 0;
  double lambda_p_ = 0;
  Vec glue_;
  std::vector<long long> two_h_;
  int replaced_row_ = 0;
  long long replaced_sign_ = 1;
};

// Basis matching YyRepRecDecoder coefficients: 2N scaled checkerboard
// position rows with the last replaced by the glue vector, then 2N scaled
// dual-checkerboard momentum rows (columns interleaved qpqp).
inline Mat yy_rep_rec_dual_basis(int n) {
  YyRepRecDecoder dec(n);
  const int m = 2 * n;
  const double root = std::pow(static_cast<double>(n), 0.25);
  const double lq = kSqrt2Pi * root / std::sqrt(2.0);
  const double lp = kSqrt2Pi * std::sqrt(2.0) / root;
  Mat b = Mat::Zero(2 * m, 2 * m);
  const Mat dg = dn_generator(m);
  const Mat dd = dn_dual_generator(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      b(i, 2 * j) = lq * dg(i, j);
      b(m + i, 2 * j + 1) = lp * dd(i, j);
    }
  b.row(dec.replaced_row()) = dec.glue_vector().transpose();
  return b;
}

inline ClosestPointResult decode_yy_rep_rec(int n, const Vec& t) {
  return YyRepRecDecoder(n).decode(t);
}

}  // namespace gkp
