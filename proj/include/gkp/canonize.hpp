#pragma once

// Canonization of GKP Gram matrices: unimodular congruence R A R^T taking an
// antisymmetric integer A to diag(d) (x) omega. All arithmetic is exact
// (arbitrary-width integers); floating point never touches the Gram pipeline.

#include "gkp/code.hpp"
#include "gkp/core.hpp"
#include "gkp/exact.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace gkp {

struct BezoutTriple {
  BigInt g;  // gcd(|a|,|b|), nonnegative unless a = b = 0
  BigInt x;
  BigInt y;  // a*x + b*y = g
};

inline BezoutTriple extended_gcd(const BigInt& a, const BigInt& b) {
  // Euclid on absolute values; signs folded back into the coefficients.
  BigInt old_r = abs(a), r = abs(b);
  BigInt old_x(1), x(0);
  BigInt old_y(0), y(1);
  while (r != 0) {
    const BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_x - q * x;
    old_x = x;
    x = tmp;
    tmp = old_y - q * y;
    old_y = y;
    y = tmp;
  }
  if (a < 0) old_x = -old_x;
  if (b < 0) old_y = -old_y;
  return BezoutTriple{old_r, old_x, old_y};
}

namespace detail {

// W <- E W E^T and R <- E R for an elementary row operation E acting on rows
// r1, r2 with 2x2 block [[e11,e12],[e21,e22]] (E is identity elsewhere).
inline void apply_pair_op(BigMat& w, BigMat& r, int r1, int r2, const BigInt& e11,
                          const BigInt& e12, const BigInt& e21, const BigInt& e22) {
  const int n = static_cast<int>(w.rows());
  for (int j = 0; j < n; ++j) {
    const BigInt a = w(r1, j), b = w(r2, j);
    w(r1, j) = e11 * a + e12 * b;
    w(r2, j) = e21 * a + e22 * b;
  }
  for (int i = 0; i < n; ++i) {
    const BigInt a = w(i, r1), b = w(i, r2);
    w(i, r1) = e11 * a + e12 * b;
    w(i, r2) = e21 * a + e22 * b;
  }
  for (int j = 0; j < static_cast<int>(r.cols()); ++j) {
    const BigInt a = r(r1, j), b = r(r2, j);
    r(r1, j) = e11 * a + e12 * b;
    r(r2, j) = e21 * a + e22 * b;
  }
}

// row r1 <- row r1 + c * row r2 (congruence on W, row op on R).
inline void apply_row_add(BigMat& w, BigMat& r, int r1, int r2, const BigInt& c) {
  const int n = static_cast<int>(w.rows());
  for (int j = 0; j < n; ++j) w(r1, j) += c * w(r2, j);
  for (int i = 0; i < n; ++i) w(i, r1) += c * w(i, r2);
  for (int j = 0; j < static_cast<int>(r.cols()); ++j) r(r1, j) += c * r(r2, j);
}

inline void apply_row_negate(BigMat& w, BigMat& r, int row) {
  const int n = static_cast<int>(w.rows());
  for (int j = 0; j < n; ++j) w(row, j) = -w(row, j);
  for (int i = 0; i < n; ++i) w(i, row) = -w(i, row);
  for (int j = 0; j < static_cast<int>(r.cols()); ++j) r(row, j) = -r(row, j);
}

// GCD-chain elimination of the first row of the trailing block starting at
// `off`: afterwards row `off` is (0, g, 0, ..., 0) with g >= 0 the gcd of its
// original entries. Zero entries are skipped (identity steps).
inline void put_first_row_to_zero_inplace(BigMat& w, BigMat& r, int off) {
  const int n = static_cast<int>(w.rows());
  const int lead = off + 1;
  for (int j = off + 2; j < n; ++j) {
    if (w(off, j) == 0) continue;
    const BigInt g = w(off, lead);
    const BigInt a = w(off, j);
    const BezoutTriple bz = extended_gcd(g, a);
    // Rows (lead, j): [[x, y], [-a/g', g/g']] has determinant
    // (x g + y a)/g' = 1, hence unimodular.
    apply_pair_op(w, r, lead, j, bz.x, bz.y, -a / bz.g, g / bz.g);
  }
  if (w(off, lead) < 0) apply_row_negate(w, r, lead);
}

inline void tridiagonalize_inplace(BigMat& w, BigMat& r, int off) {
  const int n = static_cast<int>(w.rows());
  for (int i = off; i < n - 2; ++i) put_first_row_to_zero_inplace(w, r, i);
}

inline bool superdiagonal_divisible(const BigMat& w, int off) {
  const BigInt& a12 = w(off, off + 1);
  const int n = static_cast<int>(w.rows());
  for (int i = off + 1; i < n - 1; ++i) {
    if (w(i, i + 1) == 0) continue;
    if (a12 == 0 || w(i, i + 1) % a12 != 0) return false;
  }
  return true;
}

// Mix rows so the (1,2) entry of the trailing block becomes the gcd of all
// superdiagonal entries, then restore tridiagonal form. The first pass uses
// the all-ones-first-row unimodular; if divisibility has not converged,
// subsequent passes add the row carrying the first offending entry into the
// first row, which pulls that entry into the gcd chain and strictly shrinks
// |A_12|, so the loop terminates.
inline void canonize_tridiagonal_inplace(BigMat& w, BigMat& r, int off) {
  const int n = static_cast<int>(w.rows());
  if (n - off <= 2) return;
  int pass = 0;
  while (!superdiagonal_divisible(w, off)) {
    if (pass == 0) {
      for (int j = off + 1; j < n; ++j) apply_row_add(w, r, off, j, BigInt(1));
    } else {
      int bad = -1;
      const BigInt a12 = w(off, off + 1);
      for (int i = off + 1; i < n - 1; ++i) {
        if (w(i, i + 1) == 0) continue;
        if (a12 == 0 || w(i, i + 1) % a12 != 0) {
          bad = i;
          break;
        }
      }
      apply_row_add(w, r, off, bad, BigInt(1));
    }
    tridiagonalize_inplace(w, r, off);
    if (++pass > 1024) throw std::logic_error("canonize_tridiagonal did not converge");
  }
}

// Splits off the leading 2x2 block: requires the (1,2) entry of the trailing
// block to divide everything (canonize_tridiagonal's contract).
inline void block_tridiagonalize_inplace(BigMat& w, BigMat& r, int off) {
  const int n = static_cast<int>(w.rows());
  if (n - off <= 2) return;
  const BigInt& a12 = w(off, off + 1);
  const BigInt& a23 = w(off + 1, off + 2);
  if (a23 == 0) return;
  if (a12 == 0 || a23 % a12 != 0)
    throw std::invalid_argument("block_tridiagonalize requires divisibility; canonize first");
  apply_row_add(w, r, off + 2, off, a23 / a12);
}

}  // namespace detail

// --- Public single-step operations (spec interfaces) -----------------------

inline BigMat put_first_row_to_zero(const BigMat& a) {
  BigMat w = a;
  BigMat r = big_identity(static_cast<int>(a.rows()));
  detail::put_first_row_to_zero_inplace(w, r, 0);
  return r;
}

inline BigMat tridiagonalize(const BigMat& a) {
  BigMat w = a;
  BigMat r = big_identity(static_cast<int>(a.rows()));
  detail::tridiagonalize_inplace(w, r, 0);
  return r;
}

inline BigMat canonize_tridiagonal(const BigMat& a_tri, int off = 0) {
  BigMat w = a_tri;
  BigMat r = big_identity(static_cast<int>(a_tri.rows()));
  detail::canonize_tridiagonal_inplace(w, r, off);
  return r;
}

inline BigMat block_tridiagonalize(const BigMat& a_tri, int off = 0) {
  BigMat w = a_tri;
  BigMat r = big_identity(static_cast<int>(a_tri.rows()));
  detail::block_tridiagonalize_inplace(w, r, off);
  return r;
}

inline BigMat congruence(const BigMat& r, const BigMat& a) {
  const BigMat ra = big_mul(r, a);
  const BigMat rt = r.transpose();
  return big_mul(ra, rt);
}

// --- Full canonization ------------------------------------------------------

struct CanonicalForm {
  BigMat R;                     // unimodular, R A R^T = diag(d) (x) omega
  Mat r_real;                   // R as doubles, for composing with generators
  Mat m_canon;                  // R * M
  std::vector<long long> d;     // positive per-mode invariants
};

inline CanonicalForm canonize(const GkpCode& code, bool sort_d = true) {
  const int n = 2 * code.n_modes();
  BigMat w = to_big(code.gram());
  BigMat r = big_identity(n);

  detail::tridiagonalize_inplace(w, r, 0);
  for (int b = 0; b + 2 < n; b += 2) {
    detail::canonize_tridiagonal_inplace(w, r, b);
    detail::block_tridiagonalize_inplace(w, r, b);
  }
  for (int k = 0; k < n / 2; ++k)
    if (w(2 * k, 2 * k + 1) < 0) detail::apply_row_negate(w, r, 2 * k + 1);

  std::vector<long long> d(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    d[k] = to_int64_checked(w(2 * k, 2 * k + 1));
    if (d[k] < 1) throw std::invalid_argument("Gram matrix is singular");
  }

  if (sort_d) {
    std::vector<int> order(n / 2);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return d[a] > d[b]; });
    BigMat perm(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) perm(i, j) = BigInt(0);
    for (int k = 0; k < n / 2; ++k) {
      perm(2 * k, 2 * order[k]) = BigInt(1);
      perm(2 * k + 1, 2 * order[k] + 1) = BigInt(1);
    }
    w = congruence(perm, w);
    r = big_mul(perm, r);
    std::vector<long long> ds(n / 2);
    for (int k = 0; k < n / 2; ++k) ds[k] = d[order[k]];
    d = std::move(ds);
  }

  // Exact verification: R A R^T must equal diag(d) (x) omega entrywise.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      BigInt expect(0);
      if (i / 2 == j / 2) {
        if (j == i + 1) expect = BigInt(d[i / 2]);
        if (j == i - 1) expect = BigInt(-d[i / 2]);
      }
      if (w(i, j) != expect) throw std::logic_error("canonization verification failed");
    }
  if (!is_unimodular(r)) throw std::logic_error("canonization produced non-unimodular R");

  CanonicalForm out;
  out.R = std::move(r);
  out.r_real = to_double(out.R);
  out.m_canon = out.r_real * code.generator();
  out.d = std::move(d);
  return out;
}

}  // namespace gkp
