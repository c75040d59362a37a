#pragma once

// Shared random-instance generators for the test suite. All draws come from
// explicitly seeded engines so every run sees identical instances.

#include <random>

#include "gkp/core.hpp"
#include "gkp/exact.hpp"

namespace gkp::testutil {

inline Mat random_orthogonal(int n, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

// Well-conditioned random basis: rotation * diag(spread) * rotation, then a
// few small integer row operations so the basis is not close to orthogonal.
inline Mat random_basis(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> spread(0.5, 2.0);
  Mat d = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = spread(rng);
  Mat m = random_orthogonal(n, rng) * d * random_orthogonal(n, rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int k = 0; k < 2 * n; ++k) {
    const int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    m.row(i) += static_cast<double>(coef(rng)) * m.row(j);
  }
  return m;
}

inline BigMat random_unimodular(int n, std::mt19937& rng, int ops = 0) {
  if (ops == 0) ops = 3 * n;
  BigMat u = big_identity(n);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  std::uniform_int_distribution<int> kind(0, 5);
  for (int k = 0; k < ops; ++k) {
    const int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    switch (kind(rng)) {
      case 0:
        for (int c = 0; c < n; ++c) std::swap(u(i, c), u(j, c));
        break;
      case 1:
        for (int c = 0; c < n; ++c) u(i, c) = -u(i, c);
        break;
      default: {
        const BigInt f(coef(rng));
        for (int c = 0; c < n; ++c) u(i, c) += f * u(j, c);
        break;
      }
    }
  }
  return u;
}

// Random nondegenerate antisymmetric integer Gram: congruent by a random
// unimodular matrix to diag(d) (x) omega with positive entries d.
inline BigMat random_symplectic_gram(int n_modes, std::mt19937& rng,
                                     std::vector<long long>* d_out = nullptr) {
  const int n = 2 * n_modes;
  std::uniform_int_distribution<int> dv(1, 5);
  BigMat a(n, n);
  a.setConstant(BigInt(0));
  std::vector<long long> d(n_modes);
  for (int k = 0; k < n_modes; ++k) {
    d[k] = dv(rng);
    a(2 * k, 2 * k + 1) = d[k];
    a(2 * k + 1, 2 * k) = -d[k];
  }
  const BigMat u = random_unimodular(n, rng);
  const BigMat ut = u.transpose();
  BigMat g = big_mul(big_mul(u, a), ut);
  if (d_out) *d_out = d;
  return g;
}

}  // namespace gkp::testutil
