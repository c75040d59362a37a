#include <catch2/catch_amalgamated.hpp>

#include "gkp/cvp.hpp"
#include "helpers.hpp"

using namespace gkp;

namespace {

bool lll_conditions_hold(const Mat& lo) {
  const int n = static_cast<int>(lo.rows());
  for (int j = 0; j + 1 < n; ++j) {
    const double lhs = lo(j, j) * lo(j, j);
    const double rhs = lo(j + 1, j) * lo(j + 1, j) + lo(j + 1, j + 1) * lo(j + 1, j + 1);
    if (lhs > (4.0 / 3.0) * rhs * (1.0 + 1e-12)) return false;
  }
  for (int k = 1; k < n; ++k)
    for (int j = 0; j < k; ++j)
      if (std::abs(lo(k, j)) > 0.5 * std::abs(lo(j, j)) + 1e-9) return false;
  return true;
}

Vec random_target(int n, double scale, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, scale);
  Vec t(n);
  for (int i = 0; i < n; ++i) t[i] = gauss(rng);
  return t;
}

}  // namespace

TEST_CASE("rlq decomposition") {
  std::mt19937 rng(21);
  for (int n = 1; n <= 6; ++n) {
    for (int it = 0; it < 10; ++it) {
      const Mat m = testutil::random_basis(n, rng);
      const ReducedBasis rb = rlq_decompose(m);
      REQUIRE((to_double(rb.R) - Mat::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0);
      REQUIRE((to_double(rb.R) * rb.L * rb.Q - m).cwiseAbs().maxCoeff() < 1e-9);
      REQUIRE((rb.Q * rb.Q.transpose() - Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
      for (int i = 0; i < n; ++i) {
        REQUIRE(rb.L(i, i) > 0);
        for (int j = i + 1; j < n; ++j) REQUIRE(rb.L(i, j) == 0.0);
      }
    }
  }
  REQUIRE_THROWS(rlq_decompose(Mat::Zero(2, 2)));
}

TEST_CASE("lll reduction") {
  std::mt19937 rng(22);
  for (int n = 1; n <= 8; ++n) {
    for (int it = 0; it < 10; ++it) {
      const Mat m = testutil::random_basis(n, rng);
      const ReducedBasis rb = lll_reduce(m);
      REQUIRE(is_unimodular(rb.R));
      REQUIRE((to_double(rb.R) * rb.L * rb.Q - m).cwiseAbs().maxCoeff() < 1e-8);
      REQUIRE(lll_conditions_hold(rb.L));
      // book U maps original rows to reduced rows
      REQUIRE((to_double(rb.U) * m - rb.L * rb.Q).cwiseAbs().maxCoeff() < 1e-8);
    }
  }

  // A classic badly conditioned basis.
  Mat bad(2, 2);
  bad << 1, 0, 0.999, 0.001;
  const ReducedBasis rb = lll_reduce(bad);
  REQUIRE(lll_conditions_hold(rb.L));
  REQUIRE(is_unimodular(rb.R));
}

TEST_CASE("kz reduction") {
  std::mt19937 rng(23);
  for (int n = 2; n <= 5; ++n) {
    for (int it = 0; it < 8; ++it) {
      const Mat m = testutil::random_basis(n, rng);
      const ReducedBasis rb = kz_reduce(m);
      REQUIRE(is_unimodular(rb.R));
      REQUIRE((to_double(rb.R) * rb.L * rb.Q - m).cwiseAbs().maxCoeff() < 1e-8);
      // first reduced row is a shortest nonzero lattice vector
      const ClosestPointResult sv = shortest_vector(m);
      REQUIRE(rb.L.row(0).norm() == Catch::Approx(sv.dist).epsilon(1e-10));
    }
  }
  REQUIRE_THROWS_WITH(kz_reduce(Mat::Identity(40, 40)),
                      Catch::Matchers::ContainsSubstring("LLL"));
}

TEST_CASE("closest point matches brute force") {
  std::mt19937 rng(24);
  int checked = 0;
  for (int n = 1; n <= 6; ++n) {
    for (int it = 0; it < 25; ++it) {
      const Mat m = testutil::random_basis(n, rng);
      const Vec t = random_target(n, 2.0, rng);
      ClosestPointResult ex;
      ClosestPointResult bf;
      try {
        bf = brute_force_closest(m, t, 6);
      } catch (const std::invalid_argument&) {
        continue;  // box too large for this draw
      }
      ex = closest_point(m, t, Reduction::LLL);
      REQUIRE(std::abs(ex.dist - bf.dist) < 1e-12 * std::max(1.0, bf.dist));
      // coefficient invariant
      REQUIRE((m.transpose() * ex.coeffs.cast<double>() - ex.point).cwiseAbs().maxCoeff() < 1e-9);
      ++checked;
    }
  }
  REQUIRE(checked > 60);
}

TEST_CASE("reduction choice does not change the answer") {
  std::mt19937 rng(25);
  for (int n = 2; n <= 6; ++n) {
    for (int it = 0; it < 10; ++it) {
      const Mat m = testutil::random_basis(n, rng);
      const Vec t = random_target(n, 3.0, rng);
      const ClosestPointResult a = closest_point(m, t, Reduction::none);
      const ClosestPointResult b = closest_point(m, t, Reduction::LLL);
      const ClosestPointResult c = closest_point(m, t, Reduction::KZ);
      REQUIRE(std::abs(a.dist - b.dist) < 1e-12 * std::max(1.0, a.dist));
      REQUIRE(std::abs(a.dist - c.dist) < 1e-12 * std::max(1.0, a.dist));
    }
  }
}

TEST_CASE("shortest vector") {
  REQUIRE(shortest_vector(Mat::Identity(3, 3)).dist == Catch::Approx(1.0));

  Mat m(2, 2);
  m << 2, 0, 0, 3;
  REQUIRE(shortest_vector(m).dist == Catch::Approx(2.0));

  // hexagonal lattice: minimum distance is 2 * 3^{-1/4} for this scaling
  const double s = std::pow(3.0, -0.25);
  Mat hex(2, 2);
  hex << 2 * s, 0, s, std::sqrt(3.0) * s;
  REQUIRE(shortest_vector(hex).dist == Catch::Approx(2.0 * s).epsilon(1e-12));

  // shortest vector never returns the origin even for skewed bases;
  // here the minimum is (row2 - row1) = (-0.001, 0.001)
  Mat skew(2, 2);
  skew << 1, 0, 0.999, 0.001;
  const ClosestPointResult sv = shortest_vector(skew);
  REQUIRE(sv.dist > 0);
  REQUIRE(sv.dist == Catch::Approx(0.001 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("search bound shrinks monotonically") {
  std::mt19937 rng(26);
  for (int it = 0; it < 20; ++it) {
    const Mat m = testutil::random_basis(5, rng);
    const Vec t = random_target(5, 3.0, rng);
    std::vector<double> trace;
    closest_point(m, t, Reduction::none, &trace);
    REQUIRE_FALSE(trace.empty());
    for (size_t i = 1; i < trace.size(); ++i) REQUIRE(trace[i] < trace[i - 1]);
  }
}

TEST_CASE("brute force oracle details") {
  // 1-d integer lattice, halfway target: tie resolves toward the smaller
  // coefficient magnitude.
  Mat z1(1, 1);
  z1 << 1;
  Vec t(1);
  t << 0.5;
  const ClosestPointResult r = brute_force_closest(z1, t);
  REQUIRE(r.coeffs[0] == 0);
  REQUIRE(r.dist == Catch::Approx(0.5));

  t << -0.5;
  REQUIRE(brute_force_closest(z1, t).coeffs[0] == 0);

  t << 1.75;
  REQUIRE(brute_force_closest(z1, t).coeffs[0] == 2);

  // refuses boxes that would have to be clipped
  Mat narrow(2, 2);
  narrow << 1, 0, 0, 1e-3;
  Vec far(2);
  far << 0.5, 0.5;  // 500 cells away in the second axis
  REQUIRE_THROWS_WITH(brute_force_closest(narrow, far, 4),
                      Catch::Matchers::ContainsSubstring("box too large"));
}

TEST_CASE("deterministic repeat decoding") {
  std::mt19937 rng(27);
  const Mat m = testutil::random_basis(4, rng);
  const Vec t = random_target(4, 2.0, rng);
  const ClosestPointResult a = closest_point(m, t, Reduction::KZ);
  const ClosestPointResult b = closest_point(m, t, Reduction::KZ);
  REQUIRE(a.dist == b.dist);
  REQUIRE((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() == 0);
}
