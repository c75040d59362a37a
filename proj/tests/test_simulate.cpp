#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gkp/canonize.hpp"
#include "gkp/codes.hpp"
#include "gkp/simulate.hpp"

using namespace gkp;

namespace {

Vec random_vec(int n, std::mt19937& rng, double scale) {
  std::normal_distribution<double> gauss(0.0, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

LVec random_int_vec(int n, std::mt19937& rng, int bound) {
  std::uniform_int_distribution<int> pick(-bound, bound);
  LVec v(n);
  for (int i = 0; i < n; ++i) v[i] = pick(rng);
  return v;
}

// Distance of each syndrome component from 0 modulo 2*pi.
double syndrome_wrap_error(const Vec& s) {
  double worst = 0.0;
  for (int i = 0; i < s.size(); ++i)
    worst = std::max(worst, std::min(s[i], kTwoPi - s[i]));
  return worst;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// One-mode square code under iid Gaussian shifts: each quadrature decodes
// wrongly when the shift rounds to an odd multiple of sqrt(pi); the encoded
// qubit survives only when both quadratures stay even.
double square_code_fidelity(double sigma) {
  const double a = kSqrtPi / sigma;
  double p = 0.0;
  for (int m : {1, 3, 5})
    p += normal_cdf((m + 0.5) * a) - normal_cdf((m - 0.5) * a);
  p *= 2.0;
  return (1.0 - p) * (1.0 - p);
}

// Logical representatives in the canonical dual basis: row k of
// -Omega (R^T)^{-1} Omega M_perp scaled by sqrt(2*pi).
Mat canonical_dual_rows(const GkpCode& code) {
  const CanonicalForm cf = canonize(code);
  const Mat m_perp = dual_generator(code).m_perp;
  const Mat rt_inv = cf.r_real.transpose().inverse();
  return -code.omega() * rt_inv * code.omega() * m_perp;
}

}  // namespace

TEST_CASE("sample_shift draws iid gaussians with the requested spread") {
  const NoiseModel model{0.7};
  double sum = 0.0;
  double sum_sq = 0.0;
  const long long n_samples = 250'000;
  for (long long i = 0; i < n_samples; ++i) {
    CounterRng rng(11, static_cast<std::uint64_t>(i));
    const Vec xi = sample_shift(model, 2, rng);
    REQUIRE(xi.size() == 4);
    for (int j = 0; j < 4; ++j) {
      sum += xi[j];
      sum_sq += xi[j] * xi[j];
    }
  }
  const double n = 4.0 * static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  REQUIRE(std::abs(mean) < 5.0 * 0.7 / std::sqrt(n));
  REQUIRE(var == Catch::Approx(0.49).epsilon(0.01));

  CounterRng rng(11, 0);
  const Vec tiny = sample_shift(NoiseModel{1e-15}, 3, rng);
  REQUIRE(tiny.cwiseAbs().maxCoeff() < 1e-12);

  CounterRng rng2(11, 0);
  REQUIRE_THROWS_AS(sample_shift(NoiseModel{0.0}, 2, rng2), std::invalid_argument);
  REQUIRE_THROWS_AS(sample_shift(NoiseModel{-0.3}, 2, rng2), std::invalid_argument);
  REQUIRE_THROWS_AS(sample_shift(NoiseModel{0.5}, 0, rng2), std::invalid_argument);
}

TEST_CASE("syndrome vanishes on stabilizer and dual lattice shifts") {
  std::mt19937 rng(314);
  for (const std::string& id : {"square", "hex", "reprec:2", "d2n:2", "surfsq:3"}) {
    const NamedCode named = make_named_code(id);
    const GkpCode& code = named.code;
    const int dim = 2 * code.n_modes();

    const Vec zero_s = syndrome_of(code, Vec::Zero(dim));
    REQUIRE(zero_s.cwiseAbs().maxCoeff() == 0.0);

    const Mat m_perp = dual_generator(code).m_perp;
    for (int trial = 0; trial < 10; ++trial) {
      const LVec b = random_int_vec(dim, rng, 3);
      const Vec dual_shift = kSqrt2Pi * m_perp.transpose() * b.cast<double>();
      REQUIRE(syndrome_wrap_error(syndrome_of(code, dual_shift)) < 1e-9);

      const LVec a = random_int_vec(dim, rng, 3);
      const Vec stab_shift = kSqrt2Pi * code.generator().transpose() * a.cast<double>();
      REQUIRE(syndrome_wrap_error(syndrome_of(code, stab_shift)) < 1e-9);
    }

    for (int trial = 0; trial < 10; ++trial) {
      const Vec s = syndrome_of(code, random_vec(dim, rng, 0.8));
      REQUIRE(s.minCoeff() >= 0.0);
      REQUIRE(s.maxCoeff() < kTwoPi);
    }
  }
}

TEST_CASE("eta reproduces the shift modulo the scaled dual lattice") {
  std::mt19937 rng(271);
  for (const std::string& id : {"square", "hex", "reprec:3", "d2n:2", "surfsq:3"}) {
    const NamedCode named = make_named_code(id);
    const GkpCode& code = named.code;
    const int dim = 2 * code.n_modes();

    const Vec zero_eta = eta_of_syndrome(code, Vec::Zero(dim));
    REQUIRE(zero_eta.cwiseAbs().maxCoeff() == 0.0);

    const Vec s1 = syndrome_of(code, random_vec(dim, rng, 0.6));
    const Vec s2 = syndrome_of(code, random_vec(dim, rng, 0.6));
    const Vec lin_gap =
        eta_of_syndrome(code, s1 + s2) - eta_of_syndrome(code, s1) - eta_of_syndrome(code, s2);
    REQUIRE(lin_gap.cwiseAbs().maxCoeff() < 1e-10);

    const ExactDecoder membership(kSqrt2Pi * dual_generator(code).m_perp, Reduction::KZ);
    for (int trial = 0; trial < 10; ++trial) {
      const Vec xi = random_vec(dim, rng, 0.8);
      const Vec eta = eta_of_syndrome(code, syndrome_of(code, xi));
      REQUIRE(membership.decode(eta - xi).dist < 1e-9);
    }
  }
}

TEST_CASE("classify follows the parity table in the canonical basis") {
  // Square code plus a fill mode. Which nontrivial label the two leading dual
  // generators receive is a basis convention made inside canonize, but the
  // group structure is not: the generators carry distinct nontrivial labels,
  // their sum carries the third, and doubled coefficients or fill-mode
  // components (stabilizers here) never change the label.
  Mat gen = Mat::Zero(4, 4);
  gen(0, 0) = std::sqrt(2.0);
  gen(1, 1) = std::sqrt(2.0);
  gen(2, 2) = 1.0;
  gen(3, 3) = 1.0;
  const GkpCode code(gen, Ordering::qpqp);
  const CanonicalForm cf = canonize(code);

  auto c = [](long long a, long long b, long long t0, long long t1) {
    LVec v(4);
    v << a, b, t0, t1;
    return v;
  };
  const LogicalClass l10 = classify(code, cf, c(1, 0, 0, 0));
  const LogicalClass l01 = classify(code, cf, c(0, 1, 0, 0));
  const LogicalClass l11 = classify(code, cf, c(1, 1, 0, 0));
  REQUIRE(classify(code, cf, c(0, 0, 0, 0)) == LogicalClass::I);
  REQUIRE(l10 != LogicalClass::I);
  REQUIRE(l01 != LogicalClass::I);
  REQUIRE(l11 != LogicalClass::I);
  REQUIRE(l10 != l01);
  REQUIRE(l11 != l10);
  REQUIRE(l11 != l01);

  std::mt19937 rng(99);
  std::uniform_int_distribution<long long> even(-4, 4);
  std::uniform_int_distribution<long long> any(-9, 9);
  for (int trial = 0; trial < 50; ++trial) {
    REQUIRE(classify(code, cf, c(2 * even(rng), 2 * even(rng), any(rng), any(rng))) ==
            LogicalClass::I);
    REQUIRE(classify(code, cf, c(2 * even(rng) + 1, 2 * even(rng), any(rng), any(rng))) ==
            l10);
    REQUIRE(classify(code, cf, c(2 * even(rng), 2 * even(rng) + 1, any(rng), any(rng))) ==
            l01);
    REQUIRE(classify(code, cf, c(2 * even(rng) + 1, 2 * even(rng) + 1, any(rng), any(rng))) ==
            l11);
  }

  REQUIRE_THROWS_AS(classify(code, cf, LVec::Zero(6)), std::invalid_argument);

  // Two encoded qubits cannot be classified.
  Mat two_qubits = std::sqrt(2.0) * Mat::Identity(4, 4);
  const GkpCode multi(two_qubits, Ordering::qpqp);
  REQUIRE_THROWS_WITH(classify(multi, canonize(multi), LVec::Zero(4)),
                      Catch::Matchers::ContainsSubstring("one logical qubit"));
  REQUIRE_THROWS_AS(ShiftClassifier(multi), std::invalid_argument);

  // A canonical form from a different code is rejected.
  const NamedCode square = make_named_code("square");
  REQUIRE_THROWS_AS(classify(square.code, cf, LVec::Zero(2)), std::invalid_argument);
}

TEST_CASE("decode_and_classify labels pure logical shifts for every family") {
  for (const std::string& id : {"square", "hex", "tesseract", "reprec:3", "yyreprec:2",
                                "d2n:3", "513hex", "surfsq:3"}) {
    INFO("code " << id);
    const NamedCode named = make_named_code(id);
    const GkpCode& code = named.code;
    const int dim = 2 * code.n_modes();
    const ShiftClassifier classifier(code);
    const ShiftDecoder exact = make_shift_decoder(named, DecoderKind::exact);

    const DecodeOutcome idle = classifier.run(exact, Vec::Zero(dim));
    REQUIRE(idle.logical == LogicalClass::I);
    REQUIRE(idle.residual_coeffs.cwiseAbs().maxCoeff() == 0);

    const Mat canon_dual = canonical_dual_rows(code);
    const Vec shift_x = kSqrt2Pi * canon_dual.row(0).transpose();
    const Vec shift_z = kSqrt2Pi * canon_dual.row(1).transpose();
    REQUIRE(classifier.run(exact, shift_x).logical == LogicalClass::X);
    REQUIRE(classifier.run(exact, shift_z).logical == LogicalClass::Z);
    REQUIRE(classifier.run(exact, Vec(shift_x + shift_z)).logical == LogicalClass::Y);

    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      const Vec small = random_vec(dim, rng, 0.02);
      REQUIRE(classifier.run(exact, small).logical == LogicalClass::I);
    }
  }
}

TEST_CASE("decode_and_classify free function and misbehaving decoders") {
  const NamedCode named = make_named_code("square");
  const ShiftDecoder exact = make_shift_decoder(named, DecoderKind::exact);
  Vec xi(2);
  xi << 0.3, -0.2;
  const DecodeOutcome a = decode_and_classify(named.code, exact, xi);
  const DecodeOutcome b = ShiftClassifier(named.code).run(exact, xi);
  REQUIRE(a.logical == b.logical);
  const long long coeff_gap = (a.residual_coeffs - b.residual_coeffs).cwiseAbs().maxCoeff();
  REQUIRE(coeff_gap == 0);

  const ShiftDecoder off_lattice{
      "bad", [](const Vec& t) { return Vec(Vec::Constant(t.size(), 0.1234)); }};
  REQUIRE_THROWS_WITH(decode_and_classify(named.code, off_lattice, xi),
                      Catch::Matchers::ContainsSubstring("internal consistency"));

  const ShiftDecoder wrong_dim{"bad-dim", [](const Vec&) { return Vec(Vec::Zero(6)); }};
  REQUIRE_THROWS_AS(decode_and_classify(named.code, wrong_dim, xi), std::invalid_argument);

  REQUIRE_THROWS_AS(decode_and_classify(named.code, exact, Vec::Zero(4)),
                    std::invalid_argument);
}

TEST_CASE("decoder factory enforces family compatibility") {
  const NamedCode square = make_named_code("square");
  const NamedCode reprec = make_named_code("reprec:3");
  const NamedCode yy = make_named_code("yyreprec:2");
  const NamedCode surf = make_named_code("surfsq:3");
  const NamedCode surfhex = make_named_code("surfhex:3");

  REQUIRE(make_shift_decoder(square, DecoderKind::exact).name == "exact");
  REQUIRE(make_shift_decoder(reprec, DecoderKind::structured).name == "structured");
  REQUIRE(make_shift_decoder(yy, DecoderKind::structured).name == "structured");
  REQUIRE(make_shift_decoder(surf, DecoderKind::mwpm).name == "mwpm");
  REQUIRE(make_shift_decoder(surf, DecoderKind::mwpm_loglik, 0.5).name == "mwpm-loglik");

  REQUIRE_THROWS_AS(make_shift_decoder(square, DecoderKind::structured),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(make_shift_decoder(reprec, DecoderKind::mwpm), std::invalid_argument);
  REQUIRE_THROWS_WITH(make_shift_decoder(surfhex, DecoderKind::mwpm),
                      Catch::Matchers::ContainsSubstring("square-based"));
  REQUIRE_THROWS_AS(make_shift_decoder(surf, DecoderKind::mwpm_loglik, 0.0),
                    std::invalid_argument);

  REQUIRE(parse_decoder_kind("exact") == DecoderKind::exact);
  REQUIRE(parse_decoder_kind("structured") == DecoderKind::structured);
  REQUIRE(parse_decoder_kind("mwpm") == DecoderKind::mwpm);
  REQUIRE(parse_decoder_kind("mwpm-loglik") == DecoderKind::mwpm_loglik);
  REQUIRE_THROWS_WITH(parse_decoder_kind("belief"),
                      Catch::Matchers::ContainsSubstring("choices"));
  REQUIRE(std::string(decoder_kind_name(DecoderKind::mwpm_loglik)) == "mwpm-loglik");
}

TEST_CASE("fidelity is one far below the code distance") {
  const NoiseModel gentle{0.05};
  for (const auto& [id, kind] :
       std::vector<std::pair<std::string, DecoderKind>>{{"square", DecoderKind::exact},
                                                        {"hex", DecoderKind::exact},
                                                        {"reprec:3", DecoderKind::structured},
                                                        {"surfsq:3", DecoderKind::mwpm}}) {
    INFO("code " << id);
    const NamedCode named = make_named_code(id);
    const ShiftDecoder decoder = make_shift_decoder(named, kind, gentle.sigma);
    const FidelityEstimate est =
        estimate_fidelity(named.code, decoder, gentle, 10'000, 2025);
    REQUIRE(est.fidelity == 1.0);
    REQUIRE(est.std_error == 0.0);
    REQUIRE(est.n_samples == 10'000);
    REQUIRE(est.seed == 2025);
  }
}

TEST_CASE("square code fidelity matches the wrapped-gaussian value") {
  const NamedCode named = make_named_code("square");
  const ShiftDecoder exact = make_shift_decoder(named, DecoderKind::exact);
  const double sigma = 0.2;
  const double oracle = square_code_fidelity(sigma);
  const FidelityEstimate est =
      estimate_fidelity(named.code, exact, NoiseModel{sigma}, 100'000, 31337);
  const double se_oracle = std::sqrt(oracle * (1.0 - oracle) / 100'000.0);
  const double combined = std::sqrt(se_oracle * se_oracle + est.std_error * est.std_error);
  REQUIRE(std::abs(est.fidelity - oracle) <= 3.0 * combined + 1e-12);

  // A noisier point still tracks the oracle, now with visible error rates.
  const double sigma2 = 0.45;
  const double oracle2 = square_code_fidelity(sigma2);
  const FidelityEstimate est2 =
      estimate_fidelity(named.code, exact, NoiseModel{sigma2}, 100'000, 31337);
  const double se2 = std::sqrt(oracle2 * (1.0 - oracle2) / 100'000.0);
  const double combined2 = std::sqrt(se2 * se2 + est2.std_error * est2.std_error);
  REQUIRE(std::abs(est2.fidelity - oracle2) <= 3.0 * combined2);
  REQUIRE(est2.fidelity < 0.95);
}

TEST_CASE("repetition-rectangular fidelity peaks at seven modes") {
  // Frozen values come from an independent direct-model simulation of this
  // lattice (per-mode rounding parity on the q side, two-coset decision on
  // the p side) at 4e6 samples: 0.8797(2) at sigma 0.5143 and 0.8195(4) at
  // sigma 0.550.
  const NamedCode named = make_named_code("reprec:7");
  const ShiftDecoder dec = make_shift_decoder(named, DecoderKind::structured);
  const FidelityEstimate est =
      estimate_fidelity(named.code, dec, NoiseModel{0.5143}, 100'000, 424242);
  REQUIRE(est.fidelity == Catch::Approx(0.8797).margin(0.004));
  const FidelityEstimate wider =
      estimate_fidelity(named.code, dec, NoiseModel{0.550}, 100'000, 424242);
  REQUIRE(wider.fidelity == Catch::Approx(0.8195).margin(0.005));

  // The fidelity-versus-N curve has an interior maximum at N=7 here.
  auto family_fidelity = [](int n, double sigma) {
    const NamedCode code = make_named_code("reprec:" + std::to_string(n));
    const ShiftDecoder d = make_shift_decoder(code, DecoderKind::structured);
    return estimate_fidelity(code.code, d, NoiseModel{sigma}, 40'000, 424242);
  };
  const FidelityEstimate at3 = family_fidelity(3, 0.5143);
  const FidelityEstimate at7 = family_fidelity(7, 0.5143);
  const FidelityEstimate at20 = family_fidelity(20, 0.5143);
  REQUIRE(at7.fidelity > at3.fidelity);
  REQUIRE(at7.fidelity > at20.fidelity);
}

TEST_CASE("exact and structured decoders classify matched samples identically") {
  for (const std::string& id : {"reprec:1", "reprec:2", "reprec:3", "yyreprec:2"}) {
    INFO("code " << id);
    const NamedCode named = make_named_code(id);
    const ShiftClassifier classifier(named.code);
    const ShiftDecoder exact = make_shift_decoder(named, DecoderKind::exact);
    const ShiftDecoder structured = make_shift_decoder(named, DecoderKind::structured);
    const NoiseModel model{0.5};
    for (long long i = 0; i < 300; ++i) {
      CounterRng rng(777, static_cast<std::uint64_t>(i));
      const Vec xi = sample_shift(model, named.code.n_modes(), rng);
      const DecodeOutcome a = classifier.run(exact, xi);
      const DecodeOutcome b = classifier.run(structured, xi);
      REQUIRE(a.logical == b.logical);
      const long long coeff_gap =
          (a.residual_coeffs - b.residual_coeffs).cwiseAbs().maxCoeff();
      REQUIRE(coeff_gap == 0);
    }
  }
}

TEST_CASE("fidelity decreases with noise within statistical error") {
  const NamedCode named = make_named_code("square");
  const ShiftDecoder exact = make_shift_decoder(named, DecoderKind::exact);
  double prev_f = 2.0;
  double prev_se = 0.0;
  for (double sigma : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}) {
    const FidelityEstimate est =
        estimate_fidelity(named.code, exact, NoiseModel{sigma}, 10'000, 5150);
    const double combined =
        std::sqrt(prev_se * prev_se + est.std_error * est.std_error);
    REQUIRE(est.fidelity <= prev_f + 3.0 * combined);
    prev_f = est.fidelity;
    prev_se = est.std_error;
  }
}

TEST_CASE("fidelity estimates are bit-identical across runs and worker counts") {
  const NamedCode named = make_named_code("reprec:2");
  const ShiftDecoder dec = make_shift_decoder(named, DecoderKind::structured);
  const NoiseModel model{0.45};
  const FidelityEstimate base =
      estimate_fidelity(named.code, dec, model, 4'000, 909, 1);
  for (int workers : {1, 2, 3, 8}) {
    const FidelityEstimate again =
        estimate_fidelity(named.code, dec, model, 4'000, 909, workers);
    REQUIRE(again.fidelity == base.fidelity);
    REQUIRE(again.std_error == base.std_error);
  }
  const FidelityEstimate other_seed =
      estimate_fidelity(named.code, dec, model, 4'000, 910, 2);
  REQUIRE(other_seed.fidelity != base.fidelity);

  REQUIRE_THROWS_AS(estimate_fidelity(named.code, dec, NoiseModel{0.0}, 100, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(estimate_fidelity(named.code, dec, model, 0, 1),
                    std::invalid_argument);
}

TEST_CASE("surface code closest-point matching beats reweighted matching here") {
  const NamedCode named = make_named_code("surfsq:3");
  const double sigma = 0.6;
  const ShiftDecoder cp = make_shift_decoder(named, DecoderKind::mwpm);
  const ShiftDecoder ll = make_shift_decoder(named, DecoderKind::mwpm_loglik, sigma);
  const FidelityEstimate f_cp =
      estimate_fidelity(named.code, cp, NoiseModel{sigma}, 10'000, 60601);
  const FidelityEstimate f_ll =
      estimate_fidelity(named.code, ll, NoiseModel{sigma}, 10'000, 60601);
  REQUIRE(f_cp.fidelity >= f_ll.fidelity);
}

TEST_CASE("surface code family crosses between 0.55 and 0.65") {
  auto family = [](int d0) { return make_named_code("surfsq:" + std::to_string(d0)); };
  const ThresholdReport report = threshold_scan(family, DecoderKind::mwpm,
                                                {0.55, 0.60, 0.65}, {3, 5}, 10'000, 8080);
  REQUIRE(report.points.size() == 6);
  auto fid = [&](int size, double sigma) {
    for (const ThresholdPoint& p : report.points)
      if (p.size == size && p.sigma == sigma) return p.estimate.fidelity;
    FAIL("missing scan point");
    return 0.0;
  };
  REQUIRE(fid(5, 0.55) > fid(3, 0.55));
  REQUIRE(fid(5, 0.65) < fid(3, 0.65));
  REQUIRE(report.crossings.size() == 1);
  REQUIRE(report.crossings[0].found);
  REQUIRE(report.threshold_found);
  REQUIRE(report.sigma_mean > 0.55);
  REQUIRE(report.sigma_mean < 0.65);
  REQUIRE(report.sigma_std == 0.0);

  const ThresholdReport again = threshold_scan(family, DecoderKind::mwpm,
                                               {0.55, 0.60, 0.65}, {3, 5}, 10'000, 8080);
  REQUIRE(again.sigma_mean == report.sigma_mean);
  for (std::size_t i = 0; i < report.points.size(); ++i)
    REQUIRE(again.points[i].estimate.fidelity == report.points[i].estimate.fidelity);
}

TEST_CASE("repetition families report no crossing") {
  auto reprec = [](int n) { return make_named_code("reprec:" + std::to_string(n)); };
  const ThresholdReport rep = threshold_scan(reprec, DecoderKind::structured,
                                             {0.45, 0.50, 0.55}, {1, 7}, 5'000, 1234);
  REQUIRE_FALSE(rep.threshold_found);
  REQUIRE(rep.crossings.size() == 1);
  REQUIRE_FALSE(rep.crossings[0].found);

  auto yy = [](int n) { return make_named_code("yyreprec:" + std::to_string(n)); };
  const ThresholdReport rep_yy = threshold_scan(yy, DecoderKind::structured,
                                                {0.40, 0.50}, {2, 4}, 5'000, 1234);
  REQUIRE_FALSE(rep_yy.threshold_found);

  REQUIRE_THROWS_AS(threshold_scan(reprec, DecoderKind::structured, {0.4, 0.5}, {3},
                                   100, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(threshold_scan(reprec, DecoderKind::structured, {0.4}, {1, 3}, 100, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(threshold_scan(reprec, DecoderKind::structured, {0.4, 0.4}, {1, 3},
                                   100, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(threshold_scan(reprec, DecoderKind::structured, {-0.1, 0.4}, {1, 3},
                                   100, 1),
                    std::invalid_argument);
}

TEST_CASE("repetition-rectangular fidelity peaks at an interior block count") {
  const double sigma = 0.4;
  auto fidelity_at = [&](int n) {
    const NamedCode named = make_named_code("reprec:" + std::to_string(n));
    const ShiftDecoder dec = make_shift_decoder(named, DecoderKind::structured);
    return estimate_fidelity(named.code, dec, NoiseModel{sigma}, 20'000, 777).fidelity;
  };
  const double f6 = fidelity_at(6);
  const double f11 = fidelity_at(11);
  const double f30 = fidelity_at(30);
  REQUIRE(f11 > f30);
  REQUIRE(f11 >= f6);
}
