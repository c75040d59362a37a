#pragma once

// Gaussian shift channel simulation: syndrome extraction, decode-and-classify,
// seeded Monte-Carlo fidelity estimation, and threshold crossing analysis.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gkp/canonize.hpp"
#include "gkp/code.hpp"
#include "gkp/codes.hpp"
#include "gkp/core.hpp"
#include "gkp/cvp.hpp"
#include "gkp/mwpm.hpp"
#include "gkp/rng.hpp"
#include "gkp/structured.hpp"

namespace gkp {

struct NoiseModel {
  double sigma = 0.0;  // standard deviation per quadrature
};

enum class LogicalClass { I, X, Z, Y };

inline char logical_label(LogicalClass c) {
  switch (c) {
    case LogicalClass::I: return 'I';
    case LogicalClass::X: return 'X';
    case LogicalClass::Z: return 'Z';
    case LogicalClass::Y: return 'Y';
  }
  throw std::logic_error("unknown logical class");
}

struct DecodeOutcome {
  LogicalClass logical = LogicalClass::I;
  LVec residual_coeffs;  // net displacement in the scaled dual basis
};

struct FidelityEstimate {
  double fidelity = 0.0;
  long long n_samples = 0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_noise(const NoiseModel& model) {
  if (!(model.sigma > 0.0) || !std::isfinite(model.sigma))
    throw std::invalid_argument("noise strength must be positive");
}

inline double fold_to_two_pi(double x) {
  double m = std::fmod(x, kTwoPi);
  if (m < 0.0) m += kTwoPi;
  if (m >= kTwoPi) m -= kTwoPi;  // the add above can land exactly on 2*pi
  return m;
}

}  // namespace detail

inline Vec sample_shift(const NoiseModel& model, int n_modes, CounterRng& rng) {
  detail::check_noise(model);
  if (n_modes < 1) throw std::invalid_argument("n_modes must be >= 1");
  Vec xi(2 * n_modes);
  for (int i = 0; i < xi.size(); ++i) xi[i] = model.sigma * rng.normal();
  return xi;
}

// Homodyne stabilizer phases: s = sqrt(2*pi) M Omega^{-1} xi, folded into
// [0, 2*pi) per component.
inline Vec syndrome_of(const GkpCode& code, const Vec& xi) {
  if (xi.size() != 2 * code.n_modes())
    throw std::invalid_argument("shift dimension does not match the code");
  if (!xi.allFinite()) throw std::invalid_argument("shift must be finite");
  Vec s = kSqrt2Pi * (code.generator() * (-(code.omega() * xi)));
  for (int i = 0; i < s.size(); ++i) s[i] = detail::fold_to_two_pi(s[i]);
  return s;
}

// Candidate shift consistent with the syndrome: eta(s) = -(Omega M_perp)^T s
// / sqrt(2*pi). It reproduces the true shift modulo the scaled dual lattice.
inline Vec eta_of_syndrome(const GkpCode& code, const Vec& s) {
  if (s.size() != 2 * code.n_modes())
    throw std::invalid_argument("syndrome dimension does not match the code");
  if (!s.allFinite()) throw std::invalid_argument("syndrome must be finite");
  const Mat m_perp = dual_generator(code).m_perp;
  return -(code.omega() * m_perp).transpose() * s / kSqrt2Pi;
}

namespace detail {

inline bool is_odd(const BigInt& v) { return v % 2 != 0; }

// Parity masks of the first two components of c' = -Omega R Omega c, the
// coefficients rewritten in the canonical dual basis. Only rows 0 and 1 of R
// matter, and signs drop out mod 2.
struct LogicalParityRows {
  std::vector<unsigned char> x;  // parity row deciding the X component
  std::vector<unsigned char> z;  // parity row deciding the Z component
};

inline LogicalParityRows logical_parity_rows(const CanonicalForm& canonical) {
  const int n = static_cast<int>(canonical.R.rows());
  long long logicals = 1;
  for (long long dk : canonical.d) {
    logicals *= dk;
    if (logicals > 2) break;
  }
  if (logicals != 2)
    throw std::invalid_argument("classification requires a code with exactly one logical qubit");
  LogicalParityRows rows;
  rows.x.assign(n, 0);
  rows.z.assign(n, 0);
  for (int k = 0; k < n / 2; ++k) {
    rows.x[2 * k + 1] = is_odd(canonical.R(1, 2 * k));
    rows.x[2 * k] = is_odd(canonical.R(1, 2 * k + 1));
    rows.z[2 * k + 1] = is_odd(canonical.R(0, 2 * k));
    rows.z[2 * k] = is_odd(canonical.R(0, 2 * k + 1));
  }
  return rows;
}

inline LogicalClass logical_from_parities(const LogicalParityRows& rows, const LVec& c) {
  if (c.size() != static_cast<int>(rows.x.size()))
    throw std::invalid_argument("coefficient dimension does not match the code");
  int x = 0;
  int z = 0;
  for (int j = 0; j < c.size(); ++j) {
    const int odd = static_cast<int>(c[j] & 1LL);
    x ^= odd & rows.x[j];
    z ^= odd & rows.z[j];
  }
  if (x && z) return LogicalClass::Y;
  if (x) return LogicalClass::X;
  if (z) return LogicalClass::Z;
  return LogicalClass::I;
}

}  // namespace detail

// Logical action of the displacement sqrt(2*pi) (M_perp)^T c on the encoded
// qubit: parity of the two logical components after rewriting c in the
// canonical dual basis.
inline LogicalClass classify(const GkpCode& code, const CanonicalForm& canonical,
                             const LVec& c) {
  if (canonical.R.rows() != 2 * code.n_modes())
    throw std::invalid_argument("canonical form does not match the code");
  const detail::LogicalParityRows rows = detail::logical_parity_rows(canonical);
  return detail::logical_from_parities(rows, c);
}

// A decoder for simulation purposes is anything that returns the closest
// point of the sqrt(2*pi)-scaled symplectic dual lattice.
struct ShiftDecoder {
  std::string name;
  std::function<Vec(const Vec&)> closest;
};

enum class DecoderKind { exact, structured, mwpm, mwpm_loglik };

inline const char* decoder_kind_name(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::exact: return "exact";
    case DecoderKind::structured: return "structured";
    case DecoderKind::mwpm: return "mwpm";
    case DecoderKind::mwpm_loglik: return "mwpm-loglik";
  }
  throw std::logic_error("unknown decoder kind");
}

inline DecoderKind parse_decoder_kind(const std::string& name) {
  if (name == "exact") return DecoderKind::exact;
  if (name == "structured") return DecoderKind::structured;
  if (name == "mwpm") return DecoderKind::mwpm;
  if (name == "mwpm-loglik") return DecoderKind::mwpm_loglik;
  throw std::invalid_argument(
      "unknown decoder '" + name + "' (choices: exact, structured, mwpm, mwpm-loglik)");
}

// Builds the decoder for a registry code. The structured decoder exists only
// for the rep-rec families; the matching decoders cover square-based surface
// codes, whose lattice is the one the matcher reproduces. The log-likelihood
// variant bakes in the noise strength it reweights for.
inline ShiftDecoder make_shift_decoder(const NamedCode& named, DecoderKind kind,
                                       double sigma = 0.0) {
  switch (kind) {
    case DecoderKind::exact: {
      const Mat basis = kSqrt2Pi * dual_generator(named.code).m_perp;
      const Reduction reduction = basis.rows() <= 24 ? Reduction::KZ : Reduction::LLL;
      auto dec = std::make_shared<ExactDecoder>(basis, reduction);
      return ShiftDecoder{"exact", [dec](const Vec& t) { return dec->decode(t).point; }};
    }
    case DecoderKind::structured: {
      if (named.family == CodeFamily::rep_rec) {
        auto dec = std::make_shared<RepRecDecoder>(named.param);
        return ShiftDecoder{"structured", [dec](const Vec& t) { return dec->decode(t).point; }};
      }
      if (named.family == CodeFamily::yy_rep_rec) {
        auto dec = std::make_shared<YyRepRecDecoder>(named.param);
        return ShiftDecoder{"structured", [dec](const Vec& t) { return dec->decode(t).point; }};
      }
      throw std::invalid_argument(
          "structured decoder is only available for rep-rec and YY rep-rec codes");
    }
    case DecoderKind::mwpm:
    case DecoderKind::mwpm_loglik: {
      if (named.family == CodeFamily::surface_hex)
        throw std::invalid_argument(
            "matching decoder requires a square-based surface code; the hex-based "
            "surface lattice is not the one the matcher decodes");
      if (named.family != CodeFamily::surface_square || !named.qubit_code)
        throw std::invalid_argument("matching decoder is only available for surface codes");
      auto dec = std::make_shared<SurfaceMwpmDecoder>(*named.qubit_code);
      if (kind == DecoderKind::mwpm)
        return ShiftDecoder{"mwpm", [dec](const Vec& t) { return dec->decode(t).point; }};
      detail::check_noise(NoiseModel{sigma});
      return ShiftDecoder{"mwpm-loglik", [dec, sigma](const Vec& t) {
                            return dec->decode_loglikelihood(t, sigma).point;
                          }};
    }
  }
  throw std::logic_error("unknown decoder kind");
}

// Per-code pipeline with the syndrome map, dual-basis solver, and logical
// parity rows cached once; safe for concurrent use after construction.
class ShiftClassifier {
 public:
  explicit ShiftClassifier(const GkpCode& code)
      : code_(code),
        syndrome_map_(kSqrt2Pi * code.generator() * (-code.omega())),
        dual_t_(kSqrt2Pi * dual_generator(code).m_perp.transpose()),
        eta_map_(-(code.omega() * dual_generator(code).m_perp).transpose() / kSqrt2Pi),
        rows_(detail::logical_parity_rows(canonize(code))) {
    lu_.compute(dual_t_);
  }

  const GkpCode& code() const { return code_; }

  Vec syndrome(const Vec& xi) const { return syndrome_of(code_, xi); }

  Vec eta(const Vec& s) const {
    if (s.size() != dual_t_.rows())
      throw std::invalid_argument("syndrome dimension does not match the code");
    return eta_map_ * s;
  }

  LogicalClass classify_coeffs(const LVec& c) const {
    return detail::logical_from_parities(rows_, c);
  }

  DecodeOutcome run(const ShiftDecoder& decoder, const Vec& xi) const {
    const Vec s = syndrome(xi);
    const Vec eta_v = eta_map_ * s;
    const Vec point = decoder.closest(eta_v);
    if (point.size() != xi.size())
      throw std::invalid_argument("decoder returned a point of the wrong dimension");
    // Residual correction eta - point is applied; the net displacement
    // xi - (eta - point) must be a scaled dual lattice vector.
    const Vec displacement = xi - eta_v + point;
    const Vec c_real = lu_.solve(displacement);
    LVec c(c_real.size());
    for (int j = 0; j < c_real.size(); ++j) {
      const double r = std::round(c_real[j]);
      if (std::abs(c_real[j] - r) > 1e-6)
        throw std::runtime_error(
            "internal consistency failure: net displacement has non-integer dual "
            "coefficients");
      c[j] = std::llround(r);
    }
    return DecodeOutcome{detail::logical_from_parities(rows_, c), std::move(c)};
  }

 private:
  GkpCode code_;
  Mat syndrome_map_;
  Mat dual_t_;
  Mat eta_map_;
  detail::LogicalParityRows rows_;
  Eigen::PartialPivLU<Mat> lu_;
};

inline DecodeOutcome decode_and_classify(const GkpCode& code, const ShiftDecoder& decoder,
                                         const Vec& xi) {
  return ShiftClassifier(code).run(decoder, xi);
}

namespace detail {

inline int resolve_thread_count(int requested) {
  if (requested > 0) return std::min(requested, 256);
  if (const char* env = std::getenv("GKPKIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && end && *end == '\0' && v > 0)
      return static_cast<int>(std::min(v, 256L));
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(std::min(hc, 256u));
}

}  // namespace detail

// Monte-Carlo logical fidelity: the fraction of Gaussian shifts whose decode
// classifies as the identity. Sample i always draws from substream (seed, i),
// so the result is bit-identical for any worker count.
inline FidelityEstimate estimate_fidelity(const GkpCode& code, const ShiftDecoder& decoder,
                                          const NoiseModel& model, long long n_samples,
                                          std::uint64_t seed, int n_threads = 0) {
  detail::check_noise(model);
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  const ShiftClassifier classifier(code);
  const int workers = static_cast<int>(
      std::min<long long>(detail::resolve_thread_count(n_threads), n_samples));
  std::vector<long long> hits(workers, 0);
  std::vector<std::exception_ptr> errors(workers);

  auto run_range = [&](int w, long long lo, long long hi) {
    try {
      long long local = 0;
      for (long long i = lo; i < hi; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        const Vec xi = sample_shift(model, code.n_modes(), rng);
        if (classifier.run(decoder, xi).logical == LogicalClass::I) ++local;
      }
      hits[w] = local;
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    run_range(0, 0, n_samples);
  } else {
    const long long chunk = (n_samples + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const long long lo = w * chunk;
      const long long hi = std::min<long long>(n_samples, lo + chunk);
      pool.emplace_back(run_range, w, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);

  long long total = 0;
  for (long long h : hits) total += h;
  const double f = static_cast<double>(total) / static_cast<double>(n_samples);
  const double se = std::sqrt(f * (1.0 - f) / static_cast<double>(n_samples));
  return FidelityEstimate{f, n_samples, se, seed};
}

struct ThresholdPoint {
  int size = 0;
  double sigma = 0.0;
  FidelityEstimate estimate;
};

struct ThresholdCrossing {
  int size_small = 0;
  int size_large = 0;
  bool found = false;
  double sigma_star = 0.0;
};

struct ThresholdReport {
  std::vector<ThresholdPoint> points;
  std::vector<ThresholdCrossing> crossings;
  bool threshold_found = false;
  double sigma_mean = 0.0;
  double sigma_std = 0.0;
};

// Sweeps a code family over a noise grid and locates, per adjacent size
// pair, where the larger code stops outperforming the smaller one. The
// crossing is interpolated linearly in the fidelity difference; every cell
// reuses the same seed so paired samples share randomness.
inline ThresholdReport threshold_scan(const std::function<NamedCode(int)>& family,
                                      DecoderKind kind, std::vector<double> sigma_grid,
                                      const std::vector<int>& d_list, long long n_samples,
                                      std::uint64_t seed, int n_threads = 0) {
  if (d_list.size() < 2)
    throw std::invalid_argument("threshold scan needs at least two code sizes");
  if (sigma_grid.size() < 2)
    throw std::invalid_argument("threshold scan needs at least two noise values");
  std::sort(sigma_grid.begin(), sigma_grid.end());
  for (std::size_t j = 0; j < sigma_grid.size(); ++j) {
    if (!(sigma_grid[j] > 0.0) || !std::isfinite(sigma_grid[j]))
      throw std::invalid_argument("noise strength must be positive");
    if (j > 0 && sigma_grid[j] == sigma_grid[j - 1])
      throw std::invalid_argument("noise grid has a repeated value");
  }

  ThresholdReport report;
  const std::size_t n_sigma = sigma_grid.size();
  std::vector<std::vector<double>> fidelity(d_list.size(), std::vector<double>(n_sigma, 0.0));
  for (std::size_t a = 0; a < d_list.size(); ++a) {
    const NamedCode named = family(d_list[a]);
    for (std::size_t j = 0; j < n_sigma; ++j) {
      const double sigma = sigma_grid[j];
      const ShiftDecoder decoder = make_shift_decoder(named, kind, sigma);
      const FidelityEstimate est = estimate_fidelity(named.code, decoder, NoiseModel{sigma},
                                                     n_samples, seed, n_threads);
      fidelity[a][j] = est.fidelity;
      report.points.push_back(ThresholdPoint{d_list[a], sigma, est});
    }
  }

  std::vector<double> stars;
  for (std::size_t a = 0; a + 1 < d_list.size(); ++a) {
    ThresholdCrossing crossing;
    crossing.size_small = d_list[a];
    crossing.size_large = d_list[a + 1];
    for (std::size_t j = 0; j + 1 < n_sigma; ++j) {
      const double lo = fidelity[a + 1][j] - fidelity[a][j];
      const double hi = fidelity[a + 1][j + 1] - fidelity[a][j + 1];
      if (lo == 0.0 && hi == 0.0) continue;
      if (lo >= 0.0 && hi < 0.0) {
        crossing.found = true;
        crossing.sigma_star =
            sigma_grid[j] + lo * (sigma_grid[j + 1] - sigma_grid[j]) / (lo - hi);
        break;
      }
    }
    if (crossing.found) stars.push_back(crossing.sigma_star);
    report.crossings.push_back(crossing);
  }

  report.threshold_found = !stars.empty();
  if (report.threshold_found) {
    double mean = 0.0;
    for (double s : stars) mean += s;
    mean /= static_cast<double>(stars.size());
    double var = 0.0;
    for (double s : stars) var += (s - mean) * (s - mean);
    report.sigma_mean = mean;
    report.sigma_std = std::sqrt(var / static_cast<double>(stars.size()));
  }
  return report;
}

}  // namespace gkp
