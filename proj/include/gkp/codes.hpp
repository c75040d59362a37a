#pragma once

// GKP code constructions: base lattices, concatenations of qubit stabilizer
// codes with one-mode bases, the repetition-rectangular families, numerically
// optimized codes, and code distances. All generators use qpqp ordering.

#include "gkp/canonize.hpp"
#include "gkp/code.hpp"
#include "gkp/core.hpp"
#include "gkp/cvp.hpp"
#include "gkp/optimized_data.hpp"
#include "gkp/stabilizer.hpp"
#include "gkp/structured.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gkp {

// --- Base codes --------------------------------------------------------------

inline GkpCode square_code(const std::vector<long long>& dims) {
  if (dims.empty()) throw std::invalid_argument("square_code needs at least one mode");
  const int n = static_cast<int>(dims.size());
  Mat m = Mat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    if (dims[k] < 1) throw std::invalid_argument("square_code dimensions must be >= 1");
    const double s = std::sqrt(static_cast<double>(dims[k]));
    m(2 * k, 2 * k) = s;
    m(2 * k + 1, 2 * k + 1) = s;
  }
  return GkpCode(std::move(m), Ordering::qpqp);
}

inline GkpCode rectangular_code(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("rectangular_code needs a positive aspect ratio");
  const double s2 = std::sqrt(2.0);
  Mat m(2, 2);
  m << s2 * eta, 0, 0, s2 / eta;
  return GkpCode(std::move(m), Ordering::qpqp);
}

inline GkpCode hexagonal_code() {
  const double s = std::pow(3.0, -0.25);
  Mat m(2, 2);
  m << 2 * s, 0, s, std::sqrt(3.0) * s;
  return GkpCode(std::move(m), Ordering::qpqp);
}

// Square lattice rotated by 45 degrees; the one-mode base whose concatenation
// with a YY repetition code yields the checkerboard codes below.
inline GkpCode diamond_code() {
  Mat m(2, 2);
  m << 1, 1, 1, -1;
  return GkpCode(std::move(m), Ordering::qpqp);
}

inline GkpCode dn_code(int n_modes) {
  if (n_modes < 2) throw std::invalid_argument("dn_code needs at least two modes");
  return GkpCode(dn_generator(2 * n_modes), Ordering::qpqp);
}

inline GkpCode tesseract_code() {
  const double a = std::pow(2.0, 0.25);
  const double b = std::pow(2.0, -0.25);
  Mat m(4, 4);
  m << b, 0, b, 0,  //
      0, a, 0, 0,   //
      b, 0, -b, 0,  //
      0, 0, 0, a;
  return GkpCode(std::move(m), Ordering::qpqp);
}

// --- Construction A ----------------------------------------------------------

namespace detail {

inline BigInt two_pow(int e) {
  BigInt v(1);
  v <<= e;
  return v;
}

// Exact determinant check: sqrt(2)*M is integral for both construction paths,
// and det(sqrt(2)*M) = 2^{n_qubits} det(M) must equal +-2^{n_qubits+k}.
inline bool construction_determinant_ok(const Mat& m, int n_qubits, int n_logical) {
  const double s2 = std::sqrt(2.0);
  const int dim = static_cast<int>(m.rows());
  BigMat im(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double v = s2 * m(i, j);
      const double r = std::round(v);
      if (std::abs(v - r) > kTauInt) return false;
      im(i, j) = BigInt(static_cast<long long>(r));
    }
  const BigInt want = two_pow(n_qubits + n_logical);
  const BigInt det = bareiss_determinant(im);
  return det == want || det == -want;
}

// Greedy row replacement: each stabilizer claims the first coordinate where
// it is nonzero and the row of sqrt(2)*I is still unreplaced. Fails (returns
// false) when no row is available or the result loses the 2^k determinant.
inline bool greedy_construction(const QubitStabilizerCode& sc, Mat& out) {
  const int dim = 2 * sc.n_qubits;
  const double s2 = std::sqrt(2.0);
  Mat m = s2 * Mat::Identity(dim, dim);
  std::vector<char> replaced(dim, 0);
  for (const BinaryVec& g : sc.stabilizer_binaries) {
    int row = -1;
    for (int l = 0; l < dim; ++l)
      if (g[l] != 0 && !replaced[l]) {
        row = l;
        break;
      }
    if (row < 0) return false;
    replaced[row] = 1;
    for (int j = 0; j < dim; ++j) m(row, j) = g[j] / s2;
  }
  if (!construction_determinant_ok(m, sc.n_qubits, sc.n_logical)) return false;
  out = std::move(m);
  return true;
}

// Standard-form fallback: bring the stabilizer binaries (as rows [X | Z] in
// qqpp layout) to
//   [ I A1 A2 | B 0 C ]
//   [ 0 0  0  | D I E ]
// by GF(2) row reduction and qubit relabeling, append the doubled unit rows
// that complete a generating set, undo the relabeling, and return to qpqp.
inline Mat standard_form_construction(const QubitStabilizerCode& sc) {
  const int n = sc.n_qubits, k = sc.n_logical, ns = n - k;
  const double s2 = std::sqrt(2.0);
  std::vector<BinaryVec> g(ns, BinaryVec(2 * n, 0));
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < n; ++j) {
      g[i][j] = sc.stabilizer_binaries[i][2 * j];
      g[i][n + j] = sc.stabilizer_binaries[i][2 * j + 1];
    }
  std::vector<int> perm(n);  // perm[slot] = original qubit index
  std::iota(perm.begin(), perm.end(), 0);
  auto swap_qubits = [&](int a, int b) {
    if (a == b) return;
    for (BinaryVec& row : g) {
      std::swap(row[a], row[b]);
      std::swap(row[n + a], row[n + b]);
    }
    std::swap(perm[a], perm[b]);
  };
  auto xor_rows = [&](int dst, int src) {
    for (int j = 0; j < 2 * n; ++j) g[dst][j] ^= g[src][j];
  };

  // Stage 1: reduced echelon form of the X block, pivots moved onto the
  // leading qubits. Rows r..ns-1 end with a vanishing X block.
  int r = 0;
  while (r < ns) {
    int pr = -1, pc = -1;
    for (int c = r; c < n && pr < 0; ++c)
      for (int i = r; i < ns; ++i)
        if (g[i][c]) {
          pr = i;
          pc = c;
          break;
        }
    if (pr < 0) break;
    std::swap(g[r], g[pr]);
    swap_qubits(r, pc);
    for (int i = 0; i < ns; ++i)
      if (i != r && g[i][r]) xor_rows(i, r);
    ++r;
  }
  // Stage 2: reduced echelon form of the remaining rows' Z block, pivots
  // moved onto qubits r..ns-1. This also clears those Z columns in the
  // stage-1 rows, producing the 0 block between B and C.
  for (int s = r; s < ns; ++s) {
    int pr = -1, pc = -1;
    for (int c = s; c < n && pr < 0; ++c)
      for (int i = s; i < ns; ++i)
        if (g[i][n + c]) {
          pr = i;
          pc = c;
          break;
        }
    if (pr < 0) throw std::invalid_argument("stabilizer generators are linearly dependent");
    std::swap(g[s], g[pr]);
    swap_qubits(s, pc);
    for (int i = 0; i < ns; ++i)
      if (i != s && g[i][n + s]) xor_rows(i, s);
  }

  // Assemble over sqrt(2): the reduced stabilizer rows plus doubled unit
  // rows covering the coordinates without a stabilizer pivot.
  Mat mq = Mat::Zero(2 * n, 2 * n);
  int row = 0;
  for (int i = 0; i < ns; ++i, ++row)
    for (int j = 0; j < 2 * n; ++j) mq(row, j) = g[i][j] / s2;
  for (int j = 0; j < k; ++j, ++row) mq(row, ns + j) = 2 / s2;
  for (int j = 0; j < r; ++j, ++row) mq(row, n + j) = 2 / s2;
  for (int j = r; j < ns; ++j, ++row) mq(row, j) = 2 / s2;
  for (int j = 0; j < k; ++j, ++row) mq(row, n + ns + j) = 2 / s2;

  Mat mu(2 * n, 2 * n);
  for (int c = 0; c < n; ++c) {
    mu.col(perm[c]) = mq.col(c);
    mu.col(n + perm[c]) = mq.col(n + c);
  }
  const Mat m = reorder(mu, Ordering::qqpp, Ordering::qpqp);
  if (!construction_determinant_ok(m, n, k))
    throw std::logic_error("standard-form construction lost the 2^k determinant");
  return m;
}

}  // namespace detail

// Lattice generator of the concatenation with square-GKP qubits: starts from
// sqrt(2)*I and replaces rows with stabilizer binaries over sqrt(2), falling
// back to the standard-form construction when the greedy replacement fails.
inline Mat construction_a(const QubitStabilizerCode& sc) {
  validate(sc);
  Mat m;
  if (detail::greedy_construction(sc, m)) return m;
  return detail::standard_form_construction(sc);
}

// M = M_conc^{(sq)} (S_base^T)^{(+)N} where S_base^T is the canonical base
// generator over sqrt(2); the base must encode one qubit in one mode.
inline GkpCode concatenate(const GkpCode& base, const QubitStabilizerCode& sc) {
  if (base.n_modes() != 1)
    throw std::invalid_argument("concatenate requires a one-mode base code");
  const CanonicalForm cf = canonize(base);
  if (cf.d.size() != 1 || cf.d[0] != 2)
    throw std::invalid_argument("concatenate requires a base code encoding one qubit");
  const Mat s_base_t = cf.m_canon / std::sqrt(2.0);
  const Mat mc = construction_a(sc);
  const int n = sc.n_qubits;
  Mat s = Mat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) s.block(2 * j, 2 * j, 2, 2) = s_base_t;
  return GkpCode(mc * s, Ordering::qpqp);
}

// --- Repetition-rectangular families ------------------------------------------

inline GkpCode rep_rec_code(int n) {
  if (n < 1) throw std::invalid_argument("rep_rec_code needs n >= 1");
  return concatenate(rectangular_code(std::pow(n, 0.25)), xx_repetition_code(n));
}

// Two rep-rec blocks of n modes each joined by the YY stabilizer; 2n modes.
inline GkpCode yy_rep_rec_code(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("yy_rep_rec_code needs even n >= 2");
  return concatenate(rectangular_code(std::pow(n, 0.25)), yy_block_code(n));
}

// --- Optimized codes ----------------------------------------------------------

// M = M_sq T^{-1} (O_2^{qqpp})^T T Z with O_2 = exp([[skew, sym], [-sym,
// skew]]) in qqpp ordering, Z the per-mode squeeze, and M_sq = diag(sqrt(2),
// sqrt(2), 1, .., 1). O_2 is validated to be orthogonal and symplectic.
inline GkpCode optimized_code(const OptimizedCodeData& data) {
  const int n = static_cast<int>(data.skew.rows());
  if (n < 1 || data.skew.cols() != n || data.sym.rows() != n || data.sym.cols() != n ||
      data.squeeze.size() != n)
    throw std::invalid_argument("optimized code data has inconsistent dimensions");
  if ((data.skew + data.skew.transpose()).cwiseAbs().maxCoeff() > kCoeffTol)
    throw std::invalid_argument("optimized code data needs an antisymmetric skew block");
  if ((data.sym - data.sym.transpose()).cwiseAbs().maxCoeff() > kCoeffTol)
    throw std::invalid_argument("optimized code data needs a symmetric sym block");
  for (int i = 0; i < n; ++i)
    if (!(data.squeeze[i] > 0.0) || !std::isfinite(data.squeeze[i]))
      throw std::invalid_argument("optimized code data needs positive squeeze factors");

  Mat a(2 * n, 2 * n);
  a.topLeftCorner(n, n) = data.skew;
  a.topRightCorner(n, n) = data.sym;
  a.bottomLeftCorner(n, n) = -data.sym;
  a.bottomRightCorner(n, n) = data.skew;
  const Mat o2 = a.exp();
  const Mat t = ordering_permutation(n);
  const Mat s = t.transpose() * o2.transpose() * t;
  const Mat omega = symplectic_form(n, Ordering::qpqp);
  const Mat eye = Mat::Identity(2 * n, 2 * n);
  if ((s * s.transpose() - eye).cwiseAbs().maxCoeff() > kTauSympl)
    throw std::logic_error("optimized code rotation is not orthogonal");
  if ((s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() > kTauSympl)
    throw std::logic_error("optimized code rotation is not symplectic");

  Mat z = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    z(2 * i, 2 * i) = data.squeeze[i];
    z(2 * i + 1, 2 * i + 1) = 1.0 / data.squeeze[i];
  }
  Mat msq = eye;
  msq(0, 0) = msq(1, 1) = std::sqrt(2.0);
  return GkpCode(msq * s * z, Ordering::qpqp);
}

// --- Code distance -------------------------------------------------------------

struct DistanceReport {
  double d_x = 0.0;
  double d_y = 0.0;
  double d_z = 0.0;
  double d = 0.0;  // min of the three
};

// Distances of the three logical classes: sqrt(2*pi) times the distance from
// w1, w2, and w1+w2 to the stabilizer lattice, where w1, w2 are the first
// two rows of the canonical dual generator (half the canonical rows for a
// one-qubit code).
inline DistanceReport code_distance(const GkpCode& code) {
  const CanonicalForm cf = canonize(code);
  bool one_qubit = !cf.d.empty() && cf.d[0] == 2;
  for (std::size_t i = 1; i < cf.d.size(); ++i)
    if (cf.d[i] != 1) one_qubit = false;
  if (!one_qubit)
    throw std::invalid_argument("code_distance requires a code encoding exactly one qubit");
  const Vec w1 = cf.m_canon.row(0).transpose() / 2.0;
  const Vec w2 = cf.m_canon.row(1).transpose() / 2.0;
  const int dim = static_cast<int>(cf.m_canon.rows());
  const Reduction red = dim <= kKzDimensionCap ? Reduction::KZ : Reduction::LLL;
  const ExactDecoder decoder(cf.m_canon, red);
  DistanceReport rep;
  rep.d_x = kSqrt2Pi * decoder.decode(w1).dist;
  rep.d_z = kSqrt2Pi * decoder.decode(w2).dist;
  rep.d_y = kSqrt2Pi * decoder.decode(w1 + w2).dist;
  rep.d = std::min({rep.d_x, rep.d_y, rep.d_z});
  return rep;
}

// --- Named-code registry --------------------------------------------------------

enum class CodeFamily {
  square,
  rectangular,
  hexagonal,
  d_lattice,
  tesseract,
  rep_rec,
  yy_rep_rec,
  five_qubit_hex,
  steane_hex,
  five_qubit_d4,
  surface_hex,
  surface_square,
  optimized,
};

struct NamedCode {
  std::string id;
  CodeFamily family;
  int param;   // mode count, block count, or surface distance; family dependent
  double eta;  // rectangular only
  GkpCode code;
  std::optional<QubitStabilizerCode> qubit_code;  // surface families keep the layout
};

namespace detail {

inline int parse_code_count(const std::string& id, const std::string& arg) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(arg, &used);
  } catch (...) {
    used = 0;
  }
  if (used == 0 || used != arg.size())
    throw std::invalid_argument("bad integer parameter in code id: " + id);
  return v;
}

inline double parse_code_scale(const std::string& id, const std::string& arg) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(arg, &used);
  } catch (...) {
    used = 0;
  }
  if (used == 0 || used != arg.size())
    throw std::invalid_argument("bad real parameter in code id: " + id);
  return v;
}

}  // namespace detail

inline const std::vector<std::string>& named_code_ids() {
  static const std::vector<std::string> ids = {
      "square",     "rect:<eta>",    "hex",           "d4",
      "d2n:<N>",    "tesseract",     "reprec:<N>",    "yyreprec:<N>",
      "513hex",     "713hex",        "513d4",         "surfhex:<d0>",
      "surfsq:<d0>", "optimized:<N>",
  };
  return ids;
}

inline NamedCode make_named_code(const std::string& id) {
  const auto pos = id.find(':');
  const std::string head = pos == std::string::npos ? id : id.substr(0, pos);
  const std::string arg = pos == std::string::npos ? std::string() : id.substr(pos + 1);
  auto no_arg = [&]() {
    if (!arg.empty() || pos != std::string::npos)
      throw std::invalid_argument("code id takes no parameter: " + id);
  };
  auto count_arg = [&]() {
    if (pos == std::string::npos)
      throw std::invalid_argument("code id requires a parameter: " + id);
    return detail::parse_code_count(id, arg);
  };

  if (head == "square") {
    no_arg();
    return NamedCode{id, CodeFamily::square, 1, 0.0, square_code({2}), std::nullopt};
  }
  if (head == "rect") {
    if (pos == std::string::npos)
      throw std::invalid_argument("code id requires a parameter: " + id);
    const double eta = detail::parse_code_scale(id, arg);
    return NamedCode{id, CodeFamily::rectangular, 1, eta, rectangular_code(eta), std::nullopt};
  }
  if (head == "hex") {
    no_arg();
    return NamedCode{id, CodeFamily::hexagonal, 1, 0.0, hexagonal_code(), std::nullopt};
  }
  if (head == "d4") {
    no_arg();
    return NamedCode{id, CodeFamily::d_lattice, 2, 0.0, dn_code(2), std::nullopt};
  }
  if (head == "d2n") {
    const int n = count_arg();
    return NamedCode{id, CodeFamily::d_lattice, n, 0.0, dn_code(n), std::nullopt};
  }
  if (head == "tesseract") {
    no_arg();
    return NamedCode{id, CodeFamily::tesseract, 2, 0.0, tesseract_code(), std::nullopt};
  }
  if (head == "reprec") {
    const int n = count_arg();
    return NamedCode{id, CodeFamily::rep_rec, n, 0.0, rep_rec_code(n), std::nullopt};
  }
  if (head == "yyreprec") {
    const int n = count_arg();
    return NamedCode{id, CodeFamily::yy_rep_rec, n, 0.0, yy_rep_rec_code(n), std::nullopt};
  }
  if (head == "513hex") {
    no_arg();
    return NamedCode{id, CodeFamily::five_qubit_hex, 5, 0.0,
                     concatenate(hexagonal_code(), five_qubit_code()), std::nullopt};
  }
  if (head == "713hex") {
    no_arg();
    return NamedCode{id, CodeFamily::steane_hex, 7, 0.0,
                     concatenate(hexagonal_code(), steane_code()), std::nullopt};
  }
  if (head == "513d4") {
    no_arg();
    return NamedCode{id, CodeFamily::five_qubit_d4, 10, 0.0,
                     concatenate(diamond_code(), compose(five_qubit_code(), yy_repetition_code(2))),
                     std::nullopt};
  }
  if (head == "surfhex" || head == "surfsq") {
    const int d0 = count_arg();
    QubitStabilizerCode sc = surface_code(d0);
    const bool hex = head == "surfhex";
    GkpCode code = hex ? concatenate(hexagonal_code(), sc) : concatenate(square_code({2}), sc);
    return NamedCode{id, hex ? CodeFamily::surface_hex : CodeFamily::surface_square, d0, 0.0,
                     std::move(code), std::move(sc)};
  }
  if (head == "optimized") {
    const int n = count_arg();
    return NamedCode{id, CodeFamily::optimized, n, 0.0, optimized_code(optimized_code_data(n)),
                     std::nullopt};
  }
  throw std::invalid_argument("unknown code id: " + id);
}

}  // namespace gkp
