#pragma once

// Qubit stabilizer codes as binary symplectic data. A Pauli operator on N
// qubits is a binary vector of length 2N in qpqp convention: entry 2j carries
// the X component of qubit j, entry 2j+1 the Z component (Y sets both). Two
// Paulis commute iff their symplectic product is even.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace gkp {

using BinaryVec = std::vector<int>;

struct QubitStabilizerCode {
  int n_qubits = 0;
  int n_logical = 0;
  std::vector<BinaryVec> stabilizer_binaries;  // n_qubits - n_logical rows
  BinaryVec logical_x;
  BinaryVec logical_z;
};

inline BinaryVec pauli_binary(const std::string& paulis) {
  BinaryVec b(2 * paulis.size(), 0);
  for (std::size_t j = 0; j < paulis.size(); ++j) {
    switch (paulis[j]) {
      case 'I':
        break;
      case 'X':
        b[2 * j] = 1;
        break;
      case 'Z':
        b[2 * j + 1] = 1;
        break;
      case 'Y':
        b[2 * j] = 1;
        b[2 * j + 1] = 1;
        break;
      default:
        throw std::invalid_argument("Pauli string may contain only I, X, Y, Z");
    }
  }
  return b;
}

inline std::string binary_pauli(const BinaryVec& b) {
  if (b.size() % 2 != 0) throw std::invalid_argument("binary vector length must be even");
  std::string s(b.size() / 2, 'I');
  for (std::size_t j = 0; j < s.size(); ++j) {
    const int x = b[2 * j] != 0, z = b[2 * j + 1] != 0;
    s[j] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return s;
}

// Parity of the symplectic product; 0 means the Paulis commute.
inline int symplectic_parity(const BinaryVec& a, const BinaryVec& b) {
  if (a.size() != b.size() || a.size() % 2 != 0)
    throw std::invalid_argument("symplectic_parity needs equal even-length vectors");
  int p = 0;
  for (std::size_t j = 0; j < a.size(); j += 2)
    p ^= (a[j] & b[j + 1]) ^ (a[j + 1] & b[j]);
  return p;
}

inline void validate(const QubitStabilizerCode& code) {
  const int n = code.n_qubits;
  const std::size_t len = 2 * static_cast<std::size_t>(n);
  if (n < 1 || code.n_logical < 0 || code.n_logical > n)
    throw std::invalid_argument("stabilizer code has invalid qubit counts");
  if (code.stabilizer_binaries.size() != static_cast<std::size_t>(n - code.n_logical))
    throw std::invalid_argument("stabilizer count must equal n_qubits - n_logical");
  auto check_entries = [len](const BinaryVec& b) {
    if (b.size() != len) throw std::invalid_argument("binary vector has wrong length");
    for (int v : b)
      if (v != 0 && v != 1) throw std::invalid_argument("binary vector entries must be 0 or 1");
  };
  for (const BinaryVec& g : code.stabilizer_binaries) check_entries(g);
  check_entries(code.logical_x);
  check_entries(code.logical_z);
  const auto& stabs = code.stabilizer_binaries;
  for (std::size_t i = 0; i < stabs.size(); ++i)
    for (std::size_t j = i + 1; j < stabs.size(); ++j)
      if (symplectic_parity(stabs[i], stabs[j]) != 0)
        throw std::invalid_argument("stabilizer generators must pairwise commute");
  for (const BinaryVec& g : stabs)
    if (symplectic_parity(g, code.logical_x) != 0 || symplectic_parity(g, code.logical_z) != 0)
      throw std::invalid_argument("logical operators must commute with all stabilizers");
  if (code.n_logical == 1 && symplectic_parity(code.logical_x, code.logical_z) != 1)
    throw std::invalid_argument("logical X and Z must anticommute");
}

inline QubitStabilizerCode make_stabilizer_code(int n_logical,
                                                const std::vector<std::string>& stabilizers,
                                                const std::string& logical_x,
                                                const std::string& logical_z) {
  QubitStabilizerCode code;
  code.n_qubits = static_cast<int>(logical_x.size());
  code.n_logical = n_logical;
  code.stabilizer_binaries.reserve(stabilizers.size());
  for (const std::string& s : stabilizers) {
    if (s.size() != logical_x.size())
      throw std::invalid_argument("all Pauli strings must have the same length");
    code.stabilizer_binaries.push_back(pauli_binary(s));
  }
  code.logical_x = pauli_binary(logical_x);
  code.logical_z = pauli_binary(logical_z);
  validate(code);
  return code;
}

inline QubitStabilizerCode five_qubit_code() {
  return make_stabilizer_code(1, {"IXZZX", "XIXZZ", "ZXIXZ", "ZZXIX"}, "XXXXX", "ZZZZZ");
}

inline QubitStabilizerCode steane_code() {
  return make_stabilizer_code(1,
                              {"IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"},
                              "XXXXXXX", "ZZZZZZZ");
}

// n-qubit repetition code with XX stabilizers; logicals X_1 and Z^(x)n.
inline QubitStabilizerCode xx_repetition_code(int n) {
  if (n < 1) throw std::invalid_argument("repetition code needs n >= 1");
  QubitStabilizerCode code;
  code.n_qubits = n;
  code.n_logical = 1;
  for (int i = 0; i + 1 < n; ++i) {
    BinaryVec g(2 * n, 0);
    g[2 * i] = 1;
    g[2 * (i + 1)] = 1;
    code.stabilizer_binaries.push_back(std::move(g));
  }
  code.logical_x.assign(2 * n, 0);
  code.logical_x[0] = 1;
  code.logical_z.assign(2 * n, 0);
  for (int i = 0; i < n; ++i) code.logical_z[2 * i + 1] = 1;
  validate(code);
  return code;
}

// n-qubit repetition code with YY stabilizers; logicals X^(x)n and Z_1 X_2..X_n.
inline QubitStabilizerCode yy_repetition_code(int n) {
  if (n < 1) throw std::invalid_argument("repetition code needs n >= 1");
  QubitStabilizerCode code;
  code.n_qubits = n;
  code.n_logical = 1;
  for (int i = 0; i + 1 < n; ++i) {
    BinaryVec g(2 * n, 0);
    g[2 * i] = g[2 * i + 1] = 1;
    g[2 * (i + 1)] = g[2 * (i + 1) + 1] = 1;
    code.stabilizer_binaries.push_back(std::move(g));
  }
  code.logical_x.assign(2 * n, 0);
  for (int i = 0; i < n; ++i) code.logical_x[2 * i] = 1;
  code.logical_z.assign(2 * n, 0);
  code.logical_z[1] = 1;
  for (int i = 1; i < n; ++i) code.logical_z[2 * i] = 1;
  validate(code);
  return code;
}

// Two n-qubit XX-repetition blocks joined by the stabilizer Y Z..Z | Y Z..Z
// (the product of the two block-level Y logicals). Logicals: Z on every
// qubit, and X on the last qubit of block one times Z on all of block two.
inline QubitStabilizerCode yy_block_code(int n) {
  if (n < 1) throw std::invalid_argument("yy_block_code needs n >= 1");
  const int m = 2 * n;
  QubitStabilizerCode code;
  code.n_qubits = m;
  code.n_logical = 1;
  for (int b = 0; b < 2; ++b)
    for (int i = 0; i + 1 < n; ++i) {
      BinaryVec g(2 * m, 0);
      g[2 * (b * n + i)] = 1;
      g[2 * (b * n + i + 1)] = 1;
      code.stabilizer_binaries.push_back(std::move(g));
    }
  BinaryVec yy(2 * m, 0);
  for (int b = 0; b < 2; ++b) {
    yy[2 * (b * n)] = 1;  // Y on the first qubit of each block
    for (int i = 0; i < n; ++i) yy[2 * (b * n + i) + 1] = 1;
  }
  code.stabilizer_binaries.push_back(std::move(yy));
  code.logical_x.assign(2 * m, 0);
  code.logical_x[2 * (n - 1)] = 1;
  for (int i = n; i < m; ++i) code.logical_x[2 * i + 1] = 1;
  code.logical_z.assign(2 * m, 0);
  for (int i = 0; i < m; ++i) code.logical_z[2 * i + 1] = 1;
  validate(code);
  return code;
}

// Rotated surface code on a d0 x d0 grid of data qubits, d0 odd. Faces are
// indexed by (r, c) with r, c in 0..d0 and touch the up-to-four data qubits
// at grid positions (r, c), (r, c+1), (r+1, c), (r+1, c+1); a face hosts an
// X check iff r+c is even and 1 <= c <= d0-1, a Z check iff r+c is odd and
// 1 <= r <= d0-1, which places weight-2 checks on the boundary. Logicals run
// along the first column (X) and the first row (Z).
inline QubitStabilizerCode surface_code(int d0) {
  if (d0 < 3 || d0 % 2 == 0)
    throw std::invalid_argument("surface_code needs an odd distance >= 3");
  const int n = d0 * d0;
  auto qubit = [d0](int r, int c) { return (r - 1) * d0 + (c - 1); };  // r, c in 1..d0
  QubitStabilizerCode code;
  code.n_qubits = n;
  code.n_logical = 1;
  auto add_face = [&](int r, int c, bool x_type) {
    BinaryVec g(2 * n, 0);
    for (int dr = 0; dr < 2; ++dr)
      for (int dc = 0; dc < 2; ++dc) {
        const int qr = r + dr, qc = c + dc;
        if (qr < 1 || qr > d0 || qc < 1 || qc > d0) continue;
        g[2 * qubit(qr, qc) + (x_type ? 0 : 1)] = 1;
      }
    code.stabilizer_binaries.push_back(std::move(g));
  };
  for (int r = 0; r <= d0; ++r)
    for (int c = 1; c <= d0 - 1; ++c)
      if ((r + c) % 2 == 0) add_face(r, c, true);
  for (int r = 1; r <= d0 - 1; ++r)
    for (int c = 0; c <= d0; ++c)
      if ((r + c) % 2 == 1) add_face(r, c, false);
  code.logical_x.assign(2 * n, 0);
  for (int r = 1; r <= d0; ++r) code.logical_x[2 * qubit(r, 1)] = 1;
  code.logical_z.assign(2 * n, 0);
  for (int c = 1; c <= d0; ++c) code.logical_z[2 * qubit(1, c) + 1] = 1;
  validate(code);
  return code;
}

// Concatenation at the qubit level: every qubit of the outer code becomes a
// block of the inner code, outer Paulis act through the inner logical
// representatives (Y maps to the XOR of the X and Z representatives).
inline QubitStabilizerCode compose(const QubitStabilizerCode& outer,
                                   const QubitStabilizerCode& inner) {
  validate(outer);
  validate(inner);
  if (outer.n_logical != 1 || inner.n_logical != 1)
    throw std::invalid_argument("compose requires single-logical-qubit codes");
  const int ni = inner.n_qubits;
  const int n = outer.n_qubits * ni;
  auto lift = [&](const BinaryVec& v) {
    BinaryVec out(2 * n, 0);
    for (int j = 0; j < outer.n_qubits; ++j) {
      const int x = v[2 * j], z = v[2 * j + 1];
      for (int q = 0; q < 2 * ni; ++q) {
        int bit = 0;
        if (x) bit ^= inner.logical_x[q];
        if (z) bit ^= inner.logical_z[q];
        out[2 * j * ni + q] = bit;
      }
    }
    return out;
  };
  QubitStabilizerCode code;
  code.n_qubits = n;
  code.n_logical = 1;
  for (int j = 0; j < outer.n_qubits; ++j)
    for (const BinaryVec& g : inner.stabilizer_binaries) {
      BinaryVec lifted(2 * n, 0);
      for (int q = 0; q < 2 * ni; ++q) lifted[2 * j * ni + q] = g[q];
      code.stabilizer_binaries.push_back(std::move(lifted));
    }
  for (const BinaryVec& g : outer.stabilizer_binaries)
    code.stabilizer_binaries.push_back(lift(g));
  code.logical_x = lift(outer.logical_x);
  code.logical_z = lift(outer.logical_z);
  validate(code);
  return code;
}

namespace detail {

// Reduce `rows` to row echelon form over GF(2); returns the rank.
inline int gf2_echelon(std::vector<BinaryVec>& rows) {
  if (rows.empty()) return 0;
  const std::size_t w = rows[0].size();
  int r = 0;
  for (std::size_t col = 0; col < w && r < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][col]) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[r], rows[pivot]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != r && rows[i][col])
        for (std::size_t j = 0; j < w; ++j) rows[i][j] ^= rows[r][j];
    ++r;
  }
  return r;
}

inline bool gf2_in_span(const std::vector<BinaryVec>& basis, const BinaryVec& v) {
  std::vector<BinaryVec> rows = basis;
  const int rank = gf2_echelon(rows);
  rows.push_back(v);
  return gf2_echelon(rows) == rank;
}

}  // namespace detail

// Whether the stabilizer group is preserved by the relabeling X -> Y -> Z -> X
// on every qubit; per-qubit components map as (x, z) -> (x^z, x). Codes with
// this symmetry treat the three logical errors on equal footing.
inline bool stabilizer_group_cyclically_invariant(const QubitStabilizerCode& code) {
  const auto& stabs = code.stabilizer_binaries;
  for (const BinaryVec& g : stabs) {
    BinaryVec mapped(g.size(), 0);
    for (std::size_t j = 0; j < g.size(); j += 2) {
      mapped[j] = g[j] ^ g[j + 1];
      mapped[j + 1] = g[j];
    }
    if (!detail::gf2_in_span(stabs, mapped)) return false;
  }
  return true;
}

}  // namespace gkp
