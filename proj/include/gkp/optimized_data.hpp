#pragma once

// Shipped parameter sets for the numerically optimized codes. Each instance
// is an antisymmetric block, a symmetric block, and a per-mode squeeze
// vector; instances exist for three, seven, and nine modes.

#include "gkp/core.hpp"

#include <stdexcept>
#include <vector>

namespace gkp {

struct OptimizedCodeData {
  Mat skew;     // N x N, skew^T = -skew
  Mat sym;      // N x N, sym^T = sym
  Vec squeeze;  // length N, positive
};

namespace detail {

inline OptimizedCodeData make_optimized_data(int n, const double* skew, const double* sym,
                                             const double* squeeze) {
  OptimizedCodeData data;
  data.skew = Mat(n, n);
  data.sym = Mat(n, n);
  data.squeeze = Vec(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      data.skew(i, j) = skew[i * n + j];
      data.sym(i, j) = sym[i * n + j];
    }
    data.squeeze[i] = squeeze[i];
  }
  if (data.skew != -data.skew.transpose() || data.sym != data.sym.transpose())
    throw std::logic_error("optimized code data tables are inconsistent");
  return data;
}

}  // namespace detail

inline const std::vector<int>& optimized_code_sizes() {
  static const std::vector<int> sizes = {3, 7, 9};
  return sizes;
}

inline OptimizedCodeData optimized_code_data(int n_modes) {
  static const double skew3[] = {
      0.000,  -0.129, 0.303,   //
      0.129,  0.000,  -0.804,  //
      -0.303, 0.804,  0.000,
  };
  static const double sym3[] = {
      1.126,  -0.674, -1.101,  //
      -0.674, 0.556,  0.252,   //
      -1.101, 0.252,  0.235,
  };
  static const double squeeze3[] = {0.329, 3.018, 0.326};

  static const double skew7[] = {
      0.000,  0.080,  0.237,  -0.221, 0.599,  -0.597, -0.220,  //
      -0.080, 0.000,  -0.250, 0.261,  0.652,  -0.556, -0.074,  //
      -0.237, 0.250,  0.000,  -0.884, 0.039,  -0.121, 0.335,   //
      0.221,  -0.261, 0.884,  0.000,  0.796,  -0.431, -0.199,  //
      -0.599, -0.652, -0.039, -0.796, 0.000,  -0.506, -0.239,  //
      0.597,  0.556,  0.121,  0.431,  0.506,  0.000,  -0.105,  //
      0.220,  0.074,  -0.335, 0.199,  0.239,  0.105,  0.000,
  };
  static const double sym7[] = {
      -0.356, -0.519, -0.077, -0.616, -0.256, 0.374,  0.826,   //
      -0.519, -0.661, -0.073, 0.527,  0.300,  0.239,  0.629,   //
      -0.077, -0.073, -1.209, 0.381,  -0.201, 0.014,  -0.223,  //
      -0.616, 0.527,  0.381,  -0.621, -0.670, 1.313,  -0.129,  //
      -0.256, 0.300,  -0.201, -0.670, -0.992, -0.253, -0.246,  //
      0.374,  0.239,  0.014,  1.313,  -0.253, -0.114, 0.184,   //
      0.826,  0.629,  -0.223, -0.129, -0.246, 0.184,  -0.882,
  };
  static const double squeeze7[] = {0.362, 2.650, 2.613, 2.471, 0.382, 0.366, 0.341};

  static const double skew9[] = {
      0.000,  0.334,  -0.761, 0.958,  -0.031, 0.347,  0.322,  0.098,  0.064,   //
      -0.334, 0.000,  -0.072, 0.755,  0.162,  0.830,  0.534,  0.207,  0.557,   //
      0.761,  0.072,  0.000,  0.094,  0.810,  0.121,  -0.415, 0.422,  0.155,   //
      -0.958, -0.755, -0.094, 0.000,  0.079,  -0.879, 0.213,  -0.098, 0.553,   //
      0.031,  -0.162, -0.810, -0.079, 0.000,  0.379,  -0.444, -0.081, 0.180,   //
      -0.347, -0.830, -0.121, 0.879,  -0.379, 0.000,  -0.356, 0.022,  0.194,   //
      -0.322, -0.534, 0.415,  -0.213, 0.444,  0.356,  0.000,  -0.001, -0.538,  //
      -0.098, -0.207, -0.422, 0.098,  0.081,  -0.022, 0.001,  0.000,  0.167,   //
      -0.064, -0.557, -0.155, -0.553, -0.180, -0.194, 0.538,  -0.167, 0.000,
  };
  static const double sym9[] = {
      0.377,  0.298,  -0.200, 0.225,  -0.411, 0.010,  0.072,  0.438,  -0.261,  //
      0.298,  0.510,  -0.112, 0.706,  0.324,  0.366,  -0.349, -0.207, -0.948,  //
      -0.200, -0.112, -0.181, 0.233,  0.265,  -0.051, 0.783,  -0.436, 0.379,   //
      0.225,  0.706,  0.233,  -0.325, 0.112,  -0.157, 0.171,  0.343,  -0.012,  //
      -0.411, 0.324,  0.265,  0.112,  0.018,  0.898,  -0.355, -0.138, 0.004,   //
      0.010,  0.366,  -0.051, -0.157, 0.898,  -0.456, -0.360, 0.916,  0.692,   //
      0.072,  -0.349, 0.783,  0.171,  -0.355, -0.360, -0.369, 0.182,  0.244,   //
      0.438,  -0.207, -0.436, 0.343,  -0.138, 0.916,  0.182,  0.616,  -0.245,  //
      -0.261, -0.948, 0.379,  -0.012, 0.004,  0.692,  0.244,  -0.245, -0.765,
  };
  static const double squeeze9[] = {0.332, 0.351, 0.357, 2.728, 2.723,
                                    2.775, 0.353, 2.980, 3.676};

  switch (n_modes) {
    case 3:
      return detail::make_optimized_data(3, skew3, sym3, squeeze3);
    case 7:
      return detail::make_optimized_data(7, skew7, sym7, squeeze7);
    case 9:
      return detail::make_optimized_data(9, skew9, sym9, squeeze9);
    default:
      throw std::invalid_argument("optimized code data exists only for 3, 7, or 9 modes");
  }
}

}  // namespace gkp
