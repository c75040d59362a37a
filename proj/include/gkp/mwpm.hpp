#pragma once

// Matching-based exact decoder for surface-code GKP lattices built on the
// square base code. Scaled by 1/sqrt(pi), the dual lattice becomes the
// integer vectors passing a parity test per stabilizer, so decoding splits
// into rounding every coordinate to the nearest integer and then repairing
// the failed parities by re-rounding a minimum-cost set of coordinates the
// other way. Because every coordinate of a surface code feeds at most two
// checks, the repair step is a minimum T-join, solved exactly by blossom
// matching over the highlighted checks in polynomial time.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gkp/code.hpp"
#include "gkp/codes.hpp"
#include "gkp/core.hpp"
#include "gkp/cvp.hpp"
#include "gkp/matching.hpp"
#include "gkp/stabilizer.hpp"
#include "gkp/structured.hpp"

namespace gkp {

struct MatchingEdge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
  int qubit_index = -1;  // coordinate of t' whose re-rounding realizes the edge
};

// Check graph over one coordinate subspace (positions or momenta). Vertices
// are the stabilizers whose parity masks live in that subspace, plus one
// boundary vertex when some coordinate toggles a single check only.
struct MatchingGraph {
  std::vector<int> stabilizer_index;  // vertex id -> index into stabilizer_binaries
  int boundary_vertex = -1;           // vertex id (== check count) or -1
  std::vector<MatchingEdge> edges;
  std::vector<int> highlight;  // ascending vertex ids; even size
  int vertex_count() const {
    return static_cast<int>(stabilizer_index.size()) + (boundary_vertex >= 0 ? 1 : 0);
  }
};

// Matching outcome: the nearest integer per coordinate of t', plus the
// coordinates that must round to the second-nearest integer instead.
// Applying the flips lands on a point passing every stabilizer parity test.
struct RoundingPlan {
  std::vector<long long> rounded;
  std::vector<int> flips;  // ascending coordinate indices; each flip moves by +-1
};

namespace detail {

// Coordinates of t' whose integer parts feed the parity test of stabilizer
// binary g. A q-quadrature entry constrains the partner p-coordinate and
// vice versa, by the symplectic pairing.
inline std::vector<int> parity_mask(const BinaryVec& g) {
  std::vector<int> mask;
  for (std::size_t j = 0; 2 * j + 1 < g.size(); ++j) {
    if (g[2 * j + 1]) mask.push_back(static_cast<int>(2 * j));
    if (g[2 * j]) mask.push_back(static_cast<int>(2 * j + 1));
  }
  return mask;
}

struct CheckSkeleton {
  std::vector<int> stabilizer_index;
  std::vector<std::vector<int>> vertex_mask;  // per vertex, ascending coordinates
  // Coordinates toggling exactly one pair of checks, grouped per pair.
  std::vector<std::pair<std::pair<int, int>, std::vector<int>>> pair_groups;
  // Coordinates toggling a single check, grouped per check.
  std::vector<std::pair<int, std::vector<int>>> boundary_groups;
};

struct SurfaceSkeletons {
  int dim = 0;
  std::array<CheckSkeleton, 2> graphs;  // [0]: q-coordinate checks, [1]: p
};

inline SurfaceSkeletons build_skeletons(const QubitStabilizerCode& sc) {
  SurfaceSkeletons sk;
  sk.dim = 2 * sc.n_qubits;
  std::vector<std::vector<int>> toggles(sk.dim);
  for (std::size_t i = 0; i < sc.stabilizer_binaries.size(); ++i) {
    std::vector<int> mask = parity_mask(sc.stabilizer_binaries[i]);
    if (mask.empty())
      throw std::invalid_argument("decoder inapplicable: stabilizer with empty support");
    bool all_q = true;
    bool all_p = true;
    for (int c : mask) (c % 2 == 0 ? all_p : all_q) = false;
    if (!all_q && !all_p)
      throw std::invalid_argument(
          "decoder inapplicable: a stabilizer constrains both position and "
          "momentum coordinates");
    CheckSkeleton& g = sk.graphs[all_q ? 0 : 1];
    const int vertex = static_cast<int>(g.stabilizer_index.size());
    for (int c : mask) toggles[c].push_back(vertex);
    g.stabilizer_index.push_back(static_cast<int>(i));
    g.vertex_mask.push_back(std::move(mask));
  }
  std::array<std::map<std::pair<int, int>, std::vector<int>>, 2> pairs;
  std::array<std::map<int, std::vector<int>>, 2> singles;
  for (int c = 0; c < sk.dim; ++c) {
    const std::vector<int>& tg = toggles[c];
    const int side = (c % 2 == 0) ? 0 : 1;
    if (tg.size() > 2)
      throw std::invalid_argument(
          "decoder inapplicable: a coordinate shift flips more than two checks");
    if (tg.size() == 2) {
      pairs[side][{std::min(tg[0], tg[1]), std::max(tg[0], tg[1])}].push_back(c);
    } else if (tg.size() == 1) {
      singles[side][tg[0]].push_back(c);
    }
  }
  for (int side = 0; side < 2; ++side) {
    for (auto& kv : pairs[side])
      sk.graphs[side].pair_groups.emplace_back(kv.first, std::move(kv.second));
    for (auto& kv : singles[side])
      sk.graphs[side].boundary_groups.emplace_back(kv.first, std::move(kv.second));
  }
  return sk;
}

inline std::vector<long long> nearest_integers(const Vec& t_prime) {
  std::vector<long long> r(t_prime.size());
  for (int k = 0; k < t_prime.size(); ++k)
    r[k] = std::llround(round_tie_small(t_prime[k]));
  return r;
}

// Extra squared distance paid for rounding coordinate k the wrong way.
inline std::vector<double> closest_point_costs(const Vec& t_prime,
                                               const std::vector<long long>& rounded) {
  std::vector<double> cost(t_prime.size());
  for (int k = 0; k < t_prime.size(); ++k) {
    const double r = static_cast<double>(rounded[k]);
    const double w = round_wrong_way(t_prime[k]);
    cost[k] = (w - t_prime[k]) * (w - t_prime[k]) - (r - t_prime[k]) * (r - t_prime[k]);
  }
  return cost;
}

// Log-likelihood-ratio cost of re-rounding coordinate k: the residual is a
// sigma-Gaussian wrapped onto sqrt(pi)Z, so p_k sums the odd-offset images
// against all images within four periods. Exponents are normalized by the
// smallest one so the ratio survives tiny sigma.
inline std::vector<double> loglikelihood_costs(const Vec& t_prime,
                                               const std::vector<long long>& rounded,
                                               double sigma) {
  std::vector<double> cost(t_prime.size());
  const double scale = kPi / (2.0 * sigma * sigma);
  for (int k = 0; k < t_prime.size(); ++k) {
    const double f = t_prime[k] - static_cast<double>(rounded[k]);
    double e_min = std::numeric_limits<double>::infinity();
    std::array<double, 9> e{};
    for (int m = -4; m <= 4; ++m) {
      e[m + 4] = scale * (f + m) * (f + m);
      e_min = std::min(e_min, e[m + 4]);
    }
    double odd = 0.0;
    double all = 0.0;
    for (int m = -4; m <= 4; ++m) {
      const double term = std::exp(e_min - e[m + 4]);
      all += term;
      if (m % 2 != 0) odd += term;
    }
    const double p = std::clamp(odd / all, 1e-290, 0.5);
    cost[k] = std::log((1.0 - p) / p);
  }
  return cost;
}

inline MatchingGraph instantiate_graph(const CheckSkeleton& sk,
                                       const std::vector<long long>& rounded,
                                       const std::vector<double>& cost) {
  MatchingGraph g;
  g.stabilizer_index = sk.stabilizer_index;
  const int n_checks = static_cast<int>(sk.stabilizer_index.size());
  g.boundary_vertex = sk.boundary_groups.empty() ? -1 : n_checks;
  for (const auto& [uv, coords] : sk.pair_groups) {
    int best = coords.front();
    for (int c : coords)
      if (cost[c] < cost[best]) best = c;
    g.edges.push_back({uv.first, uv.second, cost[best], best});
  }
  for (const auto& [u, coords] : sk.boundary_groups) {
    int best = coords.front();
    for (int c : coords)
      if (cost[c] < cost[best]) best = c;
    g.edges.push_back({u, g.boundary_vertex, cost[best], best});
  }
  for (int v = 0; v < n_checks; ++v) {
    long long parity = 0;
    for (int c : sk.vertex_mask[v]) parity += rounded[c];
    if (parity & 1LL) g.highlight.push_back(v);
  }
  if (g.highlight.size() % 2 != 0) {
    if (g.boundary_vertex < 0)
      throw std::logic_error("odd overall check parity without a boundary");
    g.highlight.push_back(g.boundary_vertex);
  }
  return g;
}

}  // namespace detail

// Minimum T-join over the highlighted vertices: returns ascending indices
// into graph.edges whose union of flips repairs every highlighted parity.
// Pairs of highlights are matched along shortest paths (blossom matching on
// the path-length graph); unmatched parity escapes through the boundary
// vertex, whose own parity is unconstrained. Throws when the highlights
// cannot be paired within their connected components.
inline std::vector<int> mwpm(const MatchingGraph& graph) {
  const int nv = graph.vertex_count();
  for (std::size_t i = 0; i < graph.highlight.size(); ++i) {
    const int h = graph.highlight[i];
    if (h < 0 || h >= nv) throw std::invalid_argument("highlighted vertex out of range");
    if (i > 0 && graph.highlight[i - 1] >= h)
      throw std::invalid_argument("highlight list must be strictly increasing");
  }
  if (graph.highlight.size() % 2 != 0)
    throw std::invalid_argument("mwpm needs an even number of highlighted vertices");
  if (graph.highlight.empty()) return {};

  // Integer weights keep the blossom duals exact; the quantization error is
  // below 1e-12 per edge, far inside the decoder's tie tolerance.
  constexpr double kScale = static_cast<double>(1LL << 40);
  constexpr double kMaxWeight = 1.0e6;
  const int ne = static_cast<int>(graph.edges.size());
  std::vector<long long> wi(ne, 0);
  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (neighbor, edge id)
  for (int e = 0; e < ne; ++e) {
    const MatchingEdge& ed = graph.edges[e];
    if (ed.u < 0 || ed.u >= nv || ed.v < 0 || ed.v >= nv)
      throw std::invalid_argument("matching edge endpoint out of range");
    if (!std::isfinite(ed.weight) || ed.weight < -1e-9 || ed.weight > kMaxWeight)
      throw std::invalid_argument("matching edge weight out of range");
    wi[e] = std::max(0LL, std::llround(ed.weight * kScale));
    if (ed.u == ed.v) continue;  // a self loop never shortens a repair path
    adj[ed.u].push_back({ed.v, e});
    adj[ed.v].push_back({ed.u, e});
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<int> comp(nv, -1);
  int n_comp = 0;
  for (int s = 0; s < nv; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = n_comp;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (auto [v, e] : adj[u])
        if (comp[v] < 0) {
          comp[v] = n_comp;
          stack.push_back(v);
        }
    }
    ++n_comp;
  }
  std::vector<int> comp_high(n_comp, 0);
  for (int h : graph.highlight) ++comp_high[comp[h]];
  for (int c = 0; c < n_comp; ++c)
    if (comp_high[c] % 2 != 0)
      throw std::runtime_error("no perfect matching exists over the highlighted vertices");

  std::vector<int> reals;
  for (int h : graph.highlight)
    if (h != graph.boundary_vertex) reals.push_back(h);

  const long long kUnreached = std::numeric_limits<long long>::max() / 4;
  const int nr = static_cast<int>(reals.size());
  std::vector<std::vector<long long>> dist(nr, std::vector<long long>(nv, kUnreached));
  std::vector<std::vector<int>> pred(nr, std::vector<int>(nv, -1));
  for (int si = 0; si < nr; ++si) {
    auto& d = dist[si];
    auto& pe = pred[si];
    std::priority_queue<std::pair<long long, int>, std::vector<std::pair<long long, int>>,
                        std::greater<>>
        pq;
    d[reals[si]] = 0;
    pq.push({0, reals[si]});
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (du != d[u]) continue;
      for (auto [v, e] : adj[u]) {
        const long long nd = du + wi[e];
        if (nd < d[v]) {
          d[v] = nd;
          pe[v] = e;
          pq.push({nd, v});
        }
      }
    }
  }

  std::vector<char> flip(ne, 0);
  const auto xor_path = [&](int slot, int target) {
    const int src = reals[slot];
    int v = target;
    while (v != src) {
      const int e = pred[slot][v];
      if (e < 0) throw std::logic_error("matched pair has no connecting path");
      flip[e] ^= 1;
      v = (graph.edges[e].u == v) ? graph.edges[e].v : graph.edges[e].u;
    }
  };

  for (int ci = 0; ci < n_comp; ++ci) {
    std::vector<int> local;
    for (int si = 0; si < nr; ++si)
      if (comp[reals[si]] == ci) local.push_back(si);
    if (local.empty()) continue;
    const int m = static_cast<int>(local.size());
    const bool has_b = graph.boundary_vertex >= 0 && comp[graph.boundary_vertex] == ci;
    // Each real check gets a virtual partner when a boundary is reachable:
    // matching a check to any virtual routes its parity into the boundary,
    // and virtual-virtual pairs cost nothing, so the boundary absorbs any
    // even surplus and exactly the forced odd one.
    const int nn = has_b ? 2 * m : m;
    std::vector<std::vector<long long>> w(nn, std::vector<long long>(nn, 0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (i == j) continue;
        const long long d = dist[local[i]][reals[local[j]]];
        if (d >= kUnreached) throw std::logic_error("pair distance missing inside component");
        w[i][j] = d;
      }
    if (has_b) {
      for (int i = 0; i < m; ++i) {
        const long long b = dist[local[i]][graph.boundary_vertex];
        if (b >= kUnreached) throw std::logic_error("boundary distance missing inside component");
        for (int j = 0; j < m; ++j) w[i][m + j] = w[m + j][i] = b;
      }
    }
    const std::vector<int> mate = min_weight_perfect_matching(w);
    for (int i = 0; i < m; ++i) {
      const int j = mate[i];
      if (j < m) {
        if (j > i) xor_path(local[i], reals[local[j]]);
      } else {
        xor_path(local[i], graph.boundary_vertex);
      }
    }
  }

  std::vector<int> out;
  for (int e = 0; e < ne; ++e)
    if (flip[e]) out.push_back(e);
  return out;
}

// Exact closest-point decoder for the scaled dual lattice of a surface-code
// GKP construction. Builds the check graphs and the dual-basis solve once;
// each decode costs one matching plus an O(dim^2) coefficient solve.
class SurfaceMwpmDecoder {
 public:
  explicit SurfaceMwpmDecoder(const QubitStabilizerCode& sc)
      : sk_(detail::build_skeletons(sc)),
        code_(construction_a(sc), Ordering::qpqp),
        dual_basis_(kSqrt2Pi * dual_generator(code_).m_perp) {
    lu_.compute(dual_basis_.transpose());
  }

  const GkpCode& code() const { return code_; }
  // Rows generate the decoded lattice; point = dual_basis().transpose() * coeffs.
  const Mat& dual_basis() const { return dual_basis_; }

  std::pair<MatchingGraph, MatchingGraph> graphs(const Vec& t_prime) const {
    check_target(t_prime);
    const std::vector<long long> rounded = detail::nearest_integers(t_prime);
    const std::vector<double> cost = detail::closest_point_costs(t_prime, rounded);
    return {detail::instantiate_graph(sk_.graphs[0], rounded, cost),
            detail::instantiate_graph(sk_.graphs[1], rounded, cost)};
  }

  RoundingPlan plan(const Vec& t_prime) const {
    check_target(t_prime);
    const std::vector<long long> rounded = detail::nearest_integers(t_prime);
    return make_plan(rounded, detail::closest_point_costs(t_prime, rounded));
  }

  RoundingPlan plan_loglikelihood(const Vec& t_prime, double sigma) const {
    check_target(t_prime);
    if (!std::isfinite(sigma) || sigma <= 0.0)
      throw std::invalid_argument("noise strength must be positive");
    const std::vector<long long> rounded = detail::nearest_integers(t_prime);
    return make_plan(rounded, detail::loglikelihood_costs(t_prime, rounded, sigma));
  }

  ClosestPointResult decode(const Vec& t) const {
    check_target(t);
    const Vec t_prime = t / kSqrtPi;
    return finish(t, t_prime, plan(t_prime));
  }

  ClosestPointResult decode_loglikelihood(const Vec& t, double sigma) const {
    check_target(t);
    const Vec t_prime = t / kSqrtPi;
    return finish(t, t_prime, plan_loglikelihood(t_prime, sigma));
  }

 private:
  void check_target(const Vec& t) const {
    detail::check_finite(t);
    if (static_cast<int>(t.size()) != sk_.dim)
      throw std::invalid_argument("target dimension does not match the code");
  }

  RoundingPlan make_plan(const std::vector<long long>& rounded,
                         const std::vector<double>& cost) const {
    RoundingPlan plan{rounded, {}};
    for (const detail::CheckSkeleton& side : sk_.graphs) {
      const MatchingGraph g = detail::instantiate_graph(side, rounded, cost);
      for (int e : mwpm(g)) plan.flips.push_back(g.edges[e].qubit_index);
    }
    std::sort(plan.flips.begin(), plan.flips.end());
    return plan;
  }

  ClosestPointResult finish(const Vec& t, const Vec& t_prime, const RoundingPlan& plan) const {
    Vec chi(sk_.dim);
    for (int k = 0; k < sk_.dim; ++k) chi[k] = static_cast<double>(plan.rounded[k]);
    for (int k : plan.flips) chi[k] = detail::round_wrong_way(t_prime[k]);
    ClosestPointResult res;
    res.point = kSqrtPi * chi;
    const Vec c_real = lu_.solve(res.point);
    res.coeffs = LVec(sk_.dim);
    for (int i = 0; i < sk_.dim; ++i) {
      res.coeffs[i] = std::llround(c_real[i]);
      if (std::abs(c_real[i] - static_cast<double>(res.coeffs[i])) > 1e-6)
        throw std::logic_error("matched point left the scaled dual lattice");
    }
    res.dist = (t - res.point).norm();
    return res;
  }

  detail::SurfaceSkeletons sk_;
  GkpCode code_;
  Mat dual_basis_;
  Eigen::PartialPivLU<Mat> lu_;
};

// Check graphs for the scaled target t' = t / sqrt(pi): one over the
// position coordinates, one over the momenta. Edge weights are the extra
// squared distance of the cheapest wrong-way rounding shared by the two
// endpoint checks; highlighted vertices are the checks whose parity test
// fails on the componentwise nearest integers.
inline std::pair<MatchingGraph, MatchingGraph> build_matching_graphs(
    const QubitStabilizerCode& sc, const Vec& t_prime) {
  return SurfaceMwpmDecoder(sc).graphs(t_prime);
}

inline RoundingPlan surface_rounding_plan(const QubitStabilizerCode& sc, const Vec& t_prime) {
  return SurfaceMwpmDecoder(sc).plan(t_prime);
}

// Exact closest point of the surface-code GKP dual lattice, in the same
// result format as the sphere decoder but at polynomial cost.
inline ClosestPointResult decode_surface_gkp(const QubitStabilizerCode& sc, const Vec& t) {
  return SurfaceMwpmDecoder(sc).decode(t);
}

// Variant weighting each re-rounding by its log-likelihood ratio under
// Gaussian shifts of strength sigma instead of by squared distance.
inline ClosestPointResult decode_surface_loglikelihood(const QubitStabilizerCode& sc,
                                                       const Vec& t, double sigma) {
  return SurfaceMwpmDecoder(sc).decode_loglikelihood(t, sigma);
}

// chi' for a plan: the nearest integers with the flipped coordinates moved
// to the second-nearest integer of t'.
inline Vec apply_rounding_plan(const RoundingPlan& plan, const Vec& t_prime) {
  const int dim = static_cast<int>(plan.rounded.size());
  if (static_cast<int>(t_prime.size()) != dim)
    throw std::invalid_argument("plan and target dimensions differ");
  Vec chi(dim);
  for (int k = 0; k < dim; ++k) chi[k] = static_cast<double>(plan.rounded[k]);
  for (int k : plan.flips) {
    if (k < 0 || k >= dim) throw std::invalid_argument("flip coordinate out of range");
    chi[k] = detail::round_wrong_way(t_prime[k]);
  }
  return chi;
}

}  // namespace gkp
