#pragma once

// Exact minimum-weight perfect matching on dense graphs via the primal-dual
// blossom method. Weights are 64-bit integers; the solver maintains integer
// duals throughout, so the optimum is exact. Used by the surface-code
// decoder, which feeds it complete graphs over the highlighted checks.

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <vector>

namespace gkp {

namespace detail {

// Primal-dual maximum-weight matching (Galil's formulation) on a complete
// graph, 1-indexed internally; id 0 is the null sentinel. Blossoms occupy
// ids n+1..2n; st maps every id to its top-level node, flower lists a
// blossom's children in cyclic order starting at the base, and flower_from
// records which child contains a given real vertex. Duals move by integer
// deltas, slack bookkeeping keeps each phase O(n^2).
class MaxWeightMatching {
 public:
  explicit MaxWeightMatching(const std::vector<std::vector<long long>>& w)
      : n_(static_cast<int>(w.size())) {
    const int cap = 2 * n_ + 1;
    g_.assign(cap, std::vector<E>(cap));
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v) g_[u][v] = {u, v, w[u - 1][v - 1]};
    lab_.assign(cap, 0);
    match_.assign(cap, 0);
    slack_.assign(cap, 0);
    st_.assign(cap, 0);
    pa_.assign(cap, 0);
    s_.assign(cap, -1);
    vis_.assign(cap, 0);
    flower_.assign(cap, {});
    flower_from_.assign(cap, std::vector<int>(n_ + 1, 0));
  }

  // Runs the matching; returns 1-based mates (0 = unmatched).
  std::vector<int> solve() {
    n_x_ = n_;
    for (int u = 0; u <= n_; ++u) st_[u] = u;
    long long w_max = 0;
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v) {
        flower_from_[u][v] = (u == v ? u : 0);
        w_max = std::max(w_max, g_[u][v].w);
      }
    for (int u = 1; u <= n_; ++u) lab_[u] = w_max;
    while (matching()) {
    }
    return {match_.begin(), match_.begin() + n_ + 1};
  }

 private:
  struct E {
    int u = 0, v = 0;
    long long w = 0;
  };

  long long e_delta(const E& e) const { return lab_[e.u] + lab_[e.v] - g_[e.u][e.v].w * 2; }

  void update_slack(int u, int x) {
    if (!slack_[x] || e_delta(g_[u][x]) < e_delta(g_[slack_[x]][x])) slack_[x] = u;
  }

  void set_slack(int x) {
    slack_[x] = 0;
    for (int u = 1; u <= n_; ++u)
      if (g_[u][x].w > 0 && st_[u] != x && s_[st_[u]] == 0) update_slack(u, x);
  }

  void q_push(int x) {
    if (x <= n_) {
      q_.push_back(x);
    } else {
      for (int y : flower_[x]) q_push(y);
    }
  }

  void set_st(int x, int b) {
    st_[x] = b;
    if (x > n_)
      for (int y : flower_[x]) set_st(y, b);
  }

  // Position of child xr inside blossom b; reverses the cycle (base fixed)
  // when the position is odd so the even alternating segment leads to xr.
  int get_pr(int b, int xr) {
    auto& f = flower_[b];
    const int pr = static_cast<int>(std::find(f.begin(), f.end(), xr) - f.begin());
    if (pr % 2 == 1) {
      std::reverse(f.begin() + 1, f.end());
      return static_cast<int>(f.size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match_[u] = g_[u][v].v;
    if (u <= n_) return;
    const E e = g_[u][v];
    const int xr = flower_from_[u][e.u];
    const int pr = get_pr(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
  }

  void augment(int u, int v) {
    for (;;) {
      const int xnv = st_[match_[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st_[pa_[xnv]]);
      u = st_[pa_[xnv]];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++vis_stamp_; u || v; std::swap(u, v)) {
      if (u == 0) continue;
      if (vis_[u] == vis_stamp_) return u;
      vis_[u] = vis_stamp_;
      u = st_[match_[u]];
      if (u) u = st_[pa_[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= n_x_ && st_[b]) ++b;
    if (b > n_x_) ++n_x_;
    lab_[b] = 0;
    s_[b] = 0;
    match_[b] = match_[lca];
    flower_[b].clear();
    flower_[b].push_back(lca);
    for (int x = u, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      flower_[b].push_back(y = st_[match_[x]]);
      q_push(y);
    }
    std::reverse(flower_[b].begin() + 1, flower_[b].end());
    for (int x = v, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      flower_[b].push_back(y = st_[match_[x]]);
      q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x_; ++x) g_[b][x].w = g_[x][b].w = 0;
    for (int x = 1; x <= n_; ++x) flower_from_[b][x] = 0;
    for (int xs : flower_[b]) {
      for (int x = 1; x <= n_x_; ++x)
        if (g_[b][x].w == 0 || e_delta(g_[xs][x]) < e_delta(g_[b][x])) {
          g_[b][x] = g_[xs][x];
          g_[x][b] = g_[x][xs];
        }
      for (int x = 1; x <= n_; ++x)
        if (flower_from_[xs][x]) flower_from_[b][x] = xs;
    }
    set_slack(b);
  }

  void expand_blossom(int b) {
    for (int y : flower_[b]) set_st(y, y);
    const int xr = flower_from_[b][g_[b][pa_[b]].u];
    const int pr = get_pr(b, xr);
    for (int i = 0; i < pr; i += 2) {
      const int xs = flower_[b][i];
      const int xns = flower_[b][i + 1];
      pa_[xs] = g_[xns][xs].u;
      s_[xs] = 1;
      s_[xns] = 0;
      slack_[xs] = 0;
      set_slack(xns);
      q_push(xns);
    }
    s_[xr] = 1;
    pa_[xr] = pa_[b];
    for (std::size_t i = pr + 1; i < flower_[b].size(); ++i) {
      const int xs = flower_[b][i];
      s_[xs] = -1;
      set_slack(xs);
    }
    st_[b] = 0;
  }

  bool on_found_edge(const E& e) {
    const int u = st_[e.u];
    const int v = st_[e.v];
    if (s_[v] == -1) {
      pa_[v] = e.u;
      s_[v] = 1;
      const int nu = st_[match_[v]];
      slack_[v] = slack_[nu] = 0;
      s_[nu] = 0;
      q_push(nu);
    } else if (s_[v] == 0) {
      const int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }

  bool matching() {
    std::fill(s_.begin(), s_.begin() + n_x_ + 1, -1);
    std::fill(slack_.begin(), slack_.begin() + n_x_ + 1, 0);
    q_.clear();
    for (int x = 1; x <= n_x_; ++x)
      if (st_[x] == x && !match_[x]) {
        pa_[x] = 0;
        s_[x] = 0;
        q_push(x);
      }
    if (q_.empty()) return false;
    for (;;) {
      while (!q_.empty()) {
        const int u = q_.front();
        q_.pop_front();
        if (s_[st_[u]] == 1) continue;
        for (int v = 1; v <= n_; ++v)
          if (g_[u][v].w > 0 && st_[u] != st_[v]) {
            if (e_delta(g_[u][v]) == 0) {
              if (on_found_edge(g_[u][v])) return true;
            } else {
              update_slack(u, st_[v]);
            }
          }
      }
      long long d = kInf;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1) d = std::min(d, lab_[b] / 2);
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x]) {
          if (s_[x] == -1)
            d = std::min(d, e_delta(g_[slack_[x]][x]));
          else if (s_[x] == 0)
            d = std::min(d, e_delta(g_[slack_[x]][x]) / 2);
        }
      for (int u = 1; u <= n_; ++u) {
        if (s_[st_[u]] == 0) {
          if (lab_[u] <= d) return false;
          lab_[u] -= d;
        } else if (s_[st_[u]] == 1) {
          lab_[u] += d;
        }
      }
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b) {
          if (s_[b] == 0)
            lab_[b] += d * 2;
          else if (s_[b] == 1)
            lab_[b] -= d * 2;
        }
      q_.clear();
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
            e_delta(g_[slack_[x]][x]) == 0)
          if (on_found_edge(g_[slack_[x]][x])) return true;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1 && lab_[b] == 0) expand_blossom(b);
    }
  }

  static constexpr long long kInf = (1LL << 62);

  int n_ = 0;
  int n_x_ = 0;
  int vis_stamp_ = 0;
  std::vector<std::vector<E>> g_;
  std::vector<long long> lab_;
  std::vector<int> match_, slack_, st_, pa_, s_, vis_;
  std::vector<std::vector<int>> flower_;
  std::vector<std::vector<int>> flower_from_;
  std::deque<int> q_;
};

}  // namespace detail

// Exact minimum-weight perfect matching on the complete graph given by a
// symmetric nonnegative weight matrix with an even number of vertices.
// Returns mate[i] (0-based). Solved as maximum-weight matching after the
// reflection w -> max(w)+1-w, which makes every weight positive, so on a
// complete graph the maximum-weight matching is perfect.
inline std::vector<int> min_weight_perfect_matching(
    const std::vector<std::vector<long long>>& w) {
  const int n = static_cast<int>(w.size());
  if (n == 0) return {};
  if (n % 2 != 0)
    throw std::invalid_argument("perfect matching needs an even vertex count");
  long long w_max = 0;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(w[i].size()) != n)
      throw std::invalid_argument("weight matrix must be square");
    for (int j = 0; j < n; ++j) {
      if (w[i][j] < 0) throw std::invalid_argument("matching weights must be nonnegative");
      if (w[i][j] != w[j][i])
        throw std::invalid_argument("weight matrix must be symmetric");
      w_max = std::max(w_max, w[i][j]);
    }
  }
  std::vector<std::vector<long long>> flipped(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) flipped[i][j] = w_max + 1 - w[i][j];
  detail::MaxWeightMatching solver(flipped);
  const std::vector<int> mate1 = solver.solve();
  std::vector<int> mate(n, -1);
  for (int i = 1; i <= n; ++i) {
    if (mate1[i] == 0) throw std::logic_error("matching solver left a vertex unmatched");
    mate[i - 1] = mate1[i] - 1;
  }
  return mate;
}

}  // namespace gkp
