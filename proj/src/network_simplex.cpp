#include "gpm/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gpm {

std::size_t MinCostFlow::add_arc(std::size_t from, std::size_t to, double cost) {
  if (from >= n_nodes() || to >= n_nodes()) throw std::out_of_range("arc endpoint out of range");
  if (!std::isfinite(cost)) throw std::invalid_argument("arc cost must be finite");
  from_.push_back(from);
  to_.push_back(to);
  cost_.push_back(cost);
  return from_.size() - 1;
}

namespace {

constexpr int kStateTree = 0;
constexpr int kStateLower = 1;
constexpr int kDirUp = 1;    // tree arc points from the node to its parent
constexpr int kDirDown = -1;  // tree arc points from the parent to the node

// Spanning-tree workspace; the tree is stored with parent, thread (preorder) and
// subtree-size indices so that pivots update it in time proportional to the moved subtree.
struct Workspace {
  int node_num = 0, arc_num = 0, root = 0;
  std::vector<int> source, target, state;
  std::vector<double> cost, flow;
  std::vector<double> pi;
  std::vector<int> parent, pred, thread, rev_thread, succ_num, last_succ, pred_dir;
  std::vector<int> dirty_revs;
  int in_arc = -1, join = -1, u_in = -1, v_in = -1, u_out = -1, v_out = -1;
  int first = -1, second = -1;
  double delta = 0.0;
  int next_arc = 0, block_size = 10;
  double tolerance = 0.0;

  bool find_entering_arc() {
    double min = -tolerance;
    int cnt = block_size;
    int e;
    int best = -1;
    for (e = next_arc; e != arc_num; ++e) {
      double c = state[e] * (cost[e] + pi[source[e]] - pi[target[e]]);
      if (c < min) {
        min = c;
        best = e;
      }
      if (--cnt == 0) {
        if (best >= 0) goto found;
        cnt = block_size;
      }
    }
    for (e = 0; e != next_arc; ++e) {
      double c = state[e] * (cost[e] + pi[source[e]] - pi[target[e]]);
      if (c < min) {
        min = c;
        best = e;
      }
      if (--cnt == 0) {
        if (best >= 0) goto found;
        cnt = block_size;
      }
    }
    if (best < 0) return false;
  found:
    in_arc = best;
    next_arc = e == arc_num ? 0 : e;
    return true;
  }

  void find_join_node() {
    int u = source[in_arc], v = target[in_arc];
    while (u != v) {
      if (succ_num[u] < succ_num[v]) u = parent[u];
      else v = parent[v];
    }
    join = u;
  }

  bool find_leaving_arc() {
    first = source[in_arc];
    second = target[in_arc];
    delta = std::numeric_limits<double>::infinity();
    int result = 0;
    for (int u = first; u != join; u = parent[u]) {
      if (pred_dir[u] == kDirUp && flow[pred[u]] < delta) {
        delta = flow[pred[u]];
        u_out = u;
        result = 1;
      }
    }
    for (int u = second; u != join; u = parent[u]) {
      if (pred_dir[u] == kDirDown && flow[pred[u]] <= delta) {
        delta = flow[pred[u]];
        u_out = u;
        result = 2;
      }
    }
    if (result == 1) {
      u_in = first;
      v_in = second;
    } else {
      u_in = second;
      v_in = first;
    }
    return result != 0;
  }

  void change_flow() {
    if (delta > 0) {
      flow[in_arc] += delta;
      for (int u = source[in_arc]; u != join; u = parent[u]) flow[pred[u]] -= pred_dir[u] * delta;
      for (int u = target[in_arc]; u != join; u = parent[u]) flow[pred[u]] += pred_dir[u] * delta;
    }
    state[in_arc] = kStateTree;
    flow[pred[u_out]] = 0.0;
    state[pred[u_out]] = kStateLower;
  }

  void update_tree_structure() {
    int old_rev_thread = rev_thread[u_out];
    int old_succ_num = succ_num[u_out];
    int old_last_succ = last_succ[u_out];
    v_out = parent[u_out];

    if (u_in == u_out) {
      parent[u_in] = v_in;
      pred[u_in] = in_arc;
      pred_dir[u_in] = u_in == source[in_arc] ? kDirUp : kDirDown;
      if (thread[v_in] != u_out) {
        int after = thread[old_last_succ];
        thread[old_rev_thread] = after;
        rev_thread[after] = old_rev_thread;
        after = thread[v_in];
        thread[v_in] = u_out;
        rev_thread[u_out] = v_in;
        thread[old_last_succ] = after;
        rev_thread[after] = old_last_succ;
      }
    } else {
      int thread_continue = old_rev_thread == v_in ? thread[old_last_succ] : thread[v_in];
      // Re-hang the stem from u_in up to u_out below v_in, reversing parent links.
      int stem = u_in;
      int par_stem = v_in;
      int next_stem;
      int last = last_succ[u_in];
      int before, after = thread[last];
      thread[v_in] = u_in;
      dirty_revs.clear();
      dirty_revs.push_back(v_in);
      while (stem != u_out) {
        next_stem = parent[stem];
        thread[last] = next_stem;
        dirty_revs.push_back(last);
        before = rev_thread[stem];
        thread[before] = after;
        rev_thread[after] = before;
        parent[stem] = par_stem;
        par_stem = stem;
        stem = next_stem;
        last = last_succ[stem] == last_succ[par_stem] ? rev_thread[par_stem] : last_succ[stem];
        after = thread[last];
      }
      parent[u_out] = par_stem;
      thread[last] = thread_continue;
      rev_thread[thread_continue] = last;
      last_succ[u_out] = last;

      if (old_rev_thread != v_in) {
        thread[old_rev_thread] = after;
        rev_thread[after] = old_rev_thread;
      }
      for (int u : dirty_revs) rev_thread[thread[u]] = u;

      int tmp_sc = 0, tmp_ls = last_succ[u_out];
      for (int u = u_out, p = parent[u]; u != u_in; u = p, p = parent[u]) {
        pred[u] = pred[p];
        pred_dir[u] = -pred_dir[p];
        tmp_sc += succ_num[u] - succ_num[p];
        succ_num[u] = tmp_sc;
        last_succ[p] = tmp_ls;
      }
      pred[u_in] = in_arc;
      pred_dir[u_in] = u_in == source[in_arc] ? kDirUp : kDirDown;
      succ_num[u_in] = old_succ_num;
    }

    int up_limit_out = last_succ[join] == v_in ? join : -1;
    int last_succ_out = last_succ[u_out];
    for (int u = v_in; u != -1 && last_succ[u] == v_in; u = parent[u]) last_succ[u] = last_succ_out;

    if (join != old_rev_thread && v_in != old_rev_thread) {
      for (int u = v_out; u != up_limit_out && last_succ[u] == old_last_succ; u = parent[u])
        last_succ[u] = old_rev_thread;
    } else if (last_succ_out != old_last_succ) {
      for (int u = v_out; u != up_limit_out && last_succ[u] == old_last_succ; u = parent[u])
        last_succ[u] = last_succ_out;
    }

    for (int u = v_in; u != join; u = parent[u]) succ_num[u] += old_succ_num;
    for (int u = v_out; u != join; u = parent[u]) succ_num[u] -= old_succ_num;
  }

  void update_potential() {
    double sigma = pi[v_in] - pi[u_in] - pred_dir[u_in] * cost[in_arc];
    int end = thread[last_succ[u_in]];
    for (int u = u_in; u != end; u = thread[u]) pi[u] += sigma;
  }
};

}  // namespace

MinCostFlow::Result MinCostFlow::solve() const {
  Workspace w;
  w.node_num = static_cast<int>(n_nodes());
  w.arc_num = static_cast<int>(n_arcs());
  const int n = w.node_num, m = w.arc_num;
  if (n == 0) return {};
  w.root = n;
  const int all_arcs = m + n;

  std::vector<double> supply(supply_);
  double sum = 0.0, scale = 0.0;
  for (double b : supply) {
    if (!std::isfinite(b)) throw std::invalid_argument("min-cost flow: non-finite supply");
    sum += b;
    scale += std::abs(b);
  }
  if (std::abs(sum) > 1e-9 * std::max(1.0, scale)) throw std::invalid_argument("min-cost flow: supplies do not balance");
  if (sum != 0.0) {
    auto it = std::max_element(supply.begin(), supply.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    *it -= sum;
  }

  w.source.resize(all_arcs);
  w.target.resize(all_arcs);
  w.cost.resize(all_arcs);
  w.flow.assign(all_arcs, 0.0);
  w.state.assign(all_arcs, kStateLower);
  double max_cost = 0.0;
  for (int e = 0; e < m; ++e) {
    w.source[e] = static_cast<int>(from_[e]);
    w.target[e] = static_cast<int>(to_[e]);
    w.cost[e] = cost_[e];
    max_cost = std::max(max_cost, std::abs(cost_[e]));
  }
  const double art_cost = (max_cost + 1.0) * (n + 1);
  w.tolerance = 1e-12 * (1.0 + max_cost);

  w.pi.assign(n + 1, 0.0);
  w.parent.assign(n + 1, -1);
  w.pred.assign(n + 1, -1);
  w.thread.assign(n + 1, 0);
  w.rev_thread.assign(n + 1, 0);
  w.succ_num.assign(n + 1, 1);
  w.last_succ.assign(n + 1, 0);
  w.pred_dir.assign(n + 1, kDirUp);

  w.thread[w.root] = 0;
  w.rev_thread[0] = w.root;
  w.succ_num[w.root] = n + 1;
  w.last_succ[w.root] = w.root - 1;
  for (int u = 0, e = m; u != n; ++u, ++e) {
    w.parent[u] = w.root;
    w.pred[u] = e;
    w.thread[u] = u + 1;
    w.rev_thread[u + 1] = u;
    w.succ_num[u] = 1;
    w.last_succ[u] = u;
    w.state[e] = kStateTree;
    if (supply[u] >= 0) {
      w.pred_dir[u] = kDirUp;
      w.pi[u] = 0;
      w.source[e] = u;
      w.target[e] = w.root;
      w.flow[e] = supply[u];
      w.cost[e] = 0;
    } else {
      w.pred_dir[u] = kDirDown;
      w.pi[u] = art_cost;
      w.source[e] = w.root;
      w.target[e] = u;
      w.flow[e] = -supply[u];
      w.cost[e] = art_cost;
    }
  }
  w.block_size = std::max(10, static_cast<int>(std::sqrt(static_cast<double>(std::max(m, 1)))));

  Result result;
  while (w.find_entering_arc()) {
    w.find_join_node();
    if (!w.find_leaving_arc()) throw std::runtime_error("min-cost flow is unbounded (negative-cost cycle)");
    w.change_flow();
    w.update_tree_structure();
    w.update_potential();
    ++result.pivots;
  }

  double flow_scale = std::max(1.0, scale);
  for (int e = m; e < all_arcs; ++e) {
    if (w.cost[e] > 0 && w.flow[e] > 1e-12 * flow_scale)
      throw std::runtime_error("min-cost flow is infeasible (graph does not connect supply to demand)");
  }
  result.flow.assign(w.flow.begin(), w.flow.begin() + m);
  for (int e = 0; e < m; ++e) result.cost += result.flow[e] * cost_[e];
  result.potential.assign(w.pi.begin(), w.pi.begin() + n);
  return result;
}

}  // namespace gpm
