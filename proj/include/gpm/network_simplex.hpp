#pragma once

#include <cstddef>
#include <vector>

namespace gpm {

// Uncapacitated min-cost flow on a directed graph, solved by the primal network
// simplex method with block-search pivoting. Supplies must sum to zero.
class MinCostFlow {
 public:
  struct Result {
    double cost = 0.0;
    std::vector<double> flow;       // per arc
    std::vector<double> potential;  // dual y with y[to] - y[from] <= cost on every arc
    std::size_t pivots = 0;
  };

  explicit MinCostFlow(std::size_t n_nodes) : supply_(n_nodes, 0.0) {}

  std::size_t add_arc(std::size_t from, std::size_t to, double cost);
  void set_supply(std::size_t node, double supply) { supply_.at(node) = supply; }
  std::size_t n_nodes() const { return supply_.size(); }
  std::size_t n_arcs() const { return from_.size(); }

  // Each call uses its own workspace; the object is not modified.
  Result solve() const;

 private:
  std::vector<double> supply_;
  std::vector<std::size_t> from_, to_;
  std::vector<double> cost_;
};

}  // namespace gpm
