#pragma once

// Exact minimisation of chain energies
//
//   E(x) = sum_j unary(j, x_j) + sum_{j>=1} pairwise(j, x_{j-1}, x_j)
//                              + sum_{j>=2} ternary(j, x_{j-2}, x_{j-1}, x_j)
//
// over labelings x in {0..L-1}^n. Elements are zero-based. The pairwise
// recurrence runs in O(n L^2) time; the ternary one keeps the last two labels
// as state and runs in O(n L^3). Minimisers are recovered from stored argmin
// tables. Ties go to the smallest predecessor label and, at the end, to the
// smallest final state.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace dejitter {

/// Any cost provider with unary and pairwise terms.
template <class C>
concept PairwiseCosts = requires(const C& c, std::size_t j, std::size_t a, std::size_t b) {
  { c.size() } -> std::convertible_to<std::size_t>;
  { c.label_count() } -> std::convertible_to<std::size_t>;
  { c.unary(j, a) } -> std::convertible_to<double>;
  { c.pairwise(j, a, b) } -> std::convertible_to<double>;
};

/// A cost provider that additionally couples three consecutive labels.
template <class C>
concept TernaryCosts = PairwiseCosts<C> && requires(const C& c, std::size_t j, std::size_t a) {
  { c.ternary(j, a, a, a) } -> std::convertible_to<double>;
};

/// Sequence labeling instance backed by type-erased cost callbacks. Missing
/// pairwise or ternary callbacks contribute zero.
class ChainProblem {
 public:
  using Unary = std::function<double(std::size_t j, std::size_t label)>;
  using Pairwise = std::function<double(std::size_t j, std::size_t prev, std::size_t label)>;
  using Ternary =
      std::function<double(std::size_t j, std::size_t prev2, std::size_t prev, std::size_t label)>;

  ChainProblem(std::size_t size, std::size_t label_count, Unary unary, Pairwise pairwise = {},
               Ternary ternary = {});

  std::size_t size() const { return size_; }
  std::size_t label_count() const { return label_count_; }
  bool has_ternary() const { return static_cast<bool>(ternary_); }

  double unary(std::size_t j, std::size_t label) const { return unary_(j, label); }
  double pairwise(std::size_t j, std::size_t prev, std::size_t label) const {
    return pairwise_ ? pairwise_(j, prev, label) : 0.0;
  }
  double ternary(std::size_t j, std::size_t prev2, std::size_t prev, std::size_t label) const {
    return ternary_ ? ternary_(j, prev2, prev, label) : 0.0;
  }

  /// Same costs with the ternary term dropped.
  ChainProblem without_ternary() const { return {size_, label_count_, unary_, pairwise_}; }

 private:
  std::size_t size_;
  std::size_t label_count_;
  Unary unary_;
  Pairwise pairwise_;
  Ternary ternary_;
};

struct ChainSolution {
  std::vector<std::size_t> labels;
  double energy = 0.0;
};

namespace detail {

template <class C>
void check_dimensions(const C& costs) {
  if (costs.size() == 0) throw std::invalid_argument("chain must have at least one element");
  if (costs.label_count() == 0) throw std::invalid_argument("chain must have at least one label");
}

inline std::size_t argmin_first(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] < values[best]) best = k;
  }
  return best;
}

}  // namespace detail

/// Energy of a labeling, accumulated element by element in ascending order.
template <PairwiseCosts C>
double evaluate(const C& costs, std::span<const std::size_t> labels) {
  if (labels.size() != costs.size()) throw std::invalid_argument("labeling length mismatch");
  const std::size_t L = costs.label_count();
  double energy = 0.0;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] >= L) throw std::out_of_range("label index out of range");
    energy += costs.unary(j, labels[j]);
    if (j >= 1) energy += costs.pairwise(j, labels[j - 1], labels[j]);
    if constexpr (TernaryCosts<C>) {
      if (j >= 2) energy += costs.ternary(j, labels[j - 2], labels[j - 1], labels[j]);
    }
  }
  return energy;
}

/// Global minimiser of the unary + pairwise energy.
template <PairwiseCosts C>
ChainSolution solve_chain(const C& costs) {
  detail::check_dimensions(costs);
  if constexpr (std::same_as<C, ChainProblem>) {
    if (costs.has_ternary()) {
      throw std::invalid_argument("problem has ternary terms; use solve_chain_ternary");
    }
  }
  const std::size_t n = costs.size();
  const std::size_t L = costs.label_count();

  std::vector<double> prev(L);
  std::vector<double> cur(L);
  std::vector<std::uint32_t> back((n - 1) * L);
  for (std::size_t l = 0; l < L; ++l) prev[l] = costs.unary(0, l);

  for (std::size_t j = 1; j < n; ++j) {
    auto* back_j = back.data() + (j - 1) * L;
    for (std::size_t l = 0; l < L; ++l) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t a = 0; a < L; ++a) {
        const double v = prev[a] + costs.pairwise(j, a, l);
        if (v < best) {
          best = v;
          arg = a;
        }
      }
      cur[l] = costs.unary(j, l) + best;
      back_j[l] = static_cast<std::uint32_t>(arg);
    }
    prev.swap(cur);
  }

  ChainSolution solution;
  solution.labels.resize(n);
  std::size_t label = detail::argmin_first(prev);
  solution.energy = prev[label];
  for (std::size_t j = n; j-- > 0;) {
    solution.labels[j] = label;
    if (j > 0) label = back[(j - 1) * L + label];
  }
  return solution;
}

/// Global minimiser of the unary + pairwise + ternary energy. For chains
/// shorter than three elements the ternary terms vanish and the result is that
/// of solve_chain.
template <TernaryCosts C>
ChainSolution solve_chain_ternary(const C& costs) {
  detail::check_dimensions(costs);
  const std::size_t n = costs.size();
  const std::size_t L = costs.label_count();
  if (n < 3) {
    if constexpr (std::same_as<C, ChainProblem>) {
      return solve_chain(costs.without_ternary());
    } else {
      return solve_chain(costs);
    }
  }

  // State (a, b) = labels of elements (j-1, j), flattened as a*L + b.
  const std::size_t states = L * L;
  std::vector<double> prev(states);
  std::vector<double> cur(states);
  std::vector<std::uint32_t> back((n - 2) * states);
  for (std::size_t a = 0; a < L; ++a) {
    const double ua = costs.unary(0, a);
    for (std::size_t b = 0; b < L; ++b) {
      prev[a * L + b] = ua + costs.unary(1, b) + costs.pairwise(1, a, b);
    }
  }

  for (std::size_t j = 2; j < n; ++j) {
    auto* back_j = back.data() + (j - 2) * states;
    for (std::size_t b = 0; b < L; ++b) {
      for (std::size_t c = 0; c < L; ++c) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t a = 0; a < L; ++a) {
          const double v = prev[a * L + b] + costs.ternary(j, a, b, c);
          if (v < best) {
            best = v;
            arg = a;
          }
        }
        cur[b * L + c] = costs.unary(j, c) + costs.pairwise(j, b, c) + best;
        back_j[b * L + c] = static_cast<std::uint32_t>(arg);
      }
    }
    prev.swap(cur);
  }

  ChainSolution solution;
  solution.labels.resize(n);
  const std::size_t state = detail::argmin_first(prev);
  solution.energy = prev[state];
  solution.labels[n - 2] = state / L;
  solution.labels[n - 1] = state % L;
  for (std::size_t j = n - 1; j >= 2; --j) {
    solution.labels[j - 2] = back[(j - 2) * states + solution.labels[j - 1] * L + solution.labels[j]];
  }
  return solution;
}

/// Dispatches on whether the problem carries ternary terms.
ChainSolution solve(const ChainProblem& problem);

}  // namespace dejitter
