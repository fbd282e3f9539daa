#include "dejitter/chain_dp.hpp"

namespace dejitter {

ChainProblem::ChainProblem(std::size_t size, std::size_t label_count, Unary unary,
                           Pairwise pairwise, Ternary ternary)
    : size_(size),
      label_count_(label_count),
      unary_(std::move(unary)),
      pairwise_(std::move(pairwise)),
      ternary_(std::move(ternary)) {
  if (!unary_) throw std::invalid_argument("chain problem needs a unary cost");
}

ChainSolution solve(const ChainProblem& problem) {
  return problem.has_ternary() ? solve_chain_ternary(problem) : solve_chain(problem);
}

}  // namespace dejitter
