#include <fmt/format.h>

#include "pgpr/optimizers.hpp"

namespace pgpr {

Objective::Objective(Fn fn, std::optional<std::size_t> budget) : fn_(std::move(fn)), budget_(budget) {
  if (!fn_) throw std::invalid_argument("objective callback is empty");
}

Evaluation Objective::evaluate(const ThetaPoint& theta) {
  theta.validate();
  if (budget_ && trace_.size() >= *budget_) {
    throw BudgetExceededError(fmt::format("objective budget of {} evaluations exhausted", *budget_));
  }
  const Evaluation e = fn_(theta, trace_.size());
  trace_.push_back({theta, e.value});
  return e;
}

}  // namespace pgpr
