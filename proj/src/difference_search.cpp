#include "difference_search.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace novak::detail {

DifferenceSearch::DifferenceSearch(Modulus v, std::uint32_t k, std::uint32_t lambda,
                                   std::vector<std::uint32_t> initial_counts)
    : v_(v), k_(k), lambda_(lambda), counts_(std::move(initial_counts)) {
  if (counts_.empty()) counts_.assign(v.value(), 0);
  order_.resize(v.value() - 1);
  std::iota(order_.begin(), order_.end(), Residue{1});
}

void DifferenceSearch::set_candidate_order(std::vector<Residue> order) {
  order_ = std::move(order);
}

bool DifferenceSearch::count_node() {
  if (++nodes_ > node_limit_) {
    hit_limit_ = true;
    return false;
  }
  return true;
}

Residue DifferenceSearch::smallest_deficient() const noexcept {
  for (Residue d = 1; d < v_.value(); ++d)
    if (counts_[d] < lambda_) return d;
  return 0;
}

bool DifferenceSearch::try_add(Residue c) {
  // At most 2(k-1) increments; log them so a failed add can be undone.
  std::array<Residue, 64> log{};
  std::size_t applied = 0;
  bool ok = true;
  for (Residue e : current_) {
    for (Residue d : {v_.sub(c, e), v_.sub(e, c)}) {
      log[applied++] = d;
      if (++counts_[d] > lambda_) ok = false;
    }
    if (!ok) break;
  }
  if (!ok) {
    for (std::size_t i = 0; i < applied; ++i) --counts_[log[i]];
    return false;
  }
  current_.push_back(c);
  return true;
}

void DifferenceSearch::remove_last() {
  const Residue c = current_.back();
  current_.pop_back();
  for (Residue e : current_) {
    --counts_[v_.sub(c, e)];
    --counts_[v_.sub(e, c)];
  }
}

bool DifferenceSearch::dfs() {
  if (!count_node()) return false;
  const Residue d = smallest_deficient();
  if (d == 0) return collect_roots_ ? true : (*visit_)(chosen_);

  current_.clear();
  current_.push_back(0);
  if (!try_add(d)) {
    current_.clear();
    return true;
  }
  const bool cont = choose_more(0, k_ - 2, d);
  remove_last();
  current_.clear();
  return cont;
}

bool DifferenceSearch::choose_more(std::size_t from, std::uint32_t remaining,
                                   Residue target) {
  if (remaining == 0) {
    std::vector<Residue> form = current_;
    std::sort(form.begin(), form.end());
    // Blocks covering the same difference are taken in nondecreasing order.
    if (!chosen_.empty() && chosen_target_.back() == target && form < chosen_.back())
      return true;
    if (collect_roots_) {
      roots_.push_back(std::move(form));
      return true;
    }
    chosen_.push_back(std::move(form));
    chosen_target_.push_back(target);
    auto saved = std::move(current_);
    current_.clear();
    const bool cont = dfs();
    current_ = std::move(saved);
    chosen_.pop_back();
    chosen_target_.pop_back();
    return cont;
  }
  for (std::size_t idx = from; idx < order_.size(); ++idx) {
    const Residue c = order_[idx];
    if (c == 0 || c == target) continue;
    if (!count_node()) return false;
    if (!try_add(c)) continue;
    const bool cont = choose_more(idx + 1, remaining - 1, target);
    remove_last();
    if (!cont) return false;
  }
  return true;
}

bool DifferenceSearch::run(const Visitor& visit) {
  visit_ = &visit;
  collect_roots_ = false;
  return dfs();
}

std::vector<std::vector<Residue>> DifferenceSearch::root_branches() {
  roots_.clear();
  collect_roots_ = true;
  dfs();
  collect_roots_ = false;
  return std::move(roots_);
}

bool DifferenceSearch::run_branch(const std::vector<Residue>& first_block,
                                  const Visitor& visit) {
  visit_ = &visit;
  collect_roots_ = false;
  const Residue target = smallest_deficient();
  current_.clear();
  std::size_t added = 0;
  bool ok = true;
  for (Residue x : first_block) {
    if (!try_add(x)) {
      ok = false;
      break;
    }
    ++added;
  }
  bool cont = true;
  if (ok) {
    chosen_.push_back(first_block);
    chosen_target_.push_back(target);
    current_.clear();
    cont = dfs();
    chosen_.pop_back();
    chosen_target_.pop_back();
    current_ = first_block;
  }
  while (added-- > 0) remove_last();
  current_.clear();
  return cont;
}

}  // namespace novak::detail
