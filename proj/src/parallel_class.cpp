#include "novak/parallel_class.hpp"

#include <algorithm>
#include <string>

#include "novak/errors.hpp"

namespace novak {

std::uint32_t class_parameter_s(const CyclicDesign& design) noexcept {
  return (design.k() - 1) / design.lambda();
}

PartialParallelClass::PartialParallelClass(const CyclicDesign& design)
    : design_(&design),
      s_(class_parameter_s(design)),
      owner_(design.v().value(), -1),
      by_orbit_(design.orbit_count()),
      per_orbit_(design.orbit_count(), 0),
      tau_(s_ + 1, 0) {
  tau_[0] = design.orbit_count();
  potential_ = weight(0) * static_cast<std::int64_t>(design.orbit_count());
}

bool PartialParallelClass::fits(const Block& block) const noexcept {
  for (Residue x : block)
    if (owner_[x] >= 0) return false;
  return true;
}

void PartialParallelClass::move_count(std::size_t orbit, std::uint32_t from, std::uint32_t to) {
  if (to >= tau_.size()) tau_.resize(to + 1, 0);
  --tau_[from];
  ++tau_[to];
  potential_ += weight(to) - weight(from);
  per_orbit_[orbit] = to;
}

void PartialParallelClass::insert(std::size_t orbit, Residue t) {
  if (orbit >= design_->orbit_count())
    throw PreconditionError("orbit index out of range", orbit);
  if (t >= design_->orbits()[orbit].length)
    throw PreconditionError("translate outside orbit " + std::to_string(orbit), orbit);
  Block b = design_->block(orbit, t);
  if (!fits(b))
    throw PreconditionError("block " + format_block(b) + " meets the class", orbit);
  std::size_t id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
  } else {
    id = entries_.size();
    entries_.emplace_back();
  }
  for (Residue x : b) owner_[x] = static_cast<std::int64_t>(id);
  entries_[id] = ClassBlock{orbit, t, std::move(b)};
  by_orbit_[orbit].push_back(id);
  ++live_;
  move_count(orbit, per_orbit_[orbit], per_orbit_[orbit] + 1);
#ifndef NDEBUG
  if (!check_invariants()) throw InconsistencyError("class invariants broken by insert");
#endif
}

void PartialParallelClass::erase(std::size_t orbit, Residue t) {
  if (orbit >= design_->orbit_count())
    throw PreconditionError("orbit index out of range", orbit);
  auto& ids = by_orbit_[orbit];
  auto it = std::find_if(ids.begin(), ids.end(),
                         [&](std::size_t id) { return entries_[id]->translate == t; });
  if (it == ids.end())
    throw PreconditionError("block not in class", orbit);
  const std::size_t id = *it;
  ids.erase(it);
  for (Residue x : entries_[id]->block) owner_[x] = -1;
  entries_[id].reset();
  free_.push_back(id);
  --live_;
  move_count(orbit, per_orbit_[orbit], per_orbit_[orbit] - 1);
#ifndef NDEBUG
  if (!check_invariants()) throw InconsistencyError("class invariants broken by erase");
#endif
}

std::int64_t PartialParallelClass::recompute_potential() const {
  std::vector<std::uint32_t> counts(design_->orbit_count(), 0);
  for (const auto& e : entries_)
    if (e) ++counts[e->orbit];
  std::int64_t d = 0;
  for (std::uint32_t a : counts)
    if (a + 2 <= s_) d += s_ - 1 - a;
  return d;
}

std::optional<std::size_t> PartialParallelClass::owner(Residue point) const noexcept {
  if (point >= owner_.size() || owner_[point] < 0) return std::nullopt;
  return static_cast<std::size_t>(owner_[point]);
}

std::vector<ClassBlock> PartialParallelClass::blocks() const {
  std::vector<ClassBlock> out;
  out.reserve(live_);
  for (const auto& e : entries_)
    if (e) out.push_back(*e);
  std::sort(out.begin(), out.end(), [](const ClassBlock& a, const ClassBlock& b) {
    return a.orbit != b.orbit ? a.orbit < b.orbit : a.translate < b.translate;
  });
  return out;
}

bool PartialParallelClass::check_invariants() const {
  const auto all = blocks();
  if (all.size() != live_) return false;
  std::vector<int> seen(design_->v().value(), 0);
  std::vector<std::uint32_t> counts(design_->orbit_count(), 0);
  for (const auto& b : all) {
    if (b.block != design_->block(b.orbit, b.translate)) return false;
    for (Residue x : b.block)
      if (seen[x]++) return false;
    ++counts[b.orbit];
  }
  if (counts != per_orbit_) return false;
  std::vector<std::uint64_t> tau(tau_.size(), 0);
  for (std::uint32_t a : counts) {
    if (a >= tau.size()) return false;
    ++tau[a];
  }
  if (tau != tau_) return false;
  std::uint64_t total = 0;
  for (auto x : tau) total += x;
  return total == design_->orbit_count() && recompute_potential() == potential_;
}

BlockQuality classify_block(const PartialParallelClass& cls, const Block& block, std::size_t) {
  std::vector<std::size_t> hit_orbits;
  std::vector<std::size_t> hit_ids;
  for (Residue x : block) {
    const auto id = cls.owner(x);
    if (!id || std::find(hit_ids.begin(), hit_ids.end(), *id) != hit_ids.end()) continue;
    hit_ids.push_back(*id);
    const std::size_t orbit = cls.entry(*id).orbit;
    if (cls.count(orbit) < cls.s()) return BlockQuality::bad;
    if (std::find(hit_orbits.begin(), hit_orbits.end(), orbit) != hit_orbits.end())
      return BlockQuality::bad;
    hit_orbits.push_back(orbit);
  }
  return BlockQuality::good;
}

std::size_t count_good_blocks(const PartialParallelClass& cls, std::size_t orbit) {
  const auto& design = cls.design();
  std::size_t good = 0;
  for (Residue t = 0; t < design.orbits().at(orbit).length; ++t)
    if (classify_block(cls, design.block(orbit, t), orbit) == BlockQuality::good) ++good;
  return good;
}

namespace {

std::optional<Residue> least_good_block(const PartialParallelClass& cls, std::size_t orbit) {
  const auto& design = cls.design();
  std::optional<Residue> best;
  Block best_block;
  for (Residue t = 0; t < design.orbits()[orbit].length; ++t) {
    Block b = design.block(orbit, t);
    if (best && !(b < best_block)) continue;
    if (classify_block(cls, b, orbit) != BlockQuality::good) continue;
    best = t;
    best_block = std::move(b);
  }
  return best;
}

}  // namespace

RepairResult greedy_repair(const PartialParallelClass& start, const RepairOptions& options) {
  const auto& design = start.design();
  const std::uint32_t s = start.s();
  if (s < 2) throw DomainError("greedy_repair needs s = floor((k-1)/lambda) >= 2");
  for (std::size_t i = 0; i < design.orbit_count(); ++i)
    if (start.count(i) > s)
      throw PreconditionError("orbit " + std::to_string(i) + " has more than s blocks", i);

  RepairResult r{start, {}, start.potential(), start.tau(s - 1), 0, 0};
  const std::int64_t k = design.k();
  r.bound = (k + 1) * r.initial_potential + static_cast<std::int64_t>(r.initial_tau);

  if (options.check_precondition && r.initial_potential > 0) {
    const std::int64_t need = k * k * (k * s - k + 1) * (r.initial_potential - 1);
    for (std::size_t i = 0; i < design.orbit_count(); ++i) {
      if (start.count(i) + 2 > s) continue;
      const auto good = static_cast<std::int64_t>(count_good_blocks(start, i));
      if (good <= need)
        throw PreconditionError("orbit " + std::to_string(i) + " has " + std::to_string(good) +
                                    " good blocks, needs more than " + std::to_string(need),
                                i);
    }
  }

  auto& p = r.repaired;
  std::size_t scan = 0;
  while (p.potential() > 0) {
    while (scan < design.orbit_count() && p.count(scan) + 2 > s) ++scan;
    if (scan == design.orbit_count())
      throw InconsistencyError("positive potential with no deficient orbit");
    const std::size_t j = scan;
    const auto t = least_good_block(p, j);
    if (!t) throw PreconditionError("orbit " + std::to_string(j) + " has no good block", j);

    RepairStep step{j, *t, 0, p.potential(), 0, p.tau(s - 1), 0};
    const Block bj = design.block(j, *t);
    std::vector<std::pair<std::size_t, Residue>> q;
    for (Residue x : bj)
      if (const auto id = p.owner(x)) {
        const auto& e = p.entry(*id);
        const std::pair<std::size_t, Residue> key{e.orbit, e.translate};
        if (std::find(q.begin(), q.end(), key) == q.end()) q.push_back(key);
      }
    for (const auto& [orbit, tr] : q) p.erase(orbit, tr);
    p.insert(j, *t);
    step.removed = q.size();
    step.potential_after = p.potential();
    step.tau_after = p.tau(s - 1);
    if (step.potential_after != step.potential_before - 1)
      throw InconsistencyError("repair step at orbit " + std::to_string(j) +
                               " did not lower d by exactly one");
    if (step.tau_after > step.tau_before + static_cast<std::uint64_t>(k + 1))
      throw InconsistencyError("repair step at orbit " + std::to_string(j) +
                               " raised tau_{s-1} by more than k+1");
    r.steps.push_back(step);
  }
  r.final_tau = p.tau(s - 1);
  if (static_cast<std::int64_t>(r.final_tau) > r.bound)
    throw InconsistencyError("tau_{s-1}(P'') exceeds (k+1) d(P') + tau_{s-1}(P')");
  if (p.tau(s) + p.tau(s - 1) != design.orbit_count())
    throw InconsistencyError("repaired class has an orbit outside {s-1, s}");
  return r;
}

}  // namespace novak
