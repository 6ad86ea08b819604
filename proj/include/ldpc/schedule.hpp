#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldpc/rng.hpp"
#include "ldpc/tanner.hpp"

namespace ldpc {

enum class ScheduleKind { flooding, disjoint, nondisjoint };

inline const char* to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::flooding: return "bp";
    case ScheduleKind::disjoint: return "gsbp";
    case ScheduleKind::nondisjoint: return "ndgsbp";
  }
  return "?";
}

// Ordered CN groups processed one sub-iteration at a time. For the
// non-disjoint kind, consecutive groups share round(N_G * r) CNs; groups two
// or more apart never intersect. `seed` drives both the stored grouping and
// the per-iteration regrouping done by the decoder when
// regroup_each_iteration is set.
struct GroupSchedule {
  ScheduleKind kind = ScheduleKind::flooding;
  int n_groups = 1;
  double overlap_ratio = 0.0;
  int group_size = 0;  // nominal N_G; trailing groups may be smaller
  std::uint64_t seed = 0;
  bool regroup_each_iteration = true;
  std::vector<std::vector<int>> groups;
};

struct CocsgReport {
  std::vector<int> transition_counts;  // one per group pair (g-1, g)
  std::optional<double> average;       // the connectivity metric; empty if < 2 groups
};

namespace detail {

// A disjoint grouping is a shuffled balanced partition. The overlapped
// grouping follows the sequential construction: group 1 is N_G fresh CNs;
// group g takes k = round(N_G * r) CNs from group g-1 minus group g-2 and the
// rest fresh. The last group absorbs whatever remains of the fresh pool so
// coverage always holds.
inline std::vector<std::vector<int>> generate_groups(int n_checks, int n_groups, double overlap, Rng& rng) {
  std::vector<int> pool(n_checks);
  for (int i = 0; i < n_checks; ++i) pool[i] = i;
  rng.shuffle(pool.begin(), pool.end());

  std::vector<std::vector<int>> groups(n_groups);
  if (overlap == 0.0) {
    const int base = n_checks / n_groups;
    const int extra = n_checks % n_groups;
    std::size_t next = 0;
    for (int g = 0; g < n_groups; ++g) {
      const int size = base + (g < extra ? 1 : 0);
      groups[g].assign(pool.begin() + next, pool.begin() + next + size);
      next += size;
    }
    return groups;
  }

  const double denom = n_groups - (n_groups - 1) * overlap;
  const int nominal = static_cast<int>(std::ceil(n_checks / denom));
  const int k = static_cast<int>(std::llround(nominal * overlap));
  if (n_groups > 1 && 2 * k > nominal)
    throw std::invalid_argument("infeasible (G, r): overlap " + std::to_string(k) + " exceeds the fresh half of N_G=" +
                                std::to_string(nominal));

  std::size_t next = 0;  // consumption point in the shuffled fresh pool
  const auto take_fresh = [&](int want) {
    const int got = std::min<int>(want, static_cast<int>(pool.size() - next));
    std::vector<int> out(pool.begin() + next, pool.begin() + next + got);
    next += got;
    return out;
  };

  groups[0] = take_fresh(nominal);
  if (static_cast<int>(groups[0].size()) < std::min(nominal, n_checks))
    throw std::invalid_argument("infeasible (G, r): first group cannot be filled");
  for (int g = 1; g < n_groups; ++g) {
    // Candidates for the overlap: previous group minus the one before it.
    std::vector<int> candidates;
    if (g == 1) {
      candidates = groups[0];
    } else {
      const auto& prevprev = groups[g - 2];
      for (int cn : groups[g - 1])
        if (std::find(prevprev.begin(), prevprev.end(), cn) == prevprev.end()) candidates.push_back(cn);
    }
    rng.shuffle(candidates.begin(), candidates.end());
    const int k_take = std::min<int>(k, static_cast<int>(candidates.size()));
    groups[g].assign(candidates.begin(), candidates.begin() + k_take);

    int fresh_want = nominal - k_take;
    if (g == n_groups - 1) fresh_want = static_cast<int>(pool.size() - next);  // absorb the remainder
    auto fresh = take_fresh(fresh_want);
    if (g < n_groups - 1 && static_cast<int>(fresh.size()) < fresh_want)
      throw std::invalid_argument("infeasible (G, r): fresh pool exhausted at group " + std::to_string(g + 1));
    groups[g].insert(groups[g].end(), fresh.begin(), fresh.end());
    if (groups[g].empty())
      throw std::invalid_argument("infeasible (G, r): empty group " + std::to_string(g + 1));
  }
  if (next != pool.size()) throw std::invalid_argument("infeasible (G, r): groups do not cover all CNs");
  return groups;
}

}  // namespace detail

// Groups for a given iteration stream. Iteration 1 uses the schedule's stored
// groups; when regrouping is on, the decoder calls this with the iteration
// index to redraw them.
inline std::vector<std::vector<int>> schedule_groups_for(const GroupSchedule& s, int n_checks, std::uint64_t stream) {
  if (s.kind == ScheduleKind::flooding) return s.groups;
  Rng rng(mix_seed(s.seed, stream));
  return detail::generate_groups(n_checks, s.n_groups,
                                 s.kind == ScheduleKind::nondisjoint ? s.overlap_ratio : 0.0, rng);
}

inline GroupSchedule make_flooding_schedule(const TannerGraph& g) {
  GroupSchedule s;
  s.kind = ScheduleKind::flooding;
  s.n_groups = 1;
  s.group_size = g.n_checks;
  s.regroup_each_iteration = false;
  s.groups.resize(1);
  s.groups[0].resize(g.n_checks);
  for (int m = 0; m < g.n_checks; ++m) s.groups[0][m] = m;
  return s;
}

inline GroupSchedule make_disjoint_schedule(const TannerGraph& g, int n_groups, std::uint64_t seed,
                                            bool regroup_each_iteration = true) {
  if (n_groups < 1 || n_groups > g.n_checks) throw std::invalid_argument("need 1 <= G <= M");
  GroupSchedule s;
  s.kind = ScheduleKind::disjoint;
  s.n_groups = n_groups;
  s.overlap_ratio = 0.0;
  s.group_size = (g.n_checks + n_groups - 1) / n_groups;
  s.seed = seed;
  s.regroup_each_iteration = regroup_each_iteration;
  Rng rng(mix_seed(seed, 1));
  s.groups = detail::generate_groups(g.n_checks, n_groups, 0.0, rng);
  return s;
}

inline GroupSchedule make_nondisjoint_schedule(const TannerGraph& g, int n_groups, double overlap, std::uint64_t seed,
                                               bool regroup_each_iteration = true) {
  if (n_groups < 1 || n_groups > g.n_checks) throw std::invalid_argument("need 1 <= G <= M");
  if (!(overlap >= 0.0) || overlap >= 1.0) throw std::invalid_argument("need 0 <= r < 1");
  GroupSchedule s;
  s.kind = ScheduleKind::nondisjoint;
  s.n_groups = n_groups;
  s.overlap_ratio = overlap;
  const double denom = n_groups - (n_groups - 1) * overlap;
  s.group_size = static_cast<int>(std::ceil(g.n_checks / denom));
  s.seed = seed;
  s.regroup_each_iteration = regroup_each_iteration;
  Rng rng(mix_seed(seed, 1));
  s.groups = detail::generate_groups(g.n_checks, n_groups, overlap, rng);
  return s;
}

// Count, for each pair of consecutive groups, the VNs adjacent to at least
// one CN of each; the average is the inter-sub-iteration connectivity metric.
inline CocsgReport measure_cocsg(const TannerGraph& g, const GroupSchedule& s) {
  CocsgReport report;
  const int n_groups = static_cast<int>(s.groups.size());
  if (n_groups < 2) return report;
  std::vector<char> in_prev(g.n_vars, 0);
  std::vector<char> counted(g.n_vars, 0);
  for (int t = 1; t < n_groups; ++t) {
    std::fill(in_prev.begin(), in_prev.end(), 0);
    for (int m : s.groups[t - 1])
      for (int n : g.check_adj[m]) in_prev[n] = 1;
    std::fill(counted.begin(), counted.end(), 0);
    int count = 0;
    for (int m : s.groups[t]) {
      for (int n : g.check_adj[m]) {
        if (in_prev[n] && !counted[n]) {
          counted[n] = 1;
          ++count;
        }
      }
    }
    report.transition_counts.push_back(count);
  }
  double sum = 0.0;
  for (int c : report.transition_counts) sum += c;
  report.average = sum / report.transition_counts.size();
  return report;
}

// Complexity-fair iteration cap: floor(M * I_max / (M + (G-1) * N_G * r)).
// The overlapped CNs are updated twice per iteration, so the extra work is
// charged against the iteration budget. Schedules without overlap keep I_max.
inline int iteration_budget(int n_checks, int i_max, const GroupSchedule& s) {
  if (s.kind != ScheduleKind::nondisjoint || s.overlap_ratio == 0.0) return i_max;
  const double extra = (s.n_groups - 1) * static_cast<double>(s.group_size) * s.overlap_ratio;
  return static_cast<int>(std::floor(static_cast<double>(n_checks) * i_max / (n_checks + extra)));
}

}  // namespace ldpc
