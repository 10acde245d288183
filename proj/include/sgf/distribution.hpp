#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgf/graphlet_types.hpp"

namespace sgf {

// Subgraph-type frequency distribution. `counts` are exact counts for the
// oracle and estimated (possibly relative or weighted) counts for samplers;
// in both cases freq(code) = counts[code] / total().
struct FrequencyDistribution {
  std::vector<int> k_set;
  std::map<CanonicalCode, double> counts;
  // Method parameters and flags ("empty", "partial", acceptance rates, ...).
  nlohmann::json meta = nlohmann::json::object();

  double total() const;
  double freq(const CanonicalCode& code) const;
  std::map<CanonicalCode, double> frequencies() const;
  bool empty() const { return total() <= 0.0; }

  // Counts restricted to one graphlet size.
  FrequencyDistribution restricted_to(int k) const;
};

// Adds b's counts into a (same units assumed) and unions k_set.
void merge_counts(FrequencyDistribution& a, const FrequencyDistribution& b, double scale = 1.0);

// Mean squared difference of frequencies over the union of codes (a code
// missing from one side counts as 0). Both empty -> 0; `both_empty` flags it.
double mse(const FrequencyDistribution& a, const FrequencyDistribution& b,
           bool* both_empty = nullptr);

// Largest absolute frequency difference over the union of codes.
double max_abs_difference(const FrequencyDistribution& a, const FrequencyDistribution& b);

// {"schema":1,"k_set":[..],"total":N,"entries":[{code,alias,count,freq}..],"meta":{..}}
// Entries sorted by descending freq, then code. With include_timing=false the
// meta.wall_time_s field is omitted so repeated seeded runs are byte-identical.
nlohmann::json to_json(const FrequencyDistribution& d, bool include_timing = true);
FrequencyDistribution distribution_from_json(const nlohmann::json& j);

// Per-type histogram CSV: code,alias,k,count,freq.
std::string to_csv(const FrequencyDistribution& d);

}  // namespace sgf
