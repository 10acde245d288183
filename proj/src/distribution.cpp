#include "sgf/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "sgf/error.hpp"

namespace sgf {

double FrequencyDistribution::total() const {
  double sum = 0.0;
  for (const auto& [code, count] : counts) sum += count;
  return sum;
}

double FrequencyDistribution::freq(const CanonicalCode& code) const {
  const double t = total();
  if (t <= 0.0) return 0.0;
  auto it = counts.find(code);
  return it == counts.end() ? 0.0 : it->second / t;
}

std::map<CanonicalCode, double> FrequencyDistribution::frequencies() const {
  std::map<CanonicalCode, double> out;
  const double t = total();
  if (t <= 0.0) return out;
  for (const auto& [code, count] : counts) out[code] = count / t;
  return out;
}

FrequencyDistribution FrequencyDistribution::restricted_to(int k) const {
  FrequencyDistribution out;
  out.k_set = {k};
  for (const auto& [code, count] : counts)
    if (code.k == k) out.counts[code] = count;
  return out;
}

void merge_counts(FrequencyDistribution& a, const FrequencyDistribution& b, double scale) {
  for (const auto& [code, count] : b.counts) a.counts[code] += scale * count;
  std::set<int> ks(a.k_set.begin(), a.k_set.end());
  ks.insert(b.k_set.begin(), b.k_set.end());
  a.k_set.assign(ks.begin(), ks.end());
}

namespace {

std::set<CanonicalCode> code_union(const std::map<CanonicalCode, double>& a,
                                   const std::map<CanonicalCode, double>& b) {
  std::set<CanonicalCode> keys;
  for (const auto& kv : a) keys.insert(kv.first);
  for (const auto& kv : b) keys.insert(kv.first);
  return keys;
}

void strip_timing(nlohmann::json& j) {
  if (!j.is_object()) return;
  j.erase("wall_time_s");
  for (auto& item : j.items()) strip_timing(item.value());
}

double lookup(const std::map<CanonicalCode, double>& m, const CanonicalCode& c) {
  auto it = m.find(c);
  return it == m.end() ? 0.0 : it->second;
}

}  // namespace

double mse(const FrequencyDistribution& a, const FrequencyDistribution& b, bool* both_empty) {
  const auto fa = a.frequencies();
  const auto fb = b.frequencies();
  const auto keys = code_union(fa, fb);
  if (both_empty) *both_empty = fa.empty() && fb.empty();
  if (keys.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& c : keys) {
    const double d = lookup(fa, c) - lookup(fb, c);
    sum += d * d;
  }
  return sum / static_cast<double>(keys.size());
}

double max_abs_difference(const FrequencyDistribution& a, const FrequencyDistribution& b) {
  const auto fa = a.frequencies();
  const auto fb = b.frequencies();
  double worst = 0.0;
  for (const auto& c : code_union(fa, fb))
    worst = std::max(worst, std::abs(lookup(fa, c) - lookup(fb, c)));
  return worst;
}

nlohmann::json to_json(const FrequencyDistribution& d, bool include_timing) {
  const double total = d.total();
  std::vector<std::pair<CanonicalCode, double>> rows(d.counts.begin(), d.counts.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [code, count] : rows) {
    entries.push_back({{"code", code.str()},
                       {"alias", alias(code)},
                       {"count", count},
                       {"freq", total > 0.0 ? count / total : 0.0}});
  }
  nlohmann::json meta = d.meta.is_object() ? d.meta : nlohmann::json::object();
  if (!include_timing) strip_timing(meta);
  meta["empty"] = total <= 0.0;
  return {{"schema", 1}, {"k_set", d.k_set}, {"total", total}, {"entries", entries},
          {"meta", meta}};
}

FrequencyDistribution distribution_from_json(const nlohmann::json& j) {
  try {
    FrequencyDistribution d;
    d.k_set = j.at("k_set").get<std::vector<int>>();
    for (const auto& e : j.at("entries"))
      d.counts[CanonicalCode::parse(e.at("code").get<std::string>())] = e.at("count").get<double>();
    if (j.contains("meta")) d.meta = j.at("meta");
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed distribution JSON: ") + e.what());
  }
}

std::string to_csv(const FrequencyDistribution& d) {
  std::ostringstream out;
  out.precision(17);
  out << "code,alias,k,count,freq\n";
  const double total = d.total();
  for (const auto& [code, count] : d.counts)
    out << code.str() << ",\"" << alias(code) << "\"," << int(code.k) << ',' << count << ','
        << (total > 0.0 ? count / total : 0.0) << '\n';
  return out.str();
}

}  // namespace sgf
