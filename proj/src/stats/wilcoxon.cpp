#include "rnimpute/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rnimpute/dataset.hpp"

namespace rnimpute::stats {

namespace {

constexpr std::size_t kMaxRanks = 62;

bool close(double x, double y) {
  return std::fabs(x - y) <= 1e-9 * std::max({1.0, std::fabs(x), std::fabs(y)});
}

}  // namespace

SignedRankDistribution::SignedRankDistribution(std::span<const std::uint32_t> doubled_ranks)
    : n_(doubled_ranks.size()) {
  if (n_ > kMaxRanks)
    throw std::invalid_argument("exact signed-rank distribution supports at most 62 pairs");
  total_ = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), std::uint32_t{0});
  // Subset-sum counting: each rank is either in W+ or not.
  counts_.assign(total_ + 1, 0);
  counts_[0] = 1;
  std::uint32_t reach = 0;
  for (auto r : doubled_ranks) {
    reach += r;
    for (std::uint32_t s = reach; s >= r; --s) {
      counts_[s] += counts_[s - r];
      if (s == r) break;
    }
  }
}

double SignedRankDistribution::two_sided_p(std::uint32_t doubled_statistic) const {
  if (n_ == 0) return 1.0;
  std::uint64_t hits = 0;
  for (std::uint32_t s = 0; s <= total_; ++s)
    if (s <= doubled_statistic || s + doubled_statistic >= total_) hits += counts_[s];
  return static_cast<double>(static_cast<long double>(hits) / std::ldexp(1.0L, static_cast<int>(n_)));
}

SignedRanks signed_ranks(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired samples differ in length");
  if (a.empty()) throw std::invalid_argument("paired samples are empty");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (!close(a[i], b[i])) diffs.push_back(d);
  }
  std::vector<std::size_t> order(diffs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::fabs(diffs[x]) < std::fabs(diffs[y]);
  });

  SignedRanks out;
  out.doubled.assign(diffs.size(), 0);
  out.positive.assign(diffs.size(), false);
  for (std::size_t first = 0; first < order.size();) {
    std::size_t last = first;
    while (last + 1 < order.size() &&
           close(std::fabs(diffs[order[last + 1]]), std::fabs(diffs[order[first]])))
      ++last;
    // Ranks first+1 .. last+1 share their mean; doubled that is first+last+2.
    const auto doubled = static_cast<std::uint32_t>(first + last + 2);
    for (std::size_t p = first; p <= last; ++p) {
      out.doubled[order[p]] = doubled;
      out.positive[order[p]] = diffs[order[p]] > 0;
    }
    first = last + 1;
  }
  return out;
}

WilcoxonReport wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const auto ranks = signed_ranks(a, b);
  WilcoxonReport r;
  r.alpha = alpha;
  r.n_effective = ranks.doubled.size();
  if (r.n_effective == 0) return r;

  std::uint32_t plus = 0;
  std::uint32_t minus = 0;
  for (std::size_t i = 0; i < ranks.doubled.size(); ++i)
    (ranks.positive[i] ? plus : minus) += ranks.doubled[i];
  r.w_plus = plus / 2.0;
  r.w_minus = minus / 2.0;
  const auto stat = std::min(plus, minus);
  r.statistic = stat / 2.0;

  const SignedRankDistribution dist(ranks.doubled);
  r.p_value = dist.two_sided_p(stat);
  // Critical value: the largest attainable statistic whose p-value is <= alpha.
  for (std::uint32_t s = 0; 2 * s <= dist.doubled_total(); ++s) {
    if (dist.counts()[s] == 0) continue;
    if (dist.two_sided_p(s) <= alpha) r.critical_value = s / 2.0;
    else break;
  }
  return r;
}

const MethodAccuracies* AccuracyTable::find(std::string_view method) const {
  for (const auto& m : methods)
    if (m.method == method) return &m;
  return nullptr;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, '\t')) {
    while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
    while (!cur.empty() && cur.front() == ' ') cur.erase(cur.begin());
    out.push_back(cur);
  }
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

}  // namespace

AccuracyTable parse_accuracy_table(std::istream& in) {
  AccuracyTable t;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    if (!header) {
      if (fields.size() < 2) throw ParseError(line_no, "accuracy table header needs datasets");
      t.datasets.assign(fields.begin() + 1, fields.end());
      header = true;
      continue;
    }
    if (fields.size() != t.datasets.size() + 1)
      throw ParseError(line_no, "row has " + std::to_string(fields.size()) + " fields, expected " +
                                    std::to_string(t.datasets.size() + 1));
    MethodAccuracies m{fields[0], {}};
    for (std::size_t d = 0; d < t.datasets.size(); ++d) {
      const auto& tok = fields[d + 1];
      if (tok.empty() || tok == "?")
        throw ParseError(line_no, "missing accuracy for " + m.method + " on " + t.datasets[d]);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw ParseError(line_no, "bad accuracy '" + tok + "'");
      m.by_dataset[t.datasets[d]] = v;
    }
    if (t.find(m.method)) throw ParseError(line_no, "duplicate method '" + m.method + "'");
    t.methods.push_back(std::move(m));
  }
  if (!header) throw ParseError(line_no, "empty accuracy table");
  return t;
}

AccuracyTable parse_accuracy_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_accuracy_table(in);
}

AccuracyTable accuracy_table_from_results(const nlohmann::json& results) {
  AccuracyTable t;
  for (const auto& run : results.at("runs")) {
    const auto ds = run.at("dataset").get<std::string>();
    const auto method = run.at("imputer").get<std::string>();
    if (std::find(t.datasets.begin(), t.datasets.end(), ds) == t.datasets.end())
      t.datasets.push_back(ds);
    auto it = std::find_if(t.methods.begin(), t.methods.end(),
                           [&](const MethodAccuracies& m) { return m.method == method; });
    if (it == t.methods.end()) it = t.methods.insert(t.methods.end(), MethodAccuracies{method, {}});
    it->by_dataset[ds] = run.at("mean").get<double>();
  }
  for (const auto& m : t.methods)
    for (const auto& ds : t.datasets)
      if (!m.by_dataset.contains(ds))
        throw std::runtime_error("results lack " + m.method + " on " + ds);
  return t;
}

std::string write_accuracy_table(const AccuracyTable& t) {
  std::ostringstream out;
  out << "method";
  for (const auto& d : t.datasets) out << '\t' << d;
  out << '\n';
  for (const auto& m : t.methods) {
    out << m.method;
    for (const auto& d : t.datasets) out << '\t' << format_fixed2(m.by_dataset.at(d));
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<double> column_values(const AccuracyTable& t, const MethodAccuracies& m) {
  std::vector<double> v;
  for (const auto& d : t.datasets) {
    const auto it = m.by_dataset.find(d);
    if (it == m.by_dataset.end())
      throw std::runtime_error("method '" + m.method + "' has no accuracy for '" + d + "'");
    v.push_back(it->second);
  }
  if (m.by_dataset.size() != t.datasets.size())
    throw std::runtime_error("method '" + m.method + "' covers a different dataset set");
  return v;
}

const MethodAccuracies& require(const AccuracyTable& t, std::string_view name) {
  const auto* m = t.find(name);
  if (!m) throw std::runtime_error("method '" + std::string(name) + "' not in the table");
  return *m;
}

}  // namespace

std::vector<WilcoxonReport> compare_all(const AccuracyTable& table, std::string_view reference,
                                        double alpha) {
  const auto& ref = require(table, reference);
  const auto ref_values = column_values(table, ref);
  std::vector<WilcoxonReport> out;
  for (const auto& m : table.methods) {
    if (m.method == reference) continue;
    auto r = wilcoxon_signed_rank(ref_values, column_values(table, m), alpha);
    r.method = m.method;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<std::string, double>> accuracy_deltas(const AccuracyTable& table,
                                                            std::string_view reference,
                                                            std::string_view method) {
  const auto ref = column_values(table, require(table, reference));
  const auto other = column_values(table, require(table, method));
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t d = 0; d < table.datasets.size(); ++d)
    out.emplace_back(table.datasets[d], ref[d] - other[d]);
  return out;
}

std::string format_fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

namespace {

std::string one_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::string render_report_table(std::span<const WilcoxonReport> reports) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-16s %-16s %-15s %s\n", "Method", "Rank Sums (+, -)",
                "Test Statistics", "Critical Value", "p-value");
  out << line;
  for (const auto& r : reports) {
    const auto sums = one_decimal(r.w_plus) + ", " + one_decimal(r.w_minus);
    const auto crit = r.critical_value ? one_decimal(*r.critical_value) : std::string("-");
    std::snprintf(line, sizeof line, "%-10s %-16s %-16s %-15s %s\n", r.method.c_str(),
                  sums.c_str(), one_decimal(r.statistic).c_str(), crit.c_str(),
                  format_fixed2(r.p_value).c_str());
    out << line;
  }
  return out.str();
}

nlohmann::ordered_json to_json(const WilcoxonReport& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["n_effective"] = r.n_effective;
  j["w_plus"] = r.w_plus;
  j["w_minus"] = r.w_minus;
  j["statistic"] = r.statistic;
  j["critical_value"] = r.critical_value ? nlohmann::ordered_json(*r.critical_value) : nullptr;
  j["p_value"] = r.p_value;
  j["alpha"] = r.alpha;
  return j;
}

}  // namespace rnimpute::stats
