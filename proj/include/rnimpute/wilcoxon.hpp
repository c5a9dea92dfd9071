#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace rnimpute::stats {

struct WilcoxonReport {
  std::string method;
  std::size_t n_effective = 0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  double statistic = 0.0;
  /// Largest statistic value still significant at alpha; none when even 0 is not.
  std::optional<double> critical_value;
  double p_value = 1.0;
  double alpha = 0.05;
};

/// Exact distribution of the positive rank sum under H0 for a set of ranks,
/// stored in half-rank units so mid-ranks stay integral: counts[s] is the
/// number of the 2^n sign assignments whose doubled W+ equals s.
class SignedRankDistribution {
 public:
  /// `doubled_ranks` are 2 * rank; at most 62 of them.
  explicit SignedRankDistribution(std::span<const std::uint32_t> doubled_ranks);

  std::size_t n() const { return n_; }
  std::uint32_t doubled_total() const { return total_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  /// P(min(W+, W-) <= doubled_statistic / 2), two-sided.
  double two_sided_p(std::uint32_t doubled_statistic) const;

 private:
  std::size_t n_ = 0;
  std::uint32_t total_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// Signed ranks of paired differences a - b: zero differences dropped,
/// mid-ranks for tied magnitudes. Returned in doubled units with the sign of
/// each difference. Values within 1e-9 (relative) count as equal.
struct SignedRanks {
  std::vector<std::uint32_t> doubled;
  std::vector<bool> positive;
};
SignedRanks signed_ranks(std::span<const double> a, std::span<const double> b);

/// Exact two-sided Wilcoxon signed-rank test of a against b.
WilcoxonReport wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    double alpha = 0.05);

struct MethodAccuracies {
  std::string method;
  std::map<std::string, double> by_dataset;
};

/// Methods in presentation order; `datasets` fixes column order.
struct AccuracyTable {
  std::vector<std::string> datasets;
  std::vector<MethodAccuracies> methods;

  const MethodAccuracies* find(std::string_view method) const;
};

/// TSV: header `method<TAB>ds1<TAB>ds2...`, then one row per method.
AccuracyTable parse_accuracy_table(std::istream& in);
AccuracyTable parse_accuracy_table(std::string_view text);
/// From the experiment JSON schema {runs:[{dataset, imputer, mean, ...}]}.
AccuracyTable accuracy_table_from_results(const nlohmann::json& results);
std::string write_accuracy_table(const AccuracyTable& t);

/// Reference versus every other method, in table order.
std::vector<WilcoxonReport> compare_all(const AccuracyTable& table, std::string_view reference,
                                        double alpha = 0.05);

/// Per-dataset accuracy difference reference - method.
std::vector<std::pair<std::string, double>> accuracy_deltas(const AccuracyTable& table,
                                                            std::string_view reference,
                                                            std::string_view method);

/// Two decimals, printf rounding (half-to-even on the exact binary value).
std::string format_fixed2(double v);

/// Text table with the columns Method, Rank Sums (+, -), Test Statistics,
/// Critical Value, p-value.
std::string render_report_table(std::span<const WilcoxonReport> reports);

nlohmann::ordered_json to_json(const WilcoxonReport& r);

}  // namespace rnimpute::stats
