#include <cmath>
#include <fstream>

#include "doctest.h"
#include "rnimpute/random.hpp"
#include "rnimpute/wilcoxon.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rnimpute;
using namespace rnimpute::stats;
using rnimpute::testing::data_path;

namespace {

AccuracyTable load(const std::string& name) {
  std::ifstream in(data_path(name));
  REQUIRE(in);
  return parse_accuracy_table(in);
}

struct Golden {
  const char* method;
  double plus;
  double minus;
  const char* p;  // two decimals
};

void check_golden(const std::vector<WilcoxonReport>& reports, std::initializer_list<Golden> rows,
                  bool check_p) {
  REQUIRE(reports.size() == rows.size());
  std::size_t i = 0;
  for (const auto& g : rows) {
    const auto& r = reports[i++];
    CAPTURE(g.method);
    CHECK(r.method == g.method);
    CHECK(r.w_plus == g.plus);
    CHECK(r.w_minus == g.minus);
    CHECK(r.statistic == std::min(g.plus, g.minus));
    if (check_p) CHECK(format_fixed2(r.p_value) == g.p);
  }
}

}  // namespace

TEST_CASE("C4.5 accuracy table gives the expected rank sums and p-values") {
  const auto reports = compare_all(load("accuracy_c45.tsv"), "rnii");
  check_golden(reports,
               {{"fkmi", 28, 0, "0.02"},
                {"kmi", 28, 0, "0.02"},
                {"knni", 15, 0, "0.06"},
                {"wknni", 21, 0, "0.03"},
                {"svmi", 1, 14, "0.12"}},
               true);
  CHECK(reports[0].n_effective == 7);
  CHECK(reports[0].p_value == 2.0 / 128.0);
  CHECK(reports[2].p_value == 0.0625);
  CHECK(reports[3].p_value == 0.03125);
  CHECK(reports[4].p_value == 0.125);
}

TEST_CASE("GA-C4.5 accuracy table gives the expected rank sums") {
  const auto reports = compare_all(load("accuracy_gac45.tsv"), "rnii");
  check_golden(reports,
               {{"fkmi", 26, 2, ""},
                {"kmi", 28, 0, "0.02"},
                {"knni", 28, 0, "0.02"},
                {"wknni", 28, 0, "0.02"},
                {"svmi", 20, 8, ""}},
               false);
  for (std::size_t i = 1; i <= 3; ++i) CHECK(format_fixed2(reports[i].p_value) == "0.02");
  CHECK(reports[0].p_value == doctest::Approx(0.046875));
}

TEST_CASE("signed-rank basics") {
  const std::vector<double> a{1, 2, 3};
  const auto same = wilcoxon_signed_rank(a, a);
  CHECK(same.n_effective == 0);
  CHECK(same.p_value == 1.0);

  const std::vector<double> x{11, 12, 13, 14, 15, 16, 17};
  const std::vector<double> y{10, 10, 10, 10, 10, 10, 10};
  const auto r = wilcoxon_signed_rank(x, y);
  CHECK(r.n_effective == 7);
  CHECK(r.w_plus == 28);
  CHECK(r.p_value == 0.015625);

  // Tied magnitudes share the mid-rank.
  const auto ranks = signed_ranks(std::vector<double>{1, 2, 3, 4}, std::vector<double>{0, 3, 2, 4});
  CHECK(ranks.doubled == std::vector<std::uint32_t>{4, 4, 4});

  CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{1}, std::vector<double>{1, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{}, std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("critical value comes from the exact distribution") {
  // n = 6: P(T <= 0) = 2/64 = 0.03125, P(T <= 1) = 4/64 = 0.0625.
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const std::vector<double> z(6, 0.0);
  const auto r6 = wilcoxon_signed_rank(x, z);
  REQUIRE(r6.critical_value);
  CHECK(*r6.critical_value == 0.0);
  // n = 5: even T = 0 gives p = 0.0625 > 0.05.
  const auto r5 = wilcoxon_signed_rank(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>(5, 0.0));
  CHECK_FALSE(r5.critical_value);
}

TEST_CASE("p-values equal brute-force enumeration") {
  SeededRng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 1 + rng.below(12);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.below(9));
      b[i] = static_cast<double>(rng.below(9));
    }
    const auto r = wilcoxon_signed_rank(a, b);
    const auto ranked = oracle::rank_differences(a, b);
    double plus = 0, minus = 0;
    for (std::size_t j = 0; j < ranked.ranks.size(); ++j)
      (ranked.sign[j] > 0 ? plus : minus) += ranked.ranks[j];
    CHECK(r.w_plus == plus);
    CHECK(r.w_minus == minus);
    const auto m = ranked.ranks.size();
    CHECK(r.w_plus + r.w_minus == m * (m + 1) / 2.0);
    CHECK(std::abs(r.p_value - oracle::signed_rank_p(ranked.ranks, std::min(plus, minus))) < 1e-12);
    CHECK(r.p_value > 0.0);
    CHECK(r.p_value <= 1.0);

    const auto flipped = wilcoxon_signed_rank(b, a);
    CHECK(flipped.w_plus == r.w_minus);
    CHECK(flipped.p_value == r.p_value);
  }
}

TEST_CASE("p-value is monotone in the statistic") {
  const std::vector<std::uint32_t> doubled{2, 4, 6, 8, 10, 12, 14, 16};
  const SignedRankDistribution d(doubled);
  double prev = 0.0;
  for (std::uint32_t s = 0; 2 * s <= d.doubled_total(); ++s) {
    const double p = d.two_sided_p(s);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("accuracy tables") {
  const auto t = load("accuracy_c45.tsv");
  CHECK(t.datasets.size() == 9);
  CHECK(t.methods.size() == 6);
  CHECK(parse_accuracy_table(write_accuracy_table(t)).find("svmi")->by_dataset.at("IRM") == 95.33);

  AccuracyTable single;
  single.datasets = {"X"};
  single.methods = {{"rnii", {{"X", 1.0}}}};
  CHECK(compare_all(single, "rnii").empty());
  CHECK_THROWS(compare_all(single, "knni"));

  CHECK_THROWS_AS(parse_accuracy_table("method\tA\tB\nrnii\t1\n"), ParseError);
  CHECK_THROWS_AS(parse_accuracy_table("method\tA\nrnii\tabc\n"), ParseError);

  const auto deltas = accuracy_deltas(t, "rnii", "svmi");
  CHECK(deltas.front().first == "AUS");
  CHECK(deltas.front().second == doctest::Approx(86.38 - 87.25));

  nlohmann::json results;
  results["runs"] = {{{"dataset", "A"}, {"imputer", "rnii"}, {"mean", 90.0}},
                     {{"dataset", "A"}, {"imputer", "knni"}, {"mean", 85.0}}};
  const auto from = accuracy_table_from_results(results);
  CHECK(from.find("knni")->by_dataset.at("A") == 85.0);
}

TEST_CASE("two-decimal formatting") {
  CHECK(format_fixed2(0.125) == "0.12");
  CHECK(format_fixed2(0.0625) == "0.06");
  CHECK(format_fixed2(0.03125) == "0.03");
  CHECK(format_fixed2(-0.001) == "0.00");
}
