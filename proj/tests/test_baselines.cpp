#include <cmath>
#include <numeric>

#include "doctest.h"
#include "rnimpute/baselines.hpp"
#include "rnimpute/imputer.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rnimpute;
using namespace rnimpute::baseline;
using rnimpute::testing::random_dataset;
using rnimpute::testing::RandomSpec;

namespace {

Schema xy_schema() {
  Schema s;
  s.attributes = {AttributeSpec::real("x"), AttributeSpec::real("y"),
                  AttributeSpec::nominal("class", {"p", "q"}, Role::kClass)};
  return s;
}

Cell num(double v) { return Cell(v); }

}  // namespace

TEST_CASE("mean/mode imputation") {
  Schema s;
  s.attributes = {AttributeSpec::real("x"), AttributeSpec::nominal("c", {"a", "b"}),
                  AttributeSpec::integer("n"),
                  AttributeSpec::nominal("class", {"p"}, Role::kClass)};
  Dataset ds(s);
  const Level a{0}, b{1}, p{0};
  ds.add_row({num(1), Cell(a), Cell(std::int64_t{1}), Cell(p)});
  ds.add_row({num(2), Cell(a), Cell(std::int64_t{2}), Cell(p)});
  ds.add_row({Cell::missing(), Cell(b), Cell::missing(), Cell(p)});
  ds.add_row({num(3), Cell::missing(), Cell(std::int64_t{2}), Cell(p)});
  const auto out = impute_mean_mode(ds);
  CHECK(out.at(2, 0).number() == 2.0);
  CHECK(out.at(3, 1).level() == a);
  CHECK(out.at(2, 2).value() == Value(std::int64_t{2}));

  auto empty = ds;
  for (std::size_t i = 0; i < 4; ++i) empty.set(i, 0, Cell::missing());
  CHECK_THROWS_AS(impute_mean_mode(empty), DataError);
}

TEST_CASE("knn single donor, mode and fallback") {
  Dataset ds(xy_schema());
  const Level p{0};
  ds.add_row({num(0.0), num(5.0), Cell(p)});
  ds.add_row({num(1.0), num(7.0), Cell(p)});
  ds.add_row({num(10.0), num(9.0), Cell(p)});
  ds.add_row({num(0.1), Cell::missing(), Cell(p)});
  CHECK(impute_knn(ds, {1}).at(3, 1).number() == 5.0);
  CHECK(impute_knn(ds, {3}).at(3, 1).number() == doctest::Approx(7.0));

  // Ties go to the lower record index.
  Dataset tie(xy_schema());
  tie.add_row({num(0.0), num(1.0), Cell(p)});
  tie.add_row({num(2.0), num(3.0), Cell(p)});
  tie.add_row({num(1.0), Cell::missing(), Cell(p)});
  CHECK(impute_knn(tie, {1}).at(2, 1).number() == 1.0);

  // No shared column: fall back to the column mean.
  Dataset lone(xy_schema());
  lone.add_row({Cell::missing(), num(4.0), Cell(p)});
  lone.add_row({Cell::missing(), num(6.0), Cell(p)});
  lone.add_row({num(1.0), Cell::missing(), Cell(p)});
  CHECK(impute_knn(lone, {2}).at(2, 1).number() == 5.0);
}

TEST_CASE("knn nominal mode over donors") {
  Schema s;
  s.attributes = {AttributeSpec::real("x"), AttributeSpec::nominal("c", {"u", "v", "w"}),
                  AttributeSpec::nominal("class", {"p"}, Role::kClass)};
  Dataset ds(s);
  const Level p{0};
  ds.add_row({num(0.0), Cell(Level{2}), Cell(p)});
  ds.add_row({num(0.1), Cell(Level{2}), Cell(p)});
  ds.add_row({num(0.2), Cell(Level{0}), Cell(p)});
  ds.add_row({num(5.0), Cell(Level{1}), Cell(p)});
  ds.add_row({num(0.05), Cell::missing(), Cell(p)});
  CHECK(impute_knn(ds, {3}).at(4, 1).level() == Level{2});
}

TEST_CASE("weighted knn") {
  Dataset ds(xy_schema());
  const Level p{0};
  // Distances from the target at x=0: 0.1 and 0.4 after scaling by range 1.
  ds.add_row({num(0.1), num(2.0), Cell(p)});
  ds.add_row({num(0.4), num(4.0), Cell(p)});
  ds.add_row({num(1.0), num(100.0), Cell(p)});
  ds.add_row({num(0.0), Cell::missing(), Cell(p)});
  CHECK(impute_wknn(ds, {2}).at(3, 1).number() == doctest::Approx(2.4));

  Dataset eq(xy_schema());
  eq.add_row({num(-1.0), num(2.0), Cell(p)});
  eq.add_row({num(1.0), num(4.0), Cell(p)});
  eq.add_row({num(0.0), Cell::missing(), Cell(p)});
  CHECK(impute_wknn(eq, {2}).at(2, 1).number() == doctest::Approx(3.0));

  Dataset exact(xy_schema());
  exact.add_row({num(0.0), num(7.0), Cell(p)});
  exact.add_row({num(1.0), num(4.0), Cell(p)});
  exact.add_row({num(0.0), Cell::missing(), Cell(p)});
  CHECK(impute_wknn(exact, {2}).at(2, 1).number() == 7.0);
}

TEST_CASE("knn equals the exhaustive oracle") {
  RandomSpec spec;
  spec.max_records = 15;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    CAPTURE(seed);
    const auto ds = random_dataset(seed, spec);
    for (std::size_t k : {1, 3, 10}) CHECK(impute_knn(ds, {k}) == oracle::knn(ds, k));
  }
}

TEST_CASE("kmeans") {
  Dataset ds(xy_schema());
  const Level p{0};
  // Two separated blobs.
  for (double x : {0.0, 0.1, 0.2, 0.15}) ds.add_row({num(x), num(x + 1.0), Cell(p)});
  for (double x : {10.0, 10.1, 10.2}) ds.add_row({num(x), num(x + 1.0), Cell(p)});
  ds.add_row({Cell::missing(), num(1.1), Cell(p)});
  const auto out = impute_kmeans(ds, {2, 100, 0.0}, 3);
  CHECK(out.at(7, 0).number() >= 0.0);
  CHECK(out.at(7, 0).number() <= 0.2);

  // k = 1 reduces to mean/mode.
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = random_dataset(seed);
    CHECK(impute_kmeans(r, {1, 100, 0.0}, seed) == impute_mean_mode(r));
  }

  CHECK_THROWS_AS(impute_kmeans(ds, {9, 100, 0.0}, 1), DataError);
  CHECK_THROWS_AS(validate(KMeansParams{0, 100, 0.0}), DataError);

  const Embedding e(ds);
  const auto km = kmeans_cluster(e, {2, 100, 0.0}, 3);
  for (std::size_t i = 1; i < km.dissimilarity.size(); ++i)
    CHECK(km.dissimilarity[i] <= km.dissimilarity[i - 1] + 1e-12);
}

TEST_CASE("fuzzy memberships") {
  const std::vector<double> sq{1.0, 4.0};
  const auto u = fuzzy_memberships(sq, 2.0);
  CHECK(u[0] == doctest::Approx(0.8));
  CHECK(u[1] == doctest::Approx(0.2));

  const auto on = fuzzy_memberships(std::vector<double>{0.0, 4.0, 1.0}, 1.5);
  CHECK(on == std::vector<double>{1.0, 0.0, 0.0});
  const auto two = fuzzy_memberships(std::vector<double>{0.0, 0.0, 1.0}, 1.5);
  CHECK(two == std::vector<double>{0.5, 0.5, 0.0});
}

TEST_CASE("fuzzy k-means") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CAPTURE(seed);
    RandomSpec spec;
    spec.min_records = 6;
    const auto ds = random_dataset(seed, spec);
    const Embedding e(ds);
    const auto f = fuzzy_cluster(e, {3, 1.5, 100, 0.0}, seed);
    for (double err : f.row_sum_error) CHECK(err < 1e-9);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (double u : f.membership.row(i)) {
        CHECK(u >= 0.0);
        CHECK(u <= 1.0);
      }

    // k = 1: every numeric fill is the column mean.
    const auto one = impute_fuzzy_kmeans(ds, {1, 1.5, 100, 0.0}, seed);
    const auto mm = impute_mean_mode(ds);
    for (std::size_t i = 0; i < ds.record_count(); ++i)
      for (std::size_t j = 0; j < ds.schema().input_count(); ++j)
        if (ds.at(i, j).is_missing() && ds.schema()[j].is_real())
          CHECK(one.at(i, j).number() == doctest::Approx(mm.at(i, j).number()));
  }
  CHECK_THROWS_AS(validate(FkmParams{3, 1.0, 100, 0.0}), DataError);
}

TEST_CASE("imputer registry") {
  const auto names = imputer_names();
  for (const char* n : {"fkmi", "kmi", "knni", "mean", "rnii", "wknni"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  CHECK_THROWS_AS(make_imputer("svmi"), UnknownImputer);
  CHECK_THROWS_AS(make_imputer("knni", {{"kk", "3"}}), DataError);
  CHECK_THROWS_AS(make_imputer("knni", {{"k", "three"}}), DataError);
  CHECK(make_imputer("fkmi", {{"m", "2"}})->params().at("m") == "2");
  CHECK(make_imputer("kmi")->params().at("k") == "10");
  CHECK(make_imputer("fkmi")->params().at("k") == "3");
  CHECK(make_imputer("fkmi")->params().at("m") == "1.5");
}
