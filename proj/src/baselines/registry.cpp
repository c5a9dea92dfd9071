#include <charconv>
#include <mutex>

#include "rnimpute/imputer.hpp"
#include "rnimpute/rni.hpp"

namespace rnimpute {
namespace {

template <typename T>
T parse_param(const ParamMap& params, const std::string& key, T fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const auto& s = it->second;
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw DataError("bad value '" + s + "' for parameter '" + key + "'");
  return v;
}

void reject_unknown(const ParamMap& params, std::initializer_list<std::string_view> known,
                    std::string_view imputer) {
  for (const auto& [key, _] : params) {
    bool ok = false;
    for (auto k : known) ok = ok || k == key;
    if (!ok)
      throw DataError("imputer '" + std::string(imputer) + "' has no parameter '" + key + "'");
  }
}

std::string text(double v) { return format_number(v); }
std::string text(std::size_t v) { return std::to_string(v); }

class MeanModeImputer final : public Imputer {
 public:
  std::string name() const override { return "mean"; }
  Dataset impute(const Dataset& ds, std::uint64_t) const override {
    return baseline::impute_mean_mode(ds);
  }
  ParamMap params() const override { return {}; }
};

class RniImputer final : public Imputer {
 public:
  std::string name() const override { return "rnii"; }
  Dataset impute(const Dataset& ds, std::uint64_t) const override {
    return rni::impute_dataset_rnii(ds);
  }
  ParamMap params() const override { return {}; }
};

class KnnImputer final : public Imputer {
 public:
  KnnImputer(baseline::KnnParams p, bool weighted) : p_(p), weighted_(weighted) {
    baseline::validate(p_);
  }
  std::string name() const override { return weighted_ ? "wknni" : "knni"; }
  Dataset impute(const Dataset& ds, std::uint64_t) const override {
    return weighted_ ? baseline::impute_wknn(ds, p_) : baseline::impute_knn(ds, p_);
  }
  ParamMap params() const override { return {{"k", text(p_.k)}}; }

 private:
  baseline::KnnParams p_;
  bool weighted_;
};

class KMeansImputer final : public Imputer {
 public:
  explicit KMeansImputer(baseline::KMeansParams p) : p_(p) { baseline::validate(p_); }
  std::string name() const override { return "kmi"; }
  Dataset impute(const Dataset& ds, std::uint64_t seed) const override {
    return baseline::impute_kmeans(ds, p_, seed);
  }
  ParamMap params() const override {
    return {{"k", text(p_.k)},
            {"iterations", text(p_.max_iterations)},
            {"error", text(p_.convergence_epsilon)}};
  }

 private:
  baseline::KMeansParams p_;
};

class FuzzyImputer final : public Imputer {
 public:
  explicit FuzzyImputer(baseline::FkmParams p) : p_(p) { baseline::validate(p_); }
  std::string name() const override { return "fkmi"; }
  Dataset impute(const Dataset& ds, std::uint64_t seed) const override {
    return baseline::impute_fuzzy_kmeans(ds, p_, seed);
  }
  ParamMap params() const override {
    return {{"k", text(p_.k)},
            {"m", text(p_.fuzzifier)},
            {"iterations", text(p_.max_iterations)},
            {"error", text(p_.convergence_epsilon)}};
  }

 private:
  baseline::FkmParams p_;
};

struct Registry {
  std::mutex mu;
  std::map<std::string, ImputerFactory, std::less<>> factories;

  Registry() {
    factories["mean"] = [](const ParamMap& p) {
      reject_unknown(p, {}, "mean");
      return std::make_unique<MeanModeImputer>();
    };
    factories["rnii"] = [](const ParamMap& p) {
      reject_unknown(p, {}, "rnii");
      return std::make_unique<RniImputer>();
    };
    factories["knni"] = [](const ParamMap& p) {
      reject_unknown(p, {"k"}, "knni");
      return std::make_unique<KnnImputer>(
          baseline::KnnParams{parse_param<std::size_t>(p, "k", 10)}, false);
    };
    factories["wknni"] = [](const ParamMap& p) {
      reject_unknown(p, {"k"}, "wknni");
      return std::make_unique<KnnImputer>(
          baseline::KnnParams{parse_param<std::size_t>(p, "k", 10)}, true);
    };
    factories["kmi"] = [](const ParamMap& p) {
      reject_unknown(p, {"k", "iterations", "error"}, "kmi");
      baseline::KMeansParams kp;
      kp.k = parse_param(p, "k", kp.k);
      kp.max_iterations = parse_param(p, "iterations", kp.max_iterations);
      kp.convergence_epsilon = parse_param(p, "error", kp.convergence_epsilon);
      return std::make_unique<KMeansImputer>(kp);
    };
    factories["fkmi"] = [](const ParamMap& p) {
      reject_unknown(p, {"k", "m", "iterations", "error"}, "fkmi");
      baseline::FkmParams fp;
      fp.k = parse_param(p, "k", fp.k);
      fp.fuzzifier = parse_param(p, "m", fp.fuzzifier);
      fp.max_iterations = parse_param(p, "iterations", fp.max_iterations);
      fp.convergence_epsilon = parse_param(p, "error", fp.convergence_epsilon);
      return std::make_unique<FuzzyImputer>(fp);
    };
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_imputer(const std::string& name, ImputerFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.factories[name] = std::move(factory);
}

std::unique_ptr<Imputer> make_imputer(std::string_view name, const ParamMap& overrides) {
  auto& r = registry();
  ImputerFactory f;
  {
    std::lock_guard lock(r.mu);
    const auto it = r.factories.find(name);
    if (it == r.factories.end()) throw UnknownImputer(name);
    f = it->second;
  }
  return f(overrides);
}

std::vector<std::string> imputer_names() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  std::vector<std::string> out;
  for (const auto& [name, _] : r.factories) out.push_back(name);
  return out;
}

}  // namespace rnimpute
