#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rnimpute/cli.hpp"
#include "rnimpute/dataset.hpp"
#include "rnimpute/experiment.hpp"
#include "rnimpute/imputer.hpp"
#include "rnimpute/wilcoxon.hpp"

namespace rnimpute::cli {
namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::vector<std::string> inputs;
  std::vector<std::string> methods;
  std::vector<std::string> params;  // method.key=value or key=value
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::string output;
  std::optional<double> rate;
  std::string reference = "rnii";
  std::string test_imputation = "independent";
  bool json = false;
};

// Splits "method.key=value" / "key=value" overrides into per-method maps.
// Unqualified keys apply to `default_method` when given.
std::map<std::string, ParamMap> group_params(const std::vector<std::string>& specs,
                                             const std::string& default_method) {
  std::map<std::string, ParamMap> out;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw DataError("parameter '" + spec + "' is not of the form key=value");
    auto key = spec.substr(0, eq);
    const auto value = spec.substr(eq + 1);
    std::string method = default_method;
    if (const auto dot = key.find('.'); dot != std::string::npos) {
      method = key.substr(0, dot);
      key = key.substr(dot + 1);
    }
    if (method.empty())
      throw DataError("parameter '" + spec + "' must name its imputer as method.key=value");
    out[method][key] = value;
  }
  return out;
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string summary_text(const std::string& name, const DatasetSummary& s) {
  std::ostringstream o;
  o << name << ": " << s.input_attributes() << " attributes (" << s.real_attributes << '/'
    << s.integer_attributes << '/' << s.nominal_attributes << "), " << s.example_count
    << " examples, " << s.class_count << " classes, " << stats::format_fixed2(s.mv_percent)
    << "% MV, " << stats::format_fixed2(s.mv_example_percent) << "% incomplete examples\n";
  return o.str();
}

int cmd_impute(const RunConfig& cfg, std::ostream& out) {
  const auto ds = read_keel_dat_file(cfg.inputs.at(0));
  const auto method = cfg.methods.at(0);
  const auto grouped = group_params(cfg.params, method);
  const auto it = grouped.find(method);
  const auto imputer = make_imputer(method, it == grouped.end() ? ParamMap{} : it->second);
  const auto done = imputer->impute(ds, cfg.seed);
  write_keel_dat_file(done, cfg.output);

  out << "imputed " << ds.missing_count() << " cells with " << imputer->name() << '\n';
  for (std::size_t j = 0; j < ds.schema().input_count(); ++j) {
    std::size_t n = 0;
    for (const auto& row : ds.rows()) n += row[j].is_missing() ? 1 : 0;
    out << ds.schema()[j].name << '\t' << n << '\n';
  }
  return 0;
}

int cmd_inject(const RunConfig& cfg, std::ostream& out) {
  const auto ds = read_keel_dat_file(cfg.inputs.at(0));
  const auto injected = inject_mcar(ds, cfg.rate.value_or(0.0), cfg.seed);
  write_keel_dat_file(injected, cfg.output);
  out << summary_text(stem(cfg.output), summarize(injected));
  return 0;
}

int cmd_summarize(const RunConfig& cfg, std::ostream& out) {
  for (const auto& path : cfg.inputs) {
    const auto s = summarize(read_keel_dat_file(path));
    if (cfg.json) out << summary_to_json(s, stem(path)) << '\n';
    else out << summary_text(stem(path), s);
  }
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.methods.empty()) throw DataError("evaluate needs at least one --method");
  const auto grouped = group_params(cfg.params, cfg.methods.size() == 1 ? cfg.methods[0] : "");
  for (const auto& [method, _] : grouped)
    if (std::find(cfg.methods.begin(), cfg.methods.end(), method) == cfg.methods.end())
      throw DataError("parameters given for '" + method + "', which is not being evaluated");
  std::vector<std::unique_ptr<Imputer>> imputers;
  for (const auto& m : cfg.methods) {
    const auto it = grouped.find(m);
    imputers.push_back(make_imputer(m, it == grouped.end() ? ParamMap{} : it->second));
  }

  ExperimentConfig ec;
  ec.folds = cfg.folds;
  ec.seed = cfg.seed;
  if (cfg.test_imputation == "joint") ec.test_imputation = TestImputation::kJoint;
  else if (cfg.test_imputation != "independent")
    throw DataError("--test-imputation must be 'independent' or 'joint'");

  nlohmann::ordered_json results;
  results["runs"] = nlohmann::ordered_json::array();
  nlohmann::ordered_json summaries = nlohmann::ordered_json::array();
  stats::AccuracyTable table;
  for (const auto& m : cfg.methods) table.methods.push_back({m, {}});

  bool failed = false;
  for (const auto& path : cfg.inputs) {
    auto ds = read_keel_dat_file(path);
    const auto name = stem(path);
    if (cfg.rate) ds = inject_mcar(ds, *cfg.rate, cfg.seed);
    const auto s = summarize(ds);
    out << summary_text(name, s);
    summaries.push_back(nlohmann::ordered_json::parse(summary_to_json(s, name)));
    table.datasets.push_back(name);
    for (std::size_t k = 0; k < imputers.size(); ++k) {
      try {
        const auto r = run_experiment(ds, *imputers[k], ec, name);
        results["runs"].push_back(to_json(r));
        table.methods[k].by_dataset[name] = r.mean;
      } catch (const std::exception& e) {
        err << "error: dataset " << name << ", imputer " << cfg.methods[k] << ": " << e.what()
            << '\n';
        failed = true;
      }
    }
  }

  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  write_text(dir / "results.json", results.dump(2) + "\n");
  write_text(dir / "summary.json", summaries.dump(2) + "\n");
  if (!failed) {
    const auto tsv = stats::write_accuracy_table(table);
    write_text(dir / "accuracy.tsv", tsv);
    out << tsv;
  }
  return failed ? 1 : 0;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const auto& path = cfg.inputs.at(0);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  stats::AccuracyTable table;
  if (fs::path(path).extension() == ".json") {
    table = stats::accuracy_table_from_results(nlohmann::json::parse(in));
  } else {
    try {
      table = stats::parse_accuracy_table(in);
    } catch (const ParseError& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
  }
  const auto reports = stats::compare_all(table, cfg.reference, cfg.alpha);
  const auto text = stats::render_report_table(reports);
  out << text;

  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  nlohmann::ordered_json j;
  j["reference"] = cfg.reference;
  j["alpha"] = cfg.alpha;
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) j["reports"].push_back(stats::to_json(r));
  write_text(dir / "wilcoxon.json", j.dump(2) + "\n");
  write_text(dir / "wilcoxon.txt", text);
  for (const auto& r : reports) {
    std::string tsv = "dataset\tdelta\n";
    for (const auto& [ds, d] : stats::accuracy_deltas(table, cfg.reference, r.method))
      tsv += ds + '\t' + stats::format_fixed2(d) + '\n';
    write_text(dir / ("delta_" + r.method + ".tsv"), tsv);
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Missing-value imputation and classifier evaluation"};
  app.require_subcommand(1);
  // Config files are read by the root app; keys go under a [evaluate] section.
  app.set_config("--config", "", "TOML-style configuration file");
  app.fallthrough();
  RunConfig cfg;

  const auto names = imputer_names();
  const auto add_params = [&](CLI::App* sub) {
    sub->add_option("--param", cfg.params, "Imputer parameter override, [method.]key=value");
  };

  auto* impute = app.add_subcommand("impute", "Fill the missing cells of a Keel DAT file");
  impute->add_option("--in", cfg.inputs, "Input DAT file")->required()->expected(1);
  impute->add_option("--method", cfg.methods, "Imputer")->required()->expected(1);
  impute->add_option("--out", cfg.output, "Output DAT file")->required();
  impute->add_option("--seed", cfg.seed, "Seed for randomized imputers");
  add_params(impute);

  auto* inject = app.add_subcommand("inject", "Mask observed input cells completely at random");
  inject->add_option("--in", cfg.inputs, "Input DAT file")->required()->expected(1);
  inject->add_option("--out", cfg.output, "Output DAT file")->required();
  inject->add_option("--rate", cfg.rate, "Masking probability in [0, 1]")->required();
  inject->add_option("--seed", cfg.seed, "Seed");

  auto* summarize_cmd = app.add_subcommand("summarize", "Print dataset summary statistics");
  summarize_cmd->add_option("--in", cfg.inputs, "Input DAT files")->required();
  summarize_cmd->add_flag("--json", cfg.json, "Emit JSON");

  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated C4.5 accuracy per imputer");
  evaluate->add_option("--in", cfg.inputs, "Input DAT files")->required();
  evaluate->add_option("--method", cfg.methods, "Imputers to evaluate")->required();
  evaluate->add_option("--folds", cfg.folds, "Fold count")->check(CLI::Range(2, 1000));
  evaluate->add_option("--seed", cfg.seed, "Seed for folds, injection and imputers");
  evaluate->add_option("--rate", cfg.rate, "Inject MCAR missingness first")
      ->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--out", cfg.output, "Output directory")->required();
  evaluate->add_option("--test-imputation", cfg.test_imputation,
                       "independent (default) or joint");
  add_params(evaluate);

  auto* compare = app.add_subcommand("compare", "Wilcoxon signed-rank comparison against a reference");
  compare->add_option("--in", cfg.inputs, "results.json or accuracy TSV")->required()->expected(1);
  compare->add_option("--reference", cfg.reference, "Reference method");
  compare->add_option("--alpha", cfg.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  compare->add_option("--out", cfg.output, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    for (const auto& m : cfg.methods)
      if (std::find(names.begin(), names.end(), m) == names.end()) throw UnknownImputer(m);
    if (*impute) return cmd_impute(cfg, out);
    if (*inject) return cmd_inject(cfg, out);
    if (*summarize_cmd) return cmd_summarize(cfg, out);
    if (*evaluate) return cmd_evaluate(cfg, out, err);
    if (*compare) return cmd_compare(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace rnimpute::cli
