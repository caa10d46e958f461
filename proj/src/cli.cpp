#include "roadsel/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "roadsel/features.hpp"
#include "roadsel/generator.hpp"
#include "roadsel/ml/evaluation.hpp"
#include "roadsel/model_io.hpp"
#include "roadsel/oracle.hpp"
#include "roadsel/selection.hpp"
#include "roadsel/store.hpp"

namespace roadsel::cli {

using nlohmann::json;

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

/// Test files of a directory; an empty directory is a usage error.
std::vector<fs::path> test_files_or_usage(const fs::path& dir) {
  std::vector<fs::path> files = list_test_files(dir);
  if (files.empty()) throw Error(ErrorKind::usage, "no test files in " + dir.string());
  return files;
}

fs::path sibling(const fs::path& file, const char* name) {
  const fs::path parent = file.parent_path();
  return parent.empty() ? fs::path(name) : parent / name;
}

void report_failures(std::ostream& err, const std::vector<std::string>& failures, std::size_t total) {
  if (failures.empty()) return;
  err << "warning: " << failures.size() << " of " << total << " files failed:\n";
  for (const std::string& f : failures) err << "  " << f << "\n";
}

json metrics_json(const ml::Metrics& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"tp", m.confusion.tp},
          {"fp", m.confusion.fp},
          {"tn", m.confusion.tn},
          {"fn", m.confusion.fn}};
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::invalid_config:
      return kUsage;
    case ErrorKind::invalid_road:
    case ErrorKind::generation_exhausted:
    case ErrorKind::degenerate_training:
    case ErrorKind::invalid_data:
    case ErrorKind::unsupported_model:
    case ErrorKind::io:
      return kData;
  }
  return kInternal;
}

int cmd_generate_tests(const GenerateOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.count < 1) throw Error(ErrorKind::usage, "-c must be at least 1");
    GeneratorConfig cfg;
    cfg.count = static_cast<std::size_t>(opt.count);
    cfg.seed = opt.seed;
    const std::vector<RoadTest> tests = generate_tests(cfg);
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create " + opt.out_dir.string() + ": " + ec.message());
    for (const RoadTest& t : tests) write_test_file(opt.out_dir / (t.test_id + ".json"), t);
    out << "generated " << tests.size() << " tests in " << opt.out_dir.string() << "\n";
    return int{kOk};
  });
}

int cmd_label_tests(const LabelOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SimulationConfig cfg;
    cfg.rf = opt.rf;
    cfg.oob = opt.oob;
    check_config(cfg);
    const std::vector<fs::path> files = test_files_or_usage(opt.tests_dir);
    std::vector<std::string> failures;
    std::size_t unsafe = 0;
    for (const fs::path& path : files) {
      try {
        RoadTest test = read_test_file(path);
        if (test.label != Label::unlabeled) {
          err << "warning: relabeling " << path.filename().string() << "\n";
        }
        const SimulationResult r = label_test(test, cfg);
        test.label = r.label;
        test.sim_time = r.sim_time;
        test.rf = cfg.rf;
        test.oob = cfg.oob;
        write_test_file(path, test);
        unsafe += r.label == Label::unsafe ? 1 : 0;
      } catch (const Error& e) {
        failures.push_back(path.filename().string() + ": " + e.what());
      }
    }
    const std::size_t labeled = files.size() - failures.size();
    out << "labeled " << labeled << " tests (" << unsafe << " unsafe, " << labeled - unsafe << " safe)\n";
    report_failures(err, failures, files.size());
    return failures.size() == files.size() ? int{kData} : int{kOk};
  });
}

int cmd_extract_features(const ExtractOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<fs::path> files = test_files_or_usage(opt.tests_dir);
    std::vector<FeatureVector> rows;
    std::vector<std::string> failures;
    for (const fs::path& path : files) {
      try {
        rows.push_back(extract_features(read_test_file(path)));
      } catch (const Error& e) {
        failures.push_back(path.filename().string() + ": " + e.what());
      }
    }
    std::sort(rows.begin(), rows.end(),
              [](const FeatureVector& a, const FeatureVector& b) { return a.test_id < b.test_id; });
    write_text_atomic(opt.csv, format_feature_csv(rows));
    out << "wrote " << rows.size() << " rows to " << opt.csv.string() << "\n";
    report_failures(err, failures, files.size());
    return failures.empty() ? int{kOk} : int{kData};
  });
}

int cmd_evaluate_models(const EvaluateOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.k < 2) throw Error(ErrorKind::usage, "--k must be at least 2");
    const std::vector<FeatureVector> rows = parse_feature_csv(read_text(opt.csv), opt.csv.string());
    const ml::Dataset data = make_dataset(rows, true);
    const ml::Hyperparams hp;
    const ml::BenchmarkReport bench =
        ml::benchmark_all(data, hp, static_cast<std::size_t>(opt.k), opt.seed);

    out << pad("Model", 22) << pad("Precision", 11) << pad("Recall", 9) << "F1\n";
    json ranking = json::array();
    for (std::size_t i = 0; i < bench.ranking.size(); ++i) {
      const ml::BenchmarkRow& row = bench.ranking[i];
      const ml::Metrics& m = row.cv.aggregate;
      out << pad(std::string(ml::display_name(row.family)) + (i == 0 ? " *" : ""), 22)
          << pad(percent(m.precision), 11) << pad(percent(m.recall), 9) << percent(m.f1) << "\n";
      json folds = json::array();
      for (const ml::Metrics& f : row.cv.folds) folds.push_back(metrics_json(f));
      ranking.push_back({{"family", ml::to_string(row.family)},
                         {"aggregate", metrics_json(m)},
                         {"folds", std::move(folds)}});
    }
    const ml::Family best = bench.ranking.front().family;
    out << "* best: " << ml::display_name(best) << "\n";

    json report = {{"csv", opt.csv.filename().string()},
                   {"rows", data.rows()},
                   {"unsafe", data.positives()},
                   {"k", opt.k},
                   {"seed", opt.seed},
                   {"best", ml::to_string(best)},
                   {"ranking", std::move(ranking)}};
    const fs::path report_path = sibling(opt.csv, "evaluation_report.json");
    write_text_atomic(report_path, report.dump(2) + "\n");
    const fs::path model_path = sibling(opt.csv, "best_model.json");
    save_model(model_path, ml::train(best, data, hp, opt.seed));
    out << "report: " << report_path.string() << "\nmodel: " << model_path.string() << "\n";
    return int{kOk};
  });
}

int cmd_predict_tests(const PredictOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ml::TrainedModel model = load_model(opt.model);
    const std::vector<fs::path> files = test_files_or_usage(opt.tests_dir);
    std::vector<FeatureVector> rows;
    std::vector<std::string> failures;
    for (const fs::path& path : files) {
      try {
        rows.push_back(extract_features(read_test_file(path)));
      } catch (const Error& e) {
        failures.push_back(path.filename().string() + ": " + e.what());
      }
    }
    const std::vector<Prediction> preds = predict_tests(model, rows);
    std::string csv = "test_id,score,prediction\n";
    for (const Prediction& p : preds) {
      csv += p.test_id + "," + format_number(p.score) + "," + to_string(p.predicted) + "\n";
    }
    out << csv;
    write_text_atomic(opt.tests_dir / "predictions.csv", csv);
    report_failures(err, failures, files.size());
    return failures.empty() ? int{kOk} : int{kData};
  });
}

int cmd_evaluate_cost_effectiveness(const CostEffectivenessOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.top < 1) throw Error(ErrorKind::usage, "--top must be at least 1");
    if (opt.reps < 1) throw Error(ErrorKind::usage, "--reps must be at least 1");
    const std::vector<FeatureVector> rows = parse_feature_csv(read_text(opt.csv), opt.csv.string());
    const CostEffectivenessReport rep =
        evaluate_cost_effectiveness(rows, ml::kAllFamilies, static_cast<std::size_t>(opt.top),
                                    static_cast<std::size_t>(opt.reps), opt.seed);
    if (rep.k > rep.pool_size) {
      err << "warning: --top " << rep.k << " exceeds the held-out pool of " << rep.pool_size
          << " tests; selecting all\n";
    }
    out << pad("Model", 22) << pad("Guided", 10) << "Baseline\n";
    json table = json::array();
    for (const CostEffectivenessRow& row : rep.rows) {
      out << pad(ml::display_name(row.family), 22) << pad(format_per_mille(row.guided_mean), 12)
          << format_per_mille(row.baseline_mean) << "\n";
      table.push_back({{"family", ml::to_string(row.family)},
                       {"guided_mean", row.guided_mean},
                       {"baseline_mean", row.baseline_mean},
                       {"guided", format_per_mille(row.guided_mean)},
                       {"baseline", format_per_mille(row.baseline_mean)},
                       {"guided_per_repetition", row.guided},
                       {"baseline_per_repetition", row.baseline}});
    }
    json report = {{"csv", opt.csv.filename().string()},
                   {"k", rep.k},
                   {"repetitions", rep.repetitions},
                   {"seed", opt.seed},
                   {"pool_size", rep.pool_size},
                   {"models", std::move(table)}};
    const fs::path report_path = sibling(opt.csv, "cost_effectiveness.json");
    write_text_atomic(report_path, report.dump(2) + "\n");
    out << "report: " << report_path.string() << "\n";
    return int{kOk};
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Road test generation, labeling and ML-guided selection", "roadsel"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate-tests", "Generate random valid road tests");
  g->add_option("-c,--count", gen.count, "Number of tests")->required();
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("--out", gen.out_dir, "Output directory");

  LabelOptions lab;
  auto* l = app.add_subcommand("label-tests", "Run the driving oracle and label tests");
  l->add_option("-t,--tests", lab.tests_dir, "Test directory")->required();
  l->add_option("--rf", lab.rf, "Risk factor")->required();
  l->add_option("--oob", lab.oob, "Out-of-bound fraction threshold")->required();

  ExtractOptions ext;
  auto* x = app.add_subcommand("extract-features", "Write the road feature CSV");
  x->add_option("-t,--tests", ext.tests_dir, "Test directory")->required();
  x->add_option("--csv", ext.csv, "Output CSV");

  EvaluateOptions eval;
  auto* e = app.add_subcommand("evaluate-models", "Benchmark all model families");
  e->add_option("--csv", eval.csv, "Feature CSV")->required();
  e->add_option("--k", eval.k, "Cross-validation folds");
  e->add_option("--seed", eval.seed, "Random seed");

  PredictOptions pred;
  auto* p = app.add_subcommand("predict-tests", "Predict outcomes of unlabeled tests");
  p->add_option("-t,--tests", pred.tests_dir, "Test directory")->required();
  p->add_option("--model", pred.model, "Model artifact")->required();

  CostEffectivenessOptions ce;
  auto* c = app.add_subcommand("evaluate-cost-effectiveness", "Guided vs random selection");
  c->add_option("--csv", ce.csv, "Feature CSV")->required();
  c->add_option("--top", ce.top, "Tests selected per run");
  c->add_option("--reps", ce.reps, "Repetitions");
  c->add_option("--seed", ce.seed, "Random seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& pe) {
    err << "usage error: " << pe.what() << "\n";
    for (const CLI::App* sub : app.get_subcommands()) err << sub->help();
    return kUsage;
  }

  if (g->parsed()) return cmd_generate_tests(gen, out, err);
  if (l->parsed()) return cmd_label_tests(lab, out, err);
  if (x->parsed()) return cmd_extract_features(ext, out, err);
  if (e->parsed()) return cmd_evaluate_models(eval, out, err);
  if (p->parsed()) return cmd_predict_tests(pred, out, err);
  if (c->parsed()) return cmd_evaluate_cost_effectiveness(ce, out, err);
  return kUsage;
}

}  // namespace roadsel::cli
