// Command-line front end: train, eval, sweep, landscape, project, gen-data, model.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperseed.hpp"

#ifndef HYPERSEED_DATA_DIR
#define HYPERSEED_DATA_DIR "data"
#endif

namespace hs = hyperseed;
namespace hh = hyperseed::harness;
using json = nlohmann::json;

namespace {

/// Writes `text` to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw hs::DataError(path + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw hs::DataError(path + ": write failure");
}

std::vector<hs::GridCoord> parse_targets(const std::string& text) {
  std::vector<hs::GridCoord> targets;
  std::stringstream list(text);
  std::string item;
  while (std::getline(list, item, ';')) {
    if (item.empty()) continue;
    const auto comma = item.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("no comma");
      targets.push_back({std::stoul(item.substr(0, comma)), std::stoul(item.substr(comma + 1))});
    } catch (const std::exception&) {
      throw hs::ConfigError("train.targets", "expected 'i,j;i,j;...', got '" + item + "'");
    }
  }
  return targets;
}

/// Preset, config file and per-field flags; flags are collected as a merge-patch.
struct ExperimentOptions {
  std::string preset;
  std::string config_file;
  json patch = json::object();

  void attach(CLI::App* app) {
    app->add_option("--preset", preset, "Start from built-in defaults")
        ->check(CLI::IsMember({"iris", "fcps", "languages"}));
    app->add_option("--config", config_file, "JSON config file (overrides the preset)")->check(CLI::ExistingFile);
    field<std::string>(app, "--data-kind", "data", "kind", "csv | fcps | corpus");
    field<std::string>(app, "--data-path", "data", "path", "CSV file");
    field<std::string>(app, "--label-column", "data", "label_column", "CSV label column (name or index)");
    field<std::string>(app, "--data-name", "data", "name", "FCPS dataset name");
    field<std::size_t>(app, "--n-points", "data", "n_points", "FCPS points (0 = original size)");
    field<double>(app, "--train-fraction", "data", "train_fraction", "Stratified training fraction");
    field<std::string>(app, "--train-dir", "data", "train_dir", "Corpus training directory");
    field<std::string>(app, "--test-dir", "data", "test_dir", "Corpus test directory");
    app->add_option_function<std::vector<std::string>>(
           "--languages", [this](const std::vector<std::string>& v) { patch["data"]["languages"] = v; },
           "Corpus languages (comma separated)")
        ->delimiter(',');
    field<std::size_t>(app, "--chunk-length", "data", "chunk_length", "Training chunk length in symbols");
    field<std::size_t>(app, "--max-train-per-class", "data", "max_train_per_class", "Corpus chunk cap per class");
    field<std::size_t>(app, "--max-test-per-class", "data", "max_test_per_class", "Corpus sentence cap per class");
    field<std::size_t>(app, "--q", "encoder", "q", "Quantization levels");
    field<double>(app, "--epsilon-d", "encoder", "epsilon_d", "Data FPE bandwidth");
    field<std::size_t>(app, "--ngram-n", "encoder", "ngram_n", "n-gram order");
    field<std::size_t>(app, "--map-n", "map", "n", "Map rows");
    field<std::size_t>(app, "--map-m", "map", "m", "Map columns");
    field<double>(app, "--epsilon-p", "map", "epsilon_p", "Map FPE bandwidth");
    field<std::size_t>(app, "--d", "train", "d", "Dimensionality");
    field<std::size_t>(app, "--iterations", "train", "iterations", "Updates (0 = three per class)");
    field<std::size_t>(app, "--num-seeds", "train", "num_seeds", "Seed vectors");
    field<std::string>(app, "--strategy", "train", "strategy", "random | corners | fixed");
    app->add_option_function<std::string>(
        "--targets",
        [this](const std::string& v) {
          json list = json::array();
          for (const auto& t : parse_targets(v)) list.push_back({t.i, t.j});
          patch["train"]["targets"] = list;
        },
        "Fixed targets 'i,j;i,j;...'");
    field<bool>(app, "--renormalize", "train", "renormalize", "Renormalize seeds after each update (true/false)");
    field<std::uint64_t>(app, "--seed", "run", "seed", "Master seed");
    field<std::size_t>(app, "--repeats", "run", "repeats", "Repeats");
    field<std::string>(app, "--select", "run", "select", "best | mean");
    field<bool>(app, "--record-timing", "run", "record_timing", "Add wall-clock time to the report (true/false)");
  }

  template <class T>
  void field(CLI::App* app, const std::string& flag, const char* section, const char* key, const std::string& help) {
    app->add_option_function<T>(
        flag, [this, section, key](const T& v) { patch[section][key] = v; }, help);
  }

  json layered() const {
    json base = json::object();
    if (preset == "iris") {
      base = hh::iris_preset(HYPERSEED_DATA_DIR);
    } else if (preset == "fcps") {
      base = hh::fcps_preset("atom");
    } else if (preset == "languages") {
      base = hh::languages_preset("", "");
    }
    if (!config_file.empty()) base = hh::layer(base, hh::read_json_file(config_file));
    return hh::layer(base, patch);
  }

  hh::ExperimentConfig resolve() const { return hh::parse_config(layered()); }
};

struct DataInput {
  std::string csv;
  std::string label_column;
  std::string test_dir;
  std::vector<std::string> languages;

  void attach(CLI::App* app) {
    auto* csv_opt = app->add_option("--data-csv", csv, "Labeled CSV to evaluate")->check(CLI::ExistingFile);
    app->add_option("--label-column", label_column, "CSV label column (name or index)");
    auto* dir_opt = app->add_option("--test-dir", test_dir, "Directory-per-language test sentences")
                        ->check(CLI::ExistingDirectory);
    app->add_option("--languages", languages, "Languages to read (comma separated)")->delimiter(',');
    csv_opt->excludes(dir_opt);
  }

  hs::LabeledSamples encode(const hh::TrainedModel& model) const {
    if (!csv.empty()) return hh::encode_for_model(model, hh::load_csv_dataset(csv, label_column));
    if (!test_dir.empty()) {
      hh::CorpusOptions opts;
      opts.languages = languages;
      if (const auto* g = std::get_if<hs::NgramEncoder>(&model.encoder)) opts.min_sentence = g->order();
      return hh::encode_for_model(model, hh::load_test_corpus(test_dir, opts));
    }
    throw hs::InvalidArgument("one of --data-csv or --test-dir is required");
  }
};

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream list(text);
  std::string item;
  while (std::getline(list, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw hs::ConfigError(what, "bad number '" + item + "'");
    }
  }
  if (out.empty()) throw hs::ConfigError(what, "empty list");
  return out;
}

std::vector<std::size_t> parse_counts(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  for (double v : parse_doubles(text, what)) {
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw hs::ConfigError(what, "expected non-negative integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::string projection_csv(const std::vector<hs::ProjectionRow>& rows, const std::vector<std::string>& names) {
  std::ostringstream out;
  hs::write_projection_csv(out, rows, names);
  return out.str();
}

std::vector<hh::TargetMark> target_marks(const hh::TrainedModel& model) {
  std::vector<hh::TargetMark> marks;
  for (const auto& step : model.trace) marks.push_back({step.target, std::nullopt});
  return marks;
}

json model_summary(const hh::TrainedModel& model) {
  const auto names = model.labels.label_names();
  return {{"d", model.map.dim()},
          {"map", {model.map.rows(), model.map.cols()}},
          {"epsilon_p", model.map.epsilon_p()},
          {"encoder", std::holds_alternative<hs::FeatureEncoder>(model.encoder) ? "features" : "ngram"},
          {"num_seeds", model.state.size()},
          {"updates", model.state.updates_done()},
          {"labeled_nodes", model.labels.labeled_nodes().size()},
          {"classes", std::vector<std::string>(names.begin(), names.end())},
          {"run_seed", model.run_seed}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperseed: unsupervised learning with phasor hypervectors"};
  app.require_subcommand(1);

  // train
  ExperimentOptions train_opts;
  std::string report_out, model_out, projection_out, svg_out;
  bool print_config = false;
  auto* train_cmd = app.add_subcommand("train", "Run an experiment and write its report");
  train_opts.attach(train_cmd);
  train_cmd->add_option("--report", report_out, "Report file (default: stdout)");
  train_cmd->add_option("--model-out", model_out, "Save the selected run's model");
  train_cmd->add_option("--projection-out", projection_out, "Test-set projection CSV of the selected run");
  train_cmd->add_option("--svg", svg_out, "Test-set projection plot of the selected run");
  train_cmd->add_flag("--print-config", print_config, "Print the resolved config and exit");

  // eval
  std::string eval_model, eval_report;
  DataInput eval_data;
  auto* eval_cmd = app.add_subcommand("eval", "Classify labeled data with a saved model");
  eval_cmd->add_option("--model", eval_model, "Model file")->required()->check(CLI::ExistingFile);
  eval_data.attach(eval_cmd);
  eval_cmd->add_option("--report", eval_report, "Report file (default: stdout)");

  // sweep
  ExperimentOptions sweep_opts;
  std::string axis_name, values_text, q_values_text, eps_values_text, sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run one experiment per axis value and write a CSV table");
  sweep_opts.attach(sweep_cmd);
  sweep_cmd->add_option("--axis", axis_name, "iterations | dimensionality | num_seeds | epsilon_q")->required();
  sweep_cmd->add_option("--values", values_text, "Axis values (comma separated)");
  sweep_cmd->add_option("--q-values", q_values_text, "epsilon_q: quantization levels");
  sweep_cmd->add_option("--eps-values", eps_values_text, "epsilon_q: bandwidths");
  sweep_cmd->add_option("--out", sweep_out, "CSV file (default: stdout)");

  // landscape
  std::size_t land_n = 50, land_m = 50, land_d = 10000;
  double land_eps = 0.05;
  std::uint64_t land_seed = 1;
  std::string land_target = "15,15", land_out;
  auto* land_cmd = app.add_subcommand("landscape", "Similarity of every map node to one target node");
  land_cmd->add_option("--n", land_n, "Map rows")->capture_default_str();
  land_cmd->add_option("--m", land_m, "Map columns")->capture_default_str();
  land_cmd->add_option("--epsilon-p", land_eps, "Map FPE bandwidth")->capture_default_str();
  land_cmd->add_option("--d", land_d, "Dimensionality")->capture_default_str();
  land_cmd->add_option("--seed", land_seed, "Seed for the map bases")->capture_default_str();
  land_cmd->add_option("--target", land_target, "Target node 'i,j'")->capture_default_str();
  land_cmd->add_option("--out", land_out, "CSV file (default: stdout)");

  // project
  std::string proj_model, proj_out, proj_svg;
  DataInput proj_data;
  auto* proj_cmd = app.add_subcommand("project", "Project labeled data onto a saved model's map");
  proj_cmd->add_option("--model", proj_model, "Model file")->required()->check(CLI::ExistingFile);
  proj_data.attach(proj_cmd);
  proj_cmd->add_option("--out", proj_out, "CSV file (default: stdout)");
  proj_cmd->add_option("--svg", proj_svg, "Scatter plot file");

  // gen-data
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate synthetic datasets");
  gen_cmd->require_subcommand(1);
  std::string fcps_name = "atom", fcps_out;
  std::size_t fcps_points = 0;
  std::uint64_t fcps_seed = 1;
  auto* fcps_cmd = gen_cmd->add_subcommand("fcps", "FCPS-like point cloud as CSV");
  fcps_cmd->add_option("--name", fcps_name, "Dataset")
      ->check(CLI::IsMember(std::vector<std::string>(hh::kFcpsNames.begin(), hh::kFcpsNames.end())))
      ->capture_default_str();
  fcps_cmd->add_option("--n-points", fcps_points, "Points (0 = original size)")->capture_default_str();
  fcps_cmd->add_option("--seed", fcps_seed, "Master seed (same dataset as an experiment with this seed)")
      ->capture_default_str();
  fcps_cmd->add_option("--out", fcps_out, "CSV file (default: stdout)");

  std::string stats_dir = std::string(HYPERSEED_DATA_DIR) + "/langstats", corpus_out;
  std::vector<std::string> corpus_langs;
  hh::CorpusGenerationOptions corpus_opts;
  std::uint64_t corpus_seed = 1;
  auto* corpus_cmd = gen_cmd->add_subcommand("corpus", "Synthetic directory-per-language corpus");
  corpus_cmd->add_option("--stats-dir", stats_dir, "Directory of <lang>.tsv trigram tables")->capture_default_str();
  corpus_cmd->add_option("--languages", corpus_langs, "Languages (default: every table)")->delimiter(',');
  corpus_cmd->add_option("--train-chunks", corpus_opts.train_chunks, "Training chunks per language")
      ->capture_default_str();
  corpus_cmd->add_option("--chunk-length", corpus_opts.chunk_length, "Symbols per chunk")->capture_default_str();
  corpus_cmd->add_option("--test-sentences", corpus_opts.test_sentences, "Test sentences per language")
      ->capture_default_str();
  corpus_cmd->add_option("--seed", corpus_seed, "Seed")->capture_default_str();
  corpus_cmd->add_option("--out", corpus_out, "Output directory (gets train/ and test/)")->required();

  // model save / load
  auto* model_cmd = app.add_subcommand("model", "Save or inspect model files");
  model_cmd->require_subcommand(1);
  ExperimentOptions save_opts;
  std::string save_out;
  auto* save_cmd = model_cmd->add_subcommand("save", "Train and save the selected run's model");
  save_opts.attach(save_cmd);
  save_cmd->add_option("--out", save_out, "Model file")->required();
  std::string load_in, load_out;
  auto* load_cmd = model_cmd->add_subcommand("load", "Validate a model file and print a summary");
  load_cmd->add_option("file", load_in, "Model file")->required()->check(CLI::ExistingFile);
  load_cmd->add_option("--out", load_out, "Write the model back out");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      if (print_config) {
        emit("-", hh::to_json(train_opts.resolve()).dump(2) + "\n");
        return 0;
      }
      const auto cfg = train_opts.resolve();
      const bool keep = !model_out.empty() || !projection_out.empty() || !svg_out.empty();
      auto outcome = hh::run_experiment(cfg, keep);
      emit(report_out, hh::to_json(outcome.report).dump(2) + "\n");
      if (keep) {
        const auto& model = *outcome.model;
        if (!model_out.empty()) hh::save_model(model_out, model);
        if (!projection_out.empty() || !svg_out.empty()) {
          const auto rows = hs::export_projection(model.state, model.map, model.labels, *outcome.test);
          if (!projection_out.empty()) emit(projection_out, projection_csv(rows, outcome.test->names));
          if (!svg_out.empty()) {
            hh::render_projection(svg_out, rows, outcome.test->names, model.map.rows(), model.map.cols(),
                                  target_marks(model));
          }
        }
      }
    } else if (*eval_cmd) {
      const auto model = hh::load_model(eval_model);
      const auto ev = hh::evaluate(model, eval_data.encode(model));
      emit(eval_report, hh::to_json(ev, model).dump(2) + "\n");
    } else if (*sweep_cmd) {
      const auto cfg = sweep_opts.resolve();
      const auto axis = hh::parse_sweep_axis(axis_name);
      std::vector<hh::SweepPoint> points;
      if (axis == hh::SweepAxis::EpsilonQ) {
        if (q_values_text.empty() || eps_values_text.empty()) {
          throw hs::ConfigError("axis", "epsilon_q needs --q-values and --eps-values");
        }
        points = hh::epsilon_q_grid(parse_counts(q_values_text, "q-values"), parse_doubles(eps_values_text, "eps-values"));
      } else {
        if (values_text.empty()) throw hs::ConfigError("values", "required for this axis");
        points = hh::axis_points(parse_counts(values_text, "values"));
      }
      const auto rows = hh::sweep(cfg, axis, points);
      std::ostringstream csv;
      hh::write_sweep_csv(csv, axis, rows);
      emit(sweep_out, csv.str());
    } else if (*land_cmd) {
      const auto targets = parse_targets(land_target);
      if (targets.size() != 1) throw hs::ConfigError("target", "expected a single 'i,j'");
      hs::Rng rng(land_seed);
      const auto map = hs::build_map(land_n, land_m, land_eps, land_d, rng);
      std::ostringstream csv;
      hh::write_landscape_csv(csv, hs::similarity_landscape(map, targets.front()), land_n, land_m);
      emit(land_out, csv.str());
    } else if (*proj_cmd) {
      const auto model = hh::load_model(proj_model);
      const auto samples = proj_data.encode(model);
      const auto rows = hs::export_projection(model.state, model.map, model.labels, samples);
      emit(proj_out, projection_csv(rows, samples.names));
      if (!proj_svg.empty()) {
        hh::render_projection(proj_svg, rows, samples.names, model.map.rows(), model.map.cols(), target_marks(model));
      }
    } else if (*fcps_cmd) {
      hs::Rng rng(hs::derive_seed(fcps_seed, hh::kDatasetStream));
      std::ostringstream csv;
      hh::write_csv_dataset(csv, hh::generate_fcps_like(fcps_name, fcps_points, rng));
      emit(fcps_out, csv.str());
    } else if (*corpus_cmd) {
      if (corpus_langs.empty()) {
        for (const auto& entry : std::filesystem::directory_iterator(stats_dir)) {
          if (entry.path().extension() == ".tsv") corpus_langs.push_back(entry.path().stem().string());
        }
        std::sort(corpus_langs.begin(), corpus_langs.end());
      }
      hh::generate_language_corpus(stats_dir, corpus_langs, corpus_out, corpus_opts, hs::Rng(corpus_seed));
      std::cerr << "wrote " << corpus_langs.size() << " languages to " << corpus_out << "\n";
    } else if (*save_cmd) {
      auto outcome = hh::run_experiment(save_opts.resolve(), true);
      hh::save_model(save_out, *outcome.model);
      const auto& rep = outcome.report;
      std::cerr << "saved run " << rep.selected << " (accuracy " << rep.runs[rep.selected].accuracy() << ") to "
                << save_out << "\n";
    } else if (*load_cmd) {
      const auto model = hh::load_model(load_in);
      emit("-", model_summary(model).dump(2) + "\n");
      if (!load_out.empty()) hh::save_model(load_out, model);
    }
  } catch (const hs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
