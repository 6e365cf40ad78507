#include "craq/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "craq/evaluation.hpp"
#include "craq/image_io.hpp"
#include "craq/ops.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace craq {

namespace {

const std::set<std::string> kRunConfigKeys = {
    "lambda_preg", "lambda_creg", "lambda_cp",   "epsilon",
    "beta1",       "beta2",       "margin",      "step_z",
    "step_s",      "step_uprime", "iterations",  "paper_verbatim_adam",
    "early_stop",  "patch",       "overlap",     "prior",
    "seed",        "global_threshold",           "out_dir"};

void apply_config_json(const json &j, RunConfig &config) {
  for (const auto &[key, value] : j.items()) {
    if (!kRunConfigKeys.count(key))
      throw io_error("config: unknown key '" + key + "'");
    if (key == "lambda_preg")
      config.detect.params.lambda_preg = value.get<double>();
    else if (key == "lambda_creg")
      config.detect.params.lambda_creg = value.get<double>();
    else if (key == "lambda_cp")
      config.detect.params.lambda_cp = value.get<double>();
    else if (key == "epsilon")
      config.detect.params.epsilon = value.get<double>();
    else if (key == "beta1")
      config.detect.adam.beta1 = value.get<double>();
    else if (key == "beta2")
      config.detect.adam.beta2 = value.get<double>();
    else if (key == "margin")
      config.detect.adam.zero_division_margin = value.get<double>();
    else if (key == "step_z")
      config.detect.adam.step_z = value.get<double>();
    else if (key == "step_s")
      config.detect.adam.step_s = value.get<double>();
    else if (key == "step_uprime")
      config.detect.adam.step_uprime = value.get<double>();
    else if (key == "iterations")
      config.detect.adam.iterations = value.get<int>();
    else if (key == "paper_verbatim_adam")
      config.detect.adam.paper_verbatim_mode = value.get<bool>();
    else if (key == "early_stop")
      config.detect.adam.early_stop = value.get<bool>();
    else if (key == "patch")
      config.detect.tiling.patch_size = value.get<int>();
    else if (key == "overlap")
      config.detect.tiling.overlap = value.get<int>();
    else if (key == "prior") {
      if (value.is_array())
        for (const auto &tok : value)
          apply_prior_token(config.detect.priors, tok.get<std::string>());
      else
        apply_prior_token(config.detect.priors, value.get<std::string>());
    } else if (key == "seed")
      config.detect.seed = value.get<uint64_t>();
    else if (key == "global_threshold")
      config.detect.global_threshold = value.get<bool>();
    else if (key == "out_dir")
      config.out_dir = value.get<std::string>();
  }
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

} // namespace

void load_run_config(const std::string &path, RunConfig &config) {
  std::ifstream in(path);
  if (!in)
    throw io_error("cannot read config: " + path);
  json j;
  in >> j;
  apply_config_json(j, config);
}

int run_detect(const std::string &input_path, const RunConfig &config) {
  const ColorField image = load_image(input_path);
  const DetectResult result = detect(image, config.detect);

  fs::create_directories(config.out_dir);
  const fs::path out(config.out_dir);
  save_image(result.soft, (out / "soft.png").string());
  save_image(result.binary, (out / "binary.png").string());
  save_image(overlay_detection(image, result.binary), (out / "overlay.png").string());
  if (result.traces.size() == 1) {
    write_trace_csv(result.traces[0], (out / "trace.csv").string());
  } else {
    for (size_t i = 0; i < result.traces.size(); ++i) {
      char name[48];
      std::snprintf(name, sizeof(name), "trace_%03zu.csv", i);
      write_trace_csv(result.traces[i], (out / name).string());
    }
  }

  long long crack_pixels = 0;
  for (double v : result.binary.data)
    if (v != 0.0)
      ++crack_pixels;
  std::cout << "detect: " << image.width << "x" << image.height << ", "
            << result.traces.size() << " tile(s), " << crack_pixels
            << " crack pixels -> " << config.out_dir << "\n";
  return kExitOk;
}

int run_synth(const std::string &clean_dir, const std::string &mask_dir,
              const std::string &out_dir, const DatasetSpec &spec) {
  if (!fs::is_directory(mask_dir) && !mask_dir.empty())
    std::cerr << "note: mask dir '" << mask_dir
              << "' not found, using the procedural line-crack generator\n";
  const DatasetManifest manifest = generate_dataset(clean_dir, mask_dir, out_dir, spec);
  std::cout << "synth: " << manifest.generated << " generated, "
            << manifest.skipped << " skipped -> " << out_dir << "/manifest.jsonl\n";
  return kExitOk;
}

int run_eval(const std::string &pred_dir, const std::string &truth_dir,
             const std::string &report_path) {
  auto names_of = [](const std::string &dir) {
    std::set<std::string> names;
    if (!fs::is_directory(dir))
      throw io_error("not a directory: " + dir);
    for (const auto &e : fs::directory_iterator(dir))
      if (e.is_regular_file())
        names.insert(e.path().filename().string());
    return names;
  };
  const auto pred_names = names_of(pred_dir);
  const auto truth_names = names_of(truth_dir);

  std::vector<std::string> missing;
  for (const auto &n : pred_names)
    if (!truth_names.count(n))
      missing.push_back(n + " (no ground truth)");
  for (const auto &n : truth_names)
    if (!pred_names.count(n))
      missing.push_back(n + " (no prediction)");
  if (!missing.empty()) {
    std::cerr << "eval: mismatched filenames:\n";
    for (const auto &m : missing)
      std::cerr << "  " << m << "\n";
    return kExitRuntime;
  }
  if (pred_names.empty()) {
    std::cerr << "eval: no images to compare\n";
    return kExitRuntime;
  }

  json per_image = json::array();
  double sum_f1 = 0.0, sum_prec = 0.0, sum_rec = 0.0, sum_bce = 0.0;
  for (const auto &name : pred_names) {
    const ScalarField pred_soft = load_image_gray((fs::path(pred_dir) / name).string());
    const ScalarField truth =
        binarize(load_image_gray((fs::path(truth_dir) / name).string()), 0.5);
    const ScalarField pred = binarize(pred_soft, 0.5);
    const ConfusionCounts c = confusion(pred, truth);
    const double f1 = f1_score(pred, truth);
    const double prec = precision(c);
    const double rec = recall(c);
    const double bce = bce_metric(pred_soft, truth);
    per_image.push_back({{"image", name},
                         {"f1", f1},
                         {"precision", prec},
                         {"recall", rec},
                         {"bce", bce}});
    sum_f1 += f1;
    sum_prec += prec;
    sum_rec += rec;
    sum_bce += bce;
  }
  const double n = static_cast<double>(pred_names.size());
  json report;
  report["images"] = per_image;
  report["aggregate"] = {{"f1", sum_f1 / n},
                         {"precision", sum_prec / n},
                         {"recall", sum_rec / n},
                         {"bce", sum_bce / n},
                         {"count", pred_names.size()}};
  const std::string text = report.dump(2);
  std::cout << text << "\n";
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    out << text << "\n";
  }
  return kExitOk;
}

int run_gridsearch(const std::string &grid_config_path, const std::string &out_csv) {
  std::ifstream in(grid_config_path);
  if (!in)
    throw io_error("cannot read grid config: " + grid_config_path);
  json j;
  in >> j;

  static const std::set<std::string> keys = {
      "lambda_preg", "lambda_creg", "lambda_cp", "epsilon",
      "manifest",    "cache_dir",   "solver"};
  for (const auto &[key, value] : j.items())
    if (!keys.count(key))
      throw io_error("grid config: unknown key '" + key + "'");

  GridSpec spec;
  spec.lambda_preg = j.at("lambda_preg").get<std::vector<double>>();
  spec.lambda_creg = j.at("lambda_creg").get<std::vector<double>>();
  spec.lambda_cp = j.at("lambda_cp").get<std::vector<double>>();
  spec.epsilon = j.at("epsilon").get<std::vector<double>>();
  spec.manifest_path = j.at("manifest").get<std::string>();
  spec.cache_dir = j.value("cache_dir", "");
  if (j.contains("solver")) {
    RunConfig solver_config;
    apply_config_json(j.at("solver"), solver_config);
    spec.solver = solver_config.detect;
  }

  for (double e : spec.epsilon)
    if (!(e > 0.0))
      throw io_error("grid config: epsilon candidates must be > 0");
  for (const auto *lst : {&spec.lambda_preg, &spec.lambda_creg, &spec.lambda_cp})
    for (double v : *lst)
      if (v < 0.0)
        throw io_error("grid config: lambda candidates must be >= 0");

  const std::vector<GridRow> rows = grid_search(spec);
  write_grid_csv(rows, out_csv);
  if (!rows.empty())
    std::cout << "gridsearch: best mean F1 " << fmt_double(rows[0].mean_f1)
              << " at lambda_preg=" << fmt_double(rows[0].params.lambda_preg)
              << " lambda_creg=" << fmt_double(rows[0].params.lambda_creg)
              << " lambda_cp=" << fmt_double(rows[0].params.lambda_cp)
              << " epsilon=" << fmt_double(rows[0].params.epsilon) << " -> "
              << out_csv << "\n";
  return kExitOk;
}

int run_gradcheck(const GradCheckOptions &options) {
  if (options.size > 32) {
    std::cerr << "gradcheck: size must be <= 32\n";
    return kExitUsage;
  }
  const GradCheckReport report = gradient_check(options);
  for (const auto &combo : report.combos) {
    char line[256];
    std::snprintf(line, sizeof(line),
                  "%-12s + %-12s  rel err  z %.3e  s %.3e  uprime %.3e\n",
                  combo.generator.c_str(), combo.crack_prior.c_str(),
                  combo.err_z, combo.err_s, combo.err_uprime);
    std::cout << line;
  }
  const bool ok = report.passed(1e-3);
  std::cout << "gradcheck: max relative error " << report.max_err << " -> "
            << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitRuntime;
}

} // namespace craq
