#ifndef CRAQ_COMMANDS_HPP
#define CRAQ_COMMANDS_HPP

#include <optional>
#include <string>

#include "craq/detect.hpp"
#include "craq/gradcheck.hpp"
#include "craq/gridsearch.hpp"
#include "craq/synthetic.hpp"

namespace craq {

/// Exit codes shared by every subcommand.
enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitRuntime = 2 };

/// Full run configuration. Precedence: built-in defaults, then the JSON
/// config file, then explicit flags (applied by the CLI layer on top).
struct RunConfig {
  DetectConfig detect;
  std::string out_dir = ".";
};

/// Parse a JSON config file into `config`. Unknown keys are rejected.
void load_run_config(const std::string &path, RunConfig &config);

/// Detect cracks in one image; writes soft.png, binary.png, overlay.png and
/// the per-tile trace CSVs under config.out_dir.
int run_detect(const std::string &input_path, const RunConfig &config);

/// Build a synthetic cracked dataset; writes images, masks and manifest.jsonl.
int run_synth(const std::string &clean_dir, const std::string &mask_dir,
              const std::string &out_dir, const DatasetSpec &spec);

/// Compare binary maps with matching filenames across two directories;
/// prints a JSON metric report (per-image and aggregate f1/precision/recall/bce).
int run_eval(const std::string &pred_dir, const std::string &truth_dir,
             const std::string &report_path = "");

/// Grid search driven by a JSON spec; writes the ranked results CSV.
int run_gridsearch(const std::string &grid_config_path, const std::string &out_csv);

/// Finite-difference gradient audit; prints per-block errors, exit 2 on failure.
int run_gradcheck(const GradCheckOptions &options);

} // namespace craq

#endif
