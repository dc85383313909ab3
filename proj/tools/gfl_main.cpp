#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gfl/csv.hpp"
#include "gfl/harness.hpp"
#include "gfl/image_io.hpp"
#include "gfl/metrics.hpp"
#include "gfl/pyramid.hpp"
#include "gfl/scheduler.hpp"
#include "gfl/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

[[noreturn]] void config_error(const std::string& message) {
  gfl::fail(gfl::ErrorCode::InvalidConfig, message);
}

// ------------------------------------------------------------ config ----

struct CliConfig {
  std::optional<gfl::Task> task;
  std::optional<gfl::LossKind> loss;
  double epsilon = 1e-3;
  std::optional<gfl::ScheduleConfig> schedule;
  std::optional<int> steps;
  std::optional<double> learning_rate;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> input;
  std::optional<std::string> output_dir;
  json echo; // resolved values for the manifest
};

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) config_error("key '" + key + "' must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) config_error("key '" + key + "' must be an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) config_error("key '" + key + "' must be a string");
  return v.get<std::string>();
}

gfl::ScheduleConfig parse_schedule(const json& j) {
  if (!j.is_object()) config_error("'schedule' must be an object");
  gfl::ScheduleConfig schedule;
  bool has_omega0 = false, has_omega_f = false, has_epochs = false,
       has_stages = false, has_mode = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "omega0") {
      schedule.omega0 = as_number(value, key);
      has_omega0 = true;
    } else if (key == "omegaF") {
      schedule.omegaF = as_number(value, key);
      has_omega_f = true;
    } else if (key == "epochs") {
      schedule.epochs = as_int(value, key);
      has_epochs = true;
    } else if (key == "stages") {
      schedule.stages = as_int(value, key);
      has_stages = true;
    } else if (key == "mode") {
      const std::string mode = as_string(value, key);
      if (mode == "static") schedule.mode = gfl::BandMode::Static;
      else if (mode == "dynamic") schedule.mode = gfl::BandMode::Dynamic;
      else config_error("schedule.mode must be 'static' or 'dynamic'");
      has_mode = true;
    } else if (key == "loss_threshold") {
      schedule.loss_threshold = as_number(value, key);
    } else if (key == "interpretation") {
      const std::string interp = as_string(value, key);
      if (interp == "literal")
        schedule.interpretation = gfl::StaticTrigger::Literal;
      else if (interp == "stage-interval")
        schedule.interpretation = gfl::StaticTrigger::StageInterval;
      else config_error("schedule.interpretation must be 'literal' or 'stage-interval'");
    } else {
      config_error("unknown schedule key '" + key + "'");
    }
  }
  if (!has_omega0 || !has_omega_f || !has_epochs || !has_stages || !has_mode)
    config_error("schedule requires omega0, omegaF, epochs, stages, mode");
  gfl::validate_schedule(schedule);
  return schedule;
}

json echo_schedule(const gfl::ScheduleConfig& s) {
  json j;
  j["omega0"] = s.omega0;
  j["omegaF"] = s.omegaF;
  j["epochs"] = s.epochs;
  j["stages"] = s.stages;
  j["mode"] = s.mode == gfl::BandMode::Static ? "static" : "dynamic";
  if (s.loss_threshold) j["loss_threshold"] = *s.loss_threshold;
  j["interpretation"] = s.interpretation == gfl::StaticTrigger::Literal
                            ? "literal"
                            : "stage-interval";
  return j;
}

CliConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) gfl::fail(gfl::ErrorCode::FileNotFound, path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config root must be an object");

  CliConfig config;
  for (const auto& [key, value] : j.items()) {
    if (key == "task") {
      config.task = gfl::parse_task(as_string(value, key));
      if (!config.task) config_error("task must be 'denoise' or 'sr4'");
    } else if (key == "loss") {
      config.loss = gfl::parse_loss(as_string(value, key));
      if (!config.loss)
        config_error("loss must be gfl, mse, charbonnier, or edge");
    } else if (key == "epsilon") {
      config.epsilon = as_number(value, key);
      if (config.epsilon <= 0.0) config_error("epsilon must be > 0");
    } else if (key == "schedule") {
      config.schedule = parse_schedule(value);
    } else if (key == "steps") {
      config.steps = as_int(value, key);
    } else if (key == "learning_rate") {
      config.learning_rate = as_number(value, key);
    } else if (key == "seed") {
      if (!value.is_number_integer() && !value.is_number_unsigned())
        config_error("seed must be an integer");
      config.seed = value.get<std::uint64_t>();
    } else if (key == "input") {
      config.input = as_string(value, key);
    } else if (key == "output_dir") {
      config.output_dir = as_string(value, key);
    } else {
      config_error("unknown config key '" + key + "'");
    }
  }

  config.echo["epsilon"] = config.epsilon;
  if (config.task) config.echo["task"] = gfl::task_name(*config.task);
  if (config.loss) config.echo["loss"] = gfl::loss_name(*config.loss);
  if (config.schedule) config.echo["schedule"] = echo_schedule(*config.schedule);
  if (config.steps) config.echo["steps"] = *config.steps;
  if (config.learning_rate) config.echo["learning_rate"] = *config.learning_rate;
  if (config.seed) config.echo["seed"] = *config.seed;
  if (config.input) config.echo["input"] = *config.input;
  if (config.output_dir) config.echo["output_dir"] = *config.output_dir;
  return config;
}

template <class T>
const T& require_key(const std::optional<T>& field, const char* key) {
  if (!field) config_error(std::string("config key '") + key + "' is required");
  return *field;
}

gfl::ExperimentConfig to_experiment(const CliConfig& config) {
  gfl::ExperimentConfig exp;
  exp.task = require_key(config.task, "task");
  exp.loss = require_key(config.loss, "loss");
  exp.steps = require_key(config.steps, "steps");
  exp.learning_rate = require_key(config.learning_rate, "learning_rate");
  exp.seed = require_key(config.seed, "seed");
  exp.epsilon = config.epsilon;
  if (exp.loss == gfl::LossKind::Gfl)
    exp.schedule = require_key(config.schedule, "schedule");
  return exp;
}

// ------------------------------------------------------------ output ----

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) gfl::fail(gfl::ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const json& config_echo) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = config_echo;
  write_text(dir / "run-manifest.json", manifest.dump(2) + "\n");
}

// min -> 0, max -> 255 display normalization for pyramid levels.
gfl::Image normalize_for_display(const gfl::Image& grid) {
  double lo = 1e300, hi = -1e300;
  for (double v : grid.data) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  gfl::Image out = grid;
  if (hi - lo < 1e-300) {
    for (double& v : out.data) v = 0.0;
  } else {
    for (double& v : out.data) v = (v - lo) / (hi - lo);
  }
  return out;
}

std::string radial_csv(const std::vector<gfl::RadialPower>& bins) {
  std::string out = "radius,power\n";
  for (const auto& bin : bins) {
    out += std::to_string(bin.radius);
    out += ',' + gfl::format_trimmed(bin.power);
    out += '\n';
  }
  return out;
}

gfl::FrequencyMask zero_mask(int height, int width) {
  gfl::FrequencyMask mask = gfl::highpass_mask(height, width, 0.0);
  mask.pass.assign(mask.pass.size(), 0);
  return mask;
}

// ---------------------------------------------------------- commands ----

int run_metrics(const std::string& a_path, const std::string& b_path) {
  const gfl::Image a = gfl::load_image(a_path);
  const gfl::Image b = gfl::load_image(b_path);
  std::printf("%s,%s\n", gfl::format_fixed(gfl::psnr(a, b)).c_str(),
              gfl::format_fixed(gfl::ssim(a, b)).c_str());
  return 0;
}

int run_loss_eval(const std::string& a_path, const std::string& b_path,
                  std::optional<double> mask_omega, double epsilon) {
  const gfl::Image a = gfl::load_image(a_path);
  const gfl::Image b = gfl::load_image(b_path);
  gfl::GflParams params;
  params.epsilon = epsilon;
  params.mask = mask_omega ? gfl::highpass_mask(a.height, a.width, *mask_omega)
                           : zero_mask(a.height, a.width);
  const gfl::LossBreakdown lb = gfl::gfl(a, b, params);
  std::printf("%s,%s,%s,%s\n", gfl::format_trimmed(lb.ch_c).c_str(),
              gfl::format_trimmed(lb.pi_c).c_str(),
              gfl::format_trimmed(lb.theta_c).c_str(),
              gfl::format_trimmed(lb.total).c_str());
  return 0;
}

int run_compare_losses(const std::string& a_path, const std::string& b_path,
                       std::optional<double> mask_omega, double epsilon) {
  const gfl::Image a = gfl::load_image(a_path);
  const gfl::Image b = gfl::load_image(b_path);
  gfl::GflParams params;
  params.epsilon = epsilon;
  params.mask = mask_omega ? gfl::highpass_mask(a.height, a.width, *mask_omega)
                           : zero_mask(a.height, a.width);
  const gfl::LossBreakdown lb = gfl::gfl(a, b, params);
  std::printf("loss,value\n");
  std::printf("mse,%s\n", gfl::format_trimmed(gfl::mse_loss(a, b)).c_str());
  std::printf("charbonnier,%s\n",
              gfl::format_trimmed(gfl::charbonnier_loss(a, b, epsilon)).c_str());
  std::printf("edge,%s\n", gfl::format_trimmed(gfl::edge_loss(a, b)).c_str());
  std::printf("sqrt_pi_ch,%s\n",
              gfl::format_trimmed(std::sqrt(lb.ch_c + lb.pi_c)).c_str());
  std::printf("gfl,%s\n", gfl::format_trimmed(lb.total).c_str());
  return 0;
}

int run_pyramid(const std::string& input, int depth, const std::string& out_dir) {
  const gfl::Image img = gfl::load_image(input);
  const gfl::LaplacianPyramid pyr = gfl::build_laplacian(img, depth);
  fs::create_directories(out_dir);
  for (int n = 0; n < pyr.depth(); ++n) {
    gfl::save_image(normalize_for_display(pyr.levels[static_cast<std::size_t>(n)]),
                    (fs::path(out_dir) / ("level_" + std::to_string(n) + ".png")).string());
  }
  gfl::save_image(normalize_for_display(pyr.base),
                  (fs::path(out_dir) / "base.png").string());
  return 0;
}

int run_analyze_spectrum(const std::string& input, const std::string& out_csv,
                         std::optional<double> keep_above,
                         std::string filtered_path) {
  const gfl::Image img = gfl::load_image(input);
  const auto bins = gfl::radial_power_spectrum(gfl::to_grayscale(img));
  if (const fs::path parent = fs::path(out_csv).parent_path(); !parent.empty())
    fs::create_directories(parent);
  write_text(out_csv, radial_csv(bins));
  if (keep_above) {
    const gfl::FrequencyMask mask =
        gfl::highpass_mask(img.height, img.width, *keep_above);
    if (filtered_path.empty())
      filtered_path =
          (fs::path(out_csv).parent_path() / "filtered.png").string();
    gfl::save_image(gfl::clamp01(gfl::apply_highpass(img, mask)), filtered_path);
  }
  return 0;
}

int run_schedule_trace(const std::string& config_path, const std::string& out_csv,
                       const std::vector<double>& gfl_values) {
  const CliConfig config = load_config(config_path);
  const gfl::ScheduleConfig& schedule = require_key(config.schedule, "schedule");
  std::vector<gfl::TracePoint> points;
  if (schedule.mode == gfl::BandMode::Dynamic) {
    points = gfl::trace(schedule, &gfl_values);
  } else {
    points = gfl::trace(schedule);
  }
  if (const fs::path parent = fs::path(out_csv).parent_path(); !parent.empty())
    fs::create_directories(parent);
  write_text(out_csv, gfl::trace_csv(points));
  const fs::path dir = fs::path(out_csv).parent_path();
  write_manifest(dir.empty() ? fs::path(".") : dir, "schedule-trace", config.echo);
  return 0;
}

int run_degrade(const std::string& input, const std::string& task_name_arg,
                std::uint64_t seed, const std::string& out_path) {
  const auto task = gfl::parse_task(task_name_arg);
  if (!task) config_error("task must be 'denoise' or 'sr4'");
  const gfl::Image img = gfl::load_image(input);
  const gfl::DegradedPair pair = gfl::make_pair(img, *task, seed);
  if (const fs::path parent = fs::path(out_path).parent_path(); !parent.empty())
    fs::create_directories(parent);
  gfl::save_image(pair.degraded, out_path);
  json echo;
  echo["input"] = input;
  echo["task"] = gfl::task_name(*task);
  echo["seed"] = seed;
  echo["out"] = out_path;
  const fs::path dir = fs::path(out_path).parent_path();
  write_manifest(dir.empty() ? fs::path(".") : dir, "degrade", echo);
  return 0;
}

int run_optimize(const std::string& config_path) {
  const CliConfig config = load_config(config_path);
  const gfl::ExperimentConfig exp = to_experiment(config);
  const std::string input = require_key(config.input, "input");
  const std::string out_dir = require_key(config.output_dir, "output_dir");

  const gfl::Image img = gfl::load_image(input);
  const gfl::DegradedPair pair = gfl::make_pair(img, exp.task, exp.seed);
  gfl::Image initial = pair.degraded;
  if (exp.task == gfl::Task::SuperResolution4x)
    initial = gfl::clamp01(gfl::upscale_bicubic(pair.degraded, gfl::kScaleFactor));

  const gfl::OptimizeResult result = gfl::optimize_direct(pair, exp);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  gfl::save_image(pair.degraded, (dir / "degraded.png").string());
  gfl::save_image(result.restored, (dir / "restored.png").string());
  write_text(dir / "history.csv", gfl::history_csv(result.history));

  gfl::ReportRow row;
  row.image = fs::path(input).filename().string();
  row.loss = gfl::loss_name(exp.loss);
  row.psnr_in = gfl::psnr(initial, pair.target);
  row.psnr_out = gfl::psnr(result.restored, pair.target);
  row.ssim_in = gfl::ssim(initial, pair.target);
  row.ssim_out = gfl::ssim(result.restored, pair.target);
  write_text(dir / "report.csv", gfl::report_csv({row}));
  if (!result.schedule_trace.empty())
    write_text(dir / "schedule.csv", gfl::trace_csv(result.schedule_trace));
  write_manifest(dir, "optimize", config.echo);
  return 0;
}

int run_train(const std::string& config_path, const std::string& corpus_dir,
              int kernel_size) {
  const CliConfig config = load_config(config_path);
  gfl::ExperimentConfig exp = to_experiment(config);
  if (exp.task != gfl::Task::Denoising)
    config_error("train supports the denoising task only");
  const std::string out_dir = require_key(config.output_dir, "output_dir");

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".png" || ext == ".pgm" || ext == ".ppm")
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    gfl::fail(gfl::ErrorCode::FileNotFound,
              "no .png/.pgm/.ppm images in " + corpus_dir);

  std::vector<gfl::DegradedPair> corpus;
  corpus.reserve(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    const gfl::Image img = gfl::load_image(files[i]);
    // per-item seed: base seed xor item index
    corpus.push_back(gfl::make_pair(img, exp.task, exp.seed ^ i));
  }

  const gfl::TrainResult result =
      gfl::train_linear_restorer(corpus, exp, kernel_size);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  std::string kernel_text;
  for (int y = 0; y < kernel_size; ++y) {
    for (int x = 0; x < kernel_size; ++x) {
      if (x) kernel_text += ',';
      kernel_text += gfl::format_trimmed(
          result.kernel[static_cast<std::size_t>(y) * kernel_size + x], 12);
    }
    kernel_text += '\n';
  }
  write_text(dir / "kernel.csv", kernel_text);

  std::vector<gfl::ReportRow> rows = result.report;
  const std::size_t first_held_out = files.size() - rows.size();
  for (std::size_t i = 0; i < rows.size(); ++i)
    rows[i].image = fs::path(files[first_held_out + i]).filename().string();
  write_text(dir / "report.csv", gfl::report_csv(rows));
  if (!result.schedule_trace.empty())
    write_text(dir / "schedule.csv", gfl::trace_csv(result.schedule_trace));
  write_manifest(dir, "train", config.echo);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"guided-frequency restoration toolkit"};
  app.require_subcommand(1);

  // metrics A B
  std::string metrics_a, metrics_b;
  auto* metrics_cmd = app.add_subcommand("metrics", "print psnr,ssim for an image pair");
  metrics_cmd->add_option("A", metrics_a)->required();
  metrics_cmd->add_option("B", metrics_b)->required();

  // loss-eval A B [--mask-omega W] [--epsilon E]
  std::string loss_a, loss_b;
  double loss_epsilon = 1e-3;
  std::optional<double> loss_omega;
  auto* loss_cmd = app.add_subcommand("loss-eval", "print the loss breakdown row ch_c,pi_c,theta_c,total");
  loss_cmd->add_option("A", loss_a)->required();
  loss_cmd->add_option("B", loss_b)->required();
  loss_cmd->add_option("--mask-omega", loss_omega, "high-pass threshold; omitted = inactive band");
  loss_cmd->add_option("--epsilon", loss_epsilon);

  // compare-losses A B [--mask-omega W] [--epsilon E]
  std::string cmp_a, cmp_b;
  double cmp_epsilon = 1e-3;
  std::optional<double> cmp_omega;
  auto* cmp_cmd = app.add_subcommand("compare-losses", "print every supported loss for an image pair");
  cmp_cmd->add_option("A", cmp_a)->required();
  cmp_cmd->add_option("B", cmp_b)->required();
  cmp_cmd->add_option("--mask-omega", cmp_omega);
  cmp_cmd->add_option("--epsilon", cmp_epsilon);

  // pyramid IN --depth D --out DIR
  std::string pyr_in, pyr_out;
  int pyr_depth = 1;
  auto* pyr_cmd = app.add_subcommand("pyramid", "write display-normalized pyramid levels as PNG");
  pyr_cmd->add_option("IN", pyr_in)->required();
  pyr_cmd->add_option("--depth", pyr_depth)->required();
  pyr_cmd->add_option("--out", pyr_out)->required();

  // analyze-spectrum IN --out CSV [--keep-above W] [--filtered PATH]
  std::string spec_in, spec_out, spec_filtered;
  std::optional<double> spec_keep;
  auto* spec_cmd = app.add_subcommand("analyze-spectrum", "radial power spectrum CSV; optionally write the high-passed image");
  spec_cmd->add_option("IN", spec_in)->required();
  spec_cmd->add_option("--out", spec_out)->required();
  spec_cmd->add_option("--keep-above", spec_keep, "write the image filtered to radii above this threshold");
  spec_cmd->add_option("--filtered", spec_filtered, "path for the filtered image (default: filtered.png beside the CSV)");

  // schedule-trace --config J --out CSV [--gfl-values ...]
  std::string trace_config, trace_out;
  std::vector<double> trace_values;
  auto* trace_cmd = app.add_subcommand("schedule-trace", "expand the band schedule to CSV");
  trace_cmd->add_option("--config", trace_config)->required();
  trace_cmd->add_option("--out", trace_out)->required();
  trace_cmd->add_option("--gfl-values", trace_values, "per-epoch loss values for dynamic mode")->delimiter(',');

  // degrade IN --task T --seed S --out OUT
  std::string degrade_in, degrade_task, degrade_out;
  std::uint64_t degrade_seed = 0;
  auto* degrade_cmd = app.add_subcommand("degrade", "apply the task degradation to an image");
  degrade_cmd->add_option("IN", degrade_in)->required();
  degrade_cmd->add_option("--task", degrade_task)->required();
  degrade_cmd->add_option("--seed", degrade_seed)->required();
  degrade_cmd->add_option("--out", degrade_out)->required();

  // optimize --config J
  std::string optimize_config;
  auto* optimize_cmd = app.add_subcommand("optimize", "direct-pixel gradient descent restoration");
  optimize_cmd->add_option("--config", optimize_config)->required();

  // train --config J --corpus DIR [--kernel-size K]
  std::string train_config, train_corpus;
  int train_kernel = 5;
  auto* train_cmd = app.add_subcommand("train", "train the shared-kernel linear restorer");
  train_cmd->add_option("--config", train_config)->required();
  train_cmd->add_option("--corpus", train_corpus)->required();
  train_cmd->add_option("--kernel-size", train_kernel);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*metrics_cmd) return run_metrics(metrics_a, metrics_b);
    if (*loss_cmd) return run_loss_eval(loss_a, loss_b, loss_omega, loss_epsilon);
    if (*cmp_cmd) return run_compare_losses(cmp_a, cmp_b, cmp_omega, cmp_epsilon);
    if (*pyr_cmd) return run_pyramid(pyr_in, pyr_depth, pyr_out);
    if (*spec_cmd) return run_analyze_spectrum(spec_in, spec_out, spec_keep, spec_filtered);
    if (*trace_cmd) return run_schedule_trace(trace_config, trace_out, trace_values);
    if (*degrade_cmd) return run_degrade(degrade_in, degrade_task, degrade_seed, degrade_out);
    if (*optimize_cmd) return run_optimize(optimize_config);
    if (*train_cmd) return run_train(train_config, train_corpus, train_kernel);
  } catch (const gfl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == gfl::ErrorCode::InvalidConfig ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
