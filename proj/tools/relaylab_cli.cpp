// relaylab command-line tool.
//
// Subcommands compute one-off quantities (esnr, capacity, timing, lemma,
// mimo) or reproduce the reference experiments (table2, figures, averages).
// Results are written as CSV or JSON with a commented manifest header; runs
// are deterministic given the seed and configuration, independent of the
// worker count.
//
// Exit codes: 0 success, 2 argument error, 3 degenerate estimation,
// 4 numerical error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaylab/experiments.hpp"
#include "relaylab/io.hpp"
#include "relaylab/version.hpp"

namespace rl = relaylab;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RELAYLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw rl::ArgumentError("RELAYLAB_SEED is not an unsigned integer");
    }
  }
  return 42;
}

/// Options shared by every subcommand.
struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::int64_t trials = 100000;
  std::int64_t chunk_size = 16384;
  int workers = 1;
};

void add_common(CLI::App* sub, CommonOpts& opts, bool with_plan = true) {
  sub->add_option("--config", opts.config_path, "flat key = value config file; flags override");
  sub->add_option("--out", opts.out_path, "output file path (default: stdout)");
  sub->add_option("--format", opts.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", opts.seed, "master seed (default: RELAYLAB_SEED env or 42)")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
  if (with_plan) {
    sub->add_option("--trials", opts.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--chunk-size", opts.chunk_size, "trials per work chunk")
        ->check(CLI::PositiveNumber);
    sub->add_option("--workers", opts.workers,
                    "worker threads; affects wall clock only, never results")
        ->check(CLI::PositiveNumber);
  }
}

rl::McPlan make_plan(const CommonOpts& opts) {
  rl::McPlan plan;
  plan.trials = opts.trials;
  plan.master_seed = opts.seed_given ? opts.seed : default_seed();
  plan.chunk_size = opts.chunk_size;
  return plan;
}

void emit(const rl::RowWriter& writer, const rl::Manifest& manifest, const CommonOpts& opts) {
  if (opts.out_path.empty()) {
    std::cout << writer.serialize(manifest);
  } else {
    writer.write_file(opts.out_path, manifest);
  }
}

rl::Manifest make_manifest(const std::string& experiment, std::uint64_t seed,
                           std::vector<std::pair<std::string, std::string>> params) {
  rl::Manifest m;
  m.experiment_id = experiment;
  m.tool_version = std::string(rl::kToolName) + " " + rl::kVersion;
  m.seed = seed;
  m.params = std::move(params);
  m.timestamp = rl::utc_timestamp();
  return m;
}

std::string fmt(double v) { return rl::format_double(v); }

/// Spelling pairs: a config key is considered given on the command line if
/// either its own flag or its alias appears there.
const std::map<std::string, std::string> kFlagAliases = {
    {"sh2", "backward.est"},
    {"backward.est", "sh2"},
    {"sg2", "forward.est"},
    {"forward.est", "sg2"},
};

/// Injects config-file entries as trailing `--key=value` arguments for keys
/// not already given on the command line. Unknown keys then fail CLI11's own
/// option validation.
std::vector<std::string> with_config_defaults(const std::vector<std::string>& args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  auto given_on_command_line = [&args](const std::string& key) {
    std::vector<std::string> flags = {"--" + key};
    const auto alias = kFlagAliases.find(key);
    if (alias != kFlagAliases.end()) flags.push_back("--" + alias->second);
    for (const auto& arg : args) {
      for (const auto& flag : flags) {
        if (arg == flag || arg.rfind(flag + "=", 0) == 0) return true;
      }
    }
    return false;
  };

  std::vector<std::string> augmented = args;
  for (const auto& [key, value] : rl::parse_config_file(config_path)) {
    if (!given_on_command_line(key)) augmented.push_back("--" + key + "=" + value);
  }
  return augmented;
}

// ---------------------------------------------------------------------------
// Subcommand parameter blocks
// ---------------------------------------------------------------------------

struct SingleAntennaOpts {
  int relays = 7;
  double backward_est = 0.9;
  double backward_total = 1.0;
  double forward_est = 0.9;
  double forward_total = 1.0;
  double rho_s = 1.0;
  double rho_r = 1.0;
  double rho_rf = 1.0;
  double sigma_s2 = 1.0;
  double sigma_n2 = 1.0;
  double sigma_z2 = 1.0;
  double sigma_zf2 = 0.0;

  rl::SingleAntennaConfig to_config() const {
    rl::SingleAntennaConfig cfg;
    cfg.relays = relays;
    cfg.backward = rl::VarianceSplit::from_total_est(backward_total, backward_est);
    cfg.forward = rl::VarianceSplit::from_total_est(forward_total, forward_est);
    cfg.source_power = rho_s;
    cfg.relay_power = rho_r;
    cfg.feedforward_power = rho_rf;
    cfg.signal_var = sigma_s2;
    cfg.relay_noise_var = sigma_n2;
    cfg.dest_noise_var = sigma_z2;
    cfg.feedforward_noise_var = sigma_zf2;
    return cfg;
  }
};

void add_single_antenna(CLI::App* sub, SingleAntennaOpts& o) {
  sub->add_option("--k", o.relays, "number of relays K")->check(CLI::PositiveNumber);
  sub->add_option("--sh2", o.backward_est, "backward channel estimate variance");
  sub->add_option("--backward.est", o.backward_est, "alias of --sh2");
  sub->add_option("--sg2", o.forward_est, "forward channel estimate variance");
  sub->add_option("--forward.est", o.forward_est, "alias of --sg2");
  sub->add_option("--backward.total", o.backward_total, "backward channel total variance");
  sub->add_option("--forward.total", o.forward_total, "forward channel total variance");
  sub->add_option("--rho-s", o.rho_s, "source power");
  sub->add_option("--rho-r", o.rho_r, "relay data-phase power");
  sub->add_option("--rho-rf", o.rho_rf, "relay feedforward-phase power");
  sub->add_option("--sigma-s2", o.sigma_s2, "data symbol variance");
  sub->add_option("--sigma-n2", o.sigma_n2, "relay noise variance");
  sub->add_option("--sigma-z2", o.sigma_z2, "destination noise variance");
  sub->add_option("--sigma-zf2", o.sigma_zf2, "feedforward-phase noise variance");
}

// ---------------------------------------------------------------------------
// Subcommand runners
// ---------------------------------------------------------------------------

int run_esnr(const CommonOpts& common, const SingleAntennaOpts& sa, const std::string& protocol,
             const std::string& method, bool overall_noise, const std::string& compound) {
  const rl::Protocol p = rl::protocol_from_string(protocol);
  const rl::SingleAntennaConfig cfg = sa.to_config();
  const rl::McPlan plan = make_plan(common);

  rl::RowWriter writer(rl::output_format_from_string(common.format), rl::kEsnrColumns);
  const auto seed = static_cast<std::int64_t>(plan.master_seed);
  if (method == "analytic" || method == "both") {
    const rl::EsnrEstimate e = rl::esnr_analytic(p, cfg);
    writer.add_row({std::string(rl::to_string(p)), static_cast<std::int64_t>(cfg.relays),
                    cfg.backward.est, cfg.forward.est, std::string("analytic"), e.value,
                    e.ci95_half_width, e.trials, seed});
  }
  if (method == "mc" || method == "both") {
    rl::SimOptions options;
    options.include_overall_noise = overall_noise;
    options.compound_model =
        compound == "product" ? rl::CompoundModel::product : rl::CompoundModel::gaussian;
    const rl::EsnrEstimate e =
        rl::simulate_destination(p, cfg, plan, options, {common.workers});
    writer.add_row({std::string(rl::to_string(p)), static_cast<std::int64_t>(cfg.relays),
                    cfg.backward.est, cfg.forward.est, std::string("monte_carlo"), e.value,
                    e.ci95_half_width, e.trials, seed});
  }

  emit(writer,
       make_manifest("esnr", plan.master_seed,
                     {{"protocol", protocol},
                      {"k", std::to_string(cfg.relays)},
                      {"sigma_h_est", fmt(cfg.backward.est)},
                      {"sigma_g_est", fmt(cfg.forward.est)},
                      {"method", method},
                      {"overall_noise", overall_noise ? "on" : "off"},
                      {"compound_model", compound},
                      {"trials", std::to_string(plan.trials)}}),
       common);
  return 0;
}

int run_capacity(const CommonOpts& common, const SingleAntennaOpts& sa,
                 const std::string& protocol) {
  const rl::Protocol p = rl::protocol_from_string(protocol);
  const rl::SingleAntennaConfig cfg = sa.to_config();
  const rl::McPlan plan = make_plan(common);
  const rl::CapacityEstimate c = rl::capacity_worst(p, cfg, plan, {common.workers});

  rl::RowWriter writer(rl::output_format_from_string(common.format), rl::kCapacityColumns);
  writer.add_row({std::string(rl::to_string(p)), static_cast<std::int64_t>(cfg.relays),
                  cfg.backward.est, cfg.forward.est, cfg.relay_noise_var,
                  c.bits_per_channel_use, c.ci95_half_width, c.trials,
                  static_cast<std::int64_t>(plan.master_seed)});
  emit(writer,
       make_manifest("capacity", plan.master_seed,
                     {{"protocol", protocol},
                      {"k", std::to_string(cfg.relays)},
                      {"sigma_h_est", fmt(cfg.backward.est)},
                      {"sigma_g_est", fmt(cfg.forward.est)},
                      {"sigma_n2", fmt(cfg.relay_noise_var)},
                      {"trials", std::to_string(plan.trials)}}),
       common);
  return 0;
}

int run_timing(const CommonOpts& common, int relays) {
  rl::RowWriter writer(rl::output_format_from_string(common.format), rl::kTimingColumns);
  for (const rl::Protocol p : {rl::Protocol::P1, rl::Protocol::P2, rl::Protocol::P3}) {
    writer.add_row({std::string(rl::to_string(p)), static_cast<std::int64_t>(relays),
                    static_cast<std::int64_t>(rl::training_duration(p, relays))});
  }
  emit(writer, make_manifest("timing", 0, {{"k", std::to_string(relays)}}), common);
  return 0;
}

int run_averages(const CommonOpts& common, int relays) {
  const rl::EsnrAverages averages = rl::reproduce_esnr_averages(relays);
  rl::RowWriter writer(rl::output_format_from_string(common.format), rl::kAveragesColumns);
  rl::write_rows(averages, relays, writer);
  emit(writer, make_manifest("averages", 0, {{"k", std::to_string(relays)}}), common);
  return 0;
}

int run_lemma(const CommonOpts& common, const std::string& identity_name, int n, int t_d,
              const std::string& h_bar, const std::string& g_bar, double sigma_h2,
              double sigma_h_est2, double sigma_h_indep2, double sigma_g2, double sigma_g_est2,
              double sigma_g_indep2, double sigma_s2, double sigma_n2) {
  const rl::LemmaIdentity identity = rl::lemma_identity_from_string(identity_name);
  auto role = [](const std::string& name) {
    if (name == "self") return rl::VectorRole::self;
    if (name == "estimate") return rl::VectorRole::estimate;
    if (name == "independent") return rl::VectorRole::independent;
    throw rl::ArgumentError("unknown vector role '" + name + "'");
  };
  rl::LemmaParams params;
  params.vector_length = n;
  params.data_length = t_d;
  params.signal_var = sigma_s2;
  params.noise_var = sigma_n2;
  params.backward_bar = role(h_bar);
  params.forward_bar = role(g_bar);
  params.backward_var = sigma_h2;
  params.backward_est_var = sigma_h_est2;
  params.backward_indep_var = sigma_h_indep2;
  params.forward_var = sigma_g2;
  params.forward_est_var = sigma_g_est2;
  params.forward_indep_var = sigma_g_indep2;

  const double analytic = rl::lemma1_analytic(identity, params);
  const rl::McPlan plan = make_plan(common);
  const rl::MomentEstimate mc = rl::lemma1_mc(identity, params, plan, {common.workers});

  rl::RowWriter writer(rl::output_format_from_string(common.format),
                       {"identity", "N", "analytic", "mc_mean", "ci95", "trials", "seed"});
  writer.add_row({identity_name, static_cast<std::int64_t>(n), analytic, mc.mean,
                  mc.ci95_half_width, mc.trials, static_cast<std::int64_t>(plan.master_seed)});
  emit(writer,
       make_manifest("lemma", plan.master_seed,
                     {{"identity", identity_name},
                      {"n", std::to_string(n)},
                      {"trials", std::to_string(plan.trials)}}),
       common);
  return 0;
}

int run_mimo(const CommonOpts& common, const std::string& scheme, int m, int n, int k,
             double backward_est, double forward_est, double sigma_z2, double sigma_zf2) {
  rl::MimoConfig cfg = rl::MimoConfig::homogeneous(m, n, k, backward_est, forward_est);
  cfg.dest_noise_var.assign(cfg.dest_noise_var.size(), sigma_z2);
  cfg.feedforward_noise_var = sigma_zf2;
  const rl::McPlan plan = make_plan(common);
  const rl::MimoSimResult result = rl::simulate_all_schemes(cfg, plan, {common.workers});

  rl::RowWriter writer(rl::output_format_from_string(common.format), rl::kMimoColumns);
  const auto seed = static_cast<std::int64_t>(plan.master_seed);
  auto add = [&](rl::Scheme s, const rl::EsnrEstimate& e) {
    writer.add_row({std::string(rl::to_string(s)), static_cast<std::int64_t>(m),
                    static_cast<std::int64_t>(n), static_cast<std::int64_t>(k),
                    std::string("backward"), backward_est, e.value, e.ci95_half_width, e.trials,
                    seed});
  };
  if (scheme == "all" || scheme == "S1a") add(rl::Scheme::S1a, result.s1a);
  if (scheme == "all" || scheme == "S1b") add(rl::Scheme::S1b, result.s1b);
  if (scheme == "all" || scheme == "S2") add(rl::Scheme::S2, result.s2);
  if (writer.row_count() == 0) {
    throw rl::ArgumentError("unknown scheme '" + scheme + "' (expected S1a, S1b, S2 or all)");
  }
  emit(writer,
       make_manifest("mimo", plan.master_seed,
                     {{"scheme", scheme},
                      {"m", std::to_string(m)},
                      {"n", std::to_string(n)},
                      {"k", std::to_string(k)},
                      {"sigma_h_est", fmt(backward_est)},
                      {"sigma_g_est", fmt(forward_est)},
                      {"sigma_z2", fmt(sigma_z2)},
                      {"sigma_zf2", fmt(sigma_zf2)},
                      {"trials", std::to_string(plan.trials)}}),
       common);
  return 0;
}

int run_table2(const CommonOpts& common, double sigma_n2, bool calibrate) {
  const rl::McPlan plan = make_plan(common);
  double noise = sigma_n2;
  if (calibrate) {
    const rl::CalibrationResult cal = rl::calibrate_table2_noise(plan, {common.workers});
    noise = cal.best_relay_noise_var;
    std::cerr << "calibration: sigma_n2 = " << fmt(noise)
              << ", max |deviation| over P1+P2 cells = " << fmt(cal.best_max_abs_deviation)
              << "\n";
  }
  const rl::Table2Result result = rl::reproduce_table2(noise, plan, {common.workers});
  std::cerr << "table2: max |deviation| P1 = " << fmt(result.protocols[0].max_abs_deviation)
            << ", P2 = " << fmt(result.protocols[1].max_abs_deviation)
            << ", P3 = " << fmt(result.protocols[2].max_abs_deviation)
            << " (P3 deviations and its perfect-CSI gap of " << fmt(result.perfect_p3_gap)
            << " are reported, not fitted)\n";

  rl::RowWriter writer(rl::output_format_from_string(common.format), rl::kCapacityColumns);
  rl::write_rows(result, 7, plan.master_seed, writer);
  emit(writer,
       make_manifest("table2", plan.master_seed,
                     {{"sigma_n2", fmt(noise)},
                      {"calibrated", calibrate ? "yes" : "no"},
                      {"trials", std::to_string(plan.trials)}}),
       common);
  return 0;
}

int run_figures(const CommonOpts& common, int k, int m, int n_min, int n_max,
                const std::string& axis, std::vector<double> values, double held,
                double sigma_z2, double sigma_zf2) {
  if (n_min < 1 || n_max < n_min) throw rl::ArgumentError("figures: invalid N range");
  std::vector<int> antenna_counts;
  for (int n = n_min; n <= n_max; ++n) antenna_counts.push_back(n);

  rl::SweepSpec sweep;
  sweep.axis = axis;
  sweep.values = std::move(values);
  sweep.held = {{"held", held}, {"sigma_z_sq", sigma_z2}, {"sigma_zf_sq", sigma_zf2}};
  sweep.plan = make_plan(common);

  const rl::FigureCurves curves =
      rl::reproduce_figures(k, m, antenna_counts, sweep, {common.workers});
  rl::RowWriter writer(rl::output_format_from_string(common.format), rl::kMimoColumns);
  rl::write_rows(curves, k, sweep.plan.master_seed, writer);
  emit(writer,
       make_manifest("figures", sweep.plan.master_seed,
                     {{"k", std::to_string(k)},
                      {"m", std::to_string(m)},
                      {"axis", axis},
                      {"held", fmt(held)},
                      {"sigma_z2", fmt(sigma_z2)},
                      {"sigma_zf2", fmt(sigma_zf2)},
                      {"trials", std::to_string(sweep.plan.trials)}}),
       common);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"amplify-and-forward relay network training-protocol calculator"};
  app.require_subcommand(1);

  // esnr
  auto* esnr = app.add_subcommand("esnr", "single-antenna effective SNR (analytic and Monte Carlo)");
  CommonOpts esnr_common;
  SingleAntennaOpts esnr_sa;
  std::string esnr_protocol = "P3";
  std::string esnr_method = "both";
  bool esnr_overall_noise = false;
  std::string esnr_compound = "gaussian";
  esnr->add_option("--protocol", esnr_protocol, "P1, P2 or P3")->required();
  add_single_antenna(esnr, esnr_sa);
  esnr->add_option("--method", esnr_method, "analytic, mc or both")
      ->check(CLI::IsMember({"analytic", "mc", "both"}));
  esnr->add_flag("--include-overall-noise", esnr_overall_noise,
                 "add forwarded relay noise and destination noise to the measured noise power");
  esnr->add_option("--compound-model", esnr_compound,
                   "P2 compound estimate model: gaussian or product")
      ->check(CLI::IsMember({"gaussian", "product"}));
  add_common(esnr, esnr_common);

  // capacity
  auto* capacity = app.add_subcommand("capacity", "worst-case-noise capacity lower bound");
  CommonOpts capacity_common;
  SingleAntennaOpts capacity_sa;
  std::string capacity_protocol = "P3";
  capacity->add_option("--protocol", capacity_protocol, "P1, P2 or P3")->required();
  add_single_antenna(capacity, capacity_sa);
  add_common(capacity, capacity_common);

  // timing
  auto* timing = app.add_subcommand("timing", "CSI transfer durations per protocol");
  CommonOpts timing_common;
  int timing_k = 7;
  timing->add_option("--k", timing_k, "number of relays K")->check(CLI::PositiveNumber);
  add_common(timing, timing_common, /*with_plan=*/false);

  // lemma
  auto* lemma = app.add_subcommand("lemma", "complex Gaussian product moment identity check");
  CommonOpts lemma_common;
  std::string lemma_identity = "self_product";
  int lemma_n = 1;
  int lemma_td = 1;
  std::string lemma_h_bar = "self";
  std::string lemma_g_bar = "self";
  double lemma_sh2 = 1.0, lemma_sh_est2 = 1.0, lemma_sh_ind2 = 1.0;
  double lemma_sg2 = 1.0, lemma_sg_est2 = 1.0, lemma_sg_ind2 = 1.0;
  double lemma_ss2 = 1.0, lemma_sn2 = 1.0;
  lemma->add_option("--identity", lemma_identity,
                    "product_factorization, noise_factorization, self_product, "
                    "estimate_product or independent_product")
      ->required();
  lemma->add_option("--n", lemma_n, "vector length N")->check(CLI::PositiveNumber);
  lemma->add_option("--td", lemma_td, "data vector length")->check(CLI::PositiveNumber);
  lemma->add_option("--h-bar", lemma_h_bar, "backward bar: self, estimate or independent");
  lemma->add_option("--g-bar", lemma_g_bar, "forward bar: self, estimate or independent");
  lemma->add_option("--sigma-h2", lemma_sh2, "backward channel variance");
  lemma->add_option("--sigma-h-est2", lemma_sh_est2, "backward estimate variance");
  lemma->add_option("--sigma-h-indep2", lemma_sh_ind2, "independent backward partner variance");
  lemma->add_option("--sigma-g2", lemma_sg2, "forward channel variance");
  lemma->add_option("--sigma-g-est2", lemma_sg_est2, "forward estimate variance");
  lemma->add_option("--sigma-g-indep2", lemma_sg_ind2, "independent forward partner variance");
  lemma->add_option("--sigma-s2", lemma_ss2, "data symbol variance");
  lemma->add_option("--sigma-n2", lemma_sn2, "noise variance");
  add_common(lemma, lemma_common);

  // mimo
  auto* mimo = app.add_subcommand("mimo", "multi-antenna scheme eSNRs (S1a / S1b / S2)");
  CommonOpts mimo_common;
  std::string mimo_scheme = "all";
  int mimo_m = 2, mimo_n = 2, mimo_k = 7;
  double mimo_sh2 = 0.9, mimo_sg2 = 0.9, mimo_sz2 = 1.0, mimo_szf2 = 0.1;
  mimo->add_option("--scheme", mimo_scheme, "S1a, S1b, S2 or all");
  mimo->add_option("--m", mimo_m, "antenna pairs M")->check(CLI::PositiveNumber);
  mimo->add_option("--n", mimo_n, "antennas per relay N")->check(CLI::PositiveNumber);
  mimo->add_option("--k", mimo_k, "relays per subgroup K")->check(CLI::PositiveNumber);
  mimo->add_option("--sh2", mimo_sh2, "backward estimate variance (unit totals)");
  mimo->add_option("--sg2", mimo_sg2, "forward estimate variance (unit totals)");
  mimo->add_option("--sigma-z2", mimo_sz2, "destination noise variance");
  mimo->add_option("--sigma-zf2", mimo_szf2, "feedforward noise variance");
  add_common(mimo, mimo_common);

  // table2
  auto* table2 = app.add_subcommand("table2", "capacity table reproduction (K = 7)");
  CommonOpts table2_common;
  double table2_sigma_n2 = 1.0;
  bool table2_calibrate = false;
  table2->add_option("--sigma-n2", table2_sigma_n2, "relay noise variance");
  table2->add_flag("--calibrate", table2_calibrate,
                   "sweep sigma-n2 over [0.1, 2.0] and use the best fit to the P1/P2 reference");
  add_common(table2, table2_common);

  // figures
  auto* figures = app.add_subcommand("figures", "scheme comparison curves vs relay antennas");
  CommonOpts figures_common;
  int figures_k = 7, figures_m = 2, figures_nmin = 1, figures_nmax = 6;
  std::string figures_axis = "backward";
  std::vector<double> figures_values = {0.1, 0.5, 0.9};
  double figures_held = 0.9, figures_sz2 = 1.0, figures_szf2 = 0.1;
  figures->add_option("--k", figures_k, "relays per subgroup K")->check(CLI::PositiveNumber);
  figures->add_option("--m", figures_m, "antenna pairs M")->check(CLI::PositiveNumber);
  figures->add_option("--n-min", figures_nmin, "smallest relay antenna count");
  figures->add_option("--n-max", figures_nmax, "largest relay antenna count");
  figures->add_option("--axis", figures_axis, "swept estimate variance: backward or forward")
      ->check(CLI::IsMember({"backward", "forward"}));
  figures->add_option("--values", figures_values, "swept values, comma separated, strictly increasing")
      ->delimiter(',');
  figures->add_option("--held", figures_held, "held estimate variance of the other side");
  figures->add_option("--sigma-z2", figures_sz2, "destination noise variance");
  figures->add_option("--sigma-zf2", figures_szf2, "feedforward noise variance");
  add_common(figures, figures_common);

  // averages
  auto* averages = app.add_subcommand("averages", "grid-averaged protocol eSNRs (analytic)");
  CommonOpts averages_common;
  int averages_k = 7;
  averages->add_option("--k", averages_k, "number of relays K")->check(CLI::PositiveNumber);
  add_common(averages, averages_common, /*with_plan=*/false);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = with_config_defaults(args);
    // CLI11 consumes arguments in reverse order.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (esnr->parsed()) {
      return run_esnr(esnr_common, esnr_sa, esnr_protocol, esnr_method, esnr_overall_noise,
                      esnr_compound);
    }
    if (capacity->parsed()) return run_capacity(capacity_common, capacity_sa, capacity_protocol);
    if (timing->parsed()) return run_timing(timing_common, timing_k);
    if (lemma->parsed()) {
      return run_lemma(lemma_common, lemma_identity, lemma_n, lemma_td, lemma_h_bar, lemma_g_bar,
                       lemma_sh2, lemma_sh_est2, lemma_sh_ind2, lemma_sg2, lemma_sg_est2,
                       lemma_sg_ind2, lemma_ss2, lemma_sn2);
    }
    if (mimo->parsed()) {
      return run_mimo(mimo_common, mimo_scheme, mimo_m, mimo_n, mimo_k, mimo_sh2, mimo_sg2,
                      mimo_sz2, mimo_szf2);
    }
    if (table2->parsed()) return run_table2(table2_common, table2_sigma_n2, table2_calibrate);
    if (figures->parsed()) {
      return run_figures(figures_common, figures_k, figures_m, figures_nmin, figures_nmax,
                         figures_axis, figures_values, figures_held, figures_sz2, figures_szf2);
    }
    if (averages->parsed()) return run_averages(averages_common, averages_k);
    std::cerr << "relaylab: error: argument: no subcommand given\n";
    return 2;
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "relaylab: error: argument: " << e.what() << "\n";
    return 2;
  } catch (const rl::ArgumentError& e) {
    std::cerr << "relaylab: error: argument: " << e.what() << "\n";
    return 2;
  } catch (const rl::DegenerateEstimation& e) {
    std::cerr << "relaylab: error: degenerate_estimation: " << e.what() << "\n";
    return 3;
  } catch (const rl::NumericalError& e) {
    std::cerr << "relaylab: error: numerical: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "relaylab: error: internal: " << e.what() << "\n";
    return 1;
  }
}
