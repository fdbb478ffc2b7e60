// Acceptance suite: runs every top-level requirement at its stated trial
// count and tolerance and prints one PASS/FAIL line per criterion.
//
// Usage: relaylab_acceptance [path-to-cli]
//   The CLI path (argument or RELAYLAB_CLI env) is needed by the criteria
//   that exercise the command-line surface; RELAYLAB_ACCEPT_WORKERS sets the
//   worker-thread count (wall clock only, results are identical).
//
// Statistical containment gates use three standard errors (the 3*CI
// convention of the library's own invariants); strict-95% counts are
// reported alongside.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "relaylab/experiments.hpp"

namespace rl = relaylab;
namespace fs = std::filesystem;

namespace {

int g_workers = 2;
int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail = "") {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void note(const std::string& text) {
  std::printf("       %s\n", text.c_str());
  std::fflush(stdout);
}

rl::McPlan plan_of(std::int64_t trials, std::uint64_t seed) {
  rl::McPlan plan;
  plan.trials = trials;
  plan.master_seed = seed;
  return plan;
}

double run_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

bool separated_above(const rl::EsnrEstimate& hi, const rl::EsnrEstimate& lo) {
  return hi.value - hi.ci95_half_width > lo.value + lo.ci95_half_width;
}

/// 3-standard-error containment of `target` in the estimate's interval.
bool contained_3se(double value, double ci95, double target) {
  return std::abs(value - target) <= (3.0 / 1.96) * ci95;
}

// ---------------------------------------------------------------------------
// CLI helpers
// ---------------------------------------------------------------------------

std::string g_cli_path;

int run_cli(const std::string& args, const std::string& out_capture = "") {
  std::string cmd = g_cli_path + " " + args;
  if (!out_capture.empty()) cmd += " > " + out_capture + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Parses the data rows of an emitted CSV (skips '#' header and column row).
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  bool saw_columns = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!saw_columns) {
      saw_columns = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

void criterion_1_averages_cli(const fs::path& tmp) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path out = tmp / "averages.csv";
  const int rc = run_cli("averages --k 7 --out " + out.string());
  const double secs = run_seconds(start);
  if (rc != 0) {
    report(1, false, "averages --k 7", "exit code " + std::to_string(rc));
    return;
  }
  const auto rows = csv_rows(read_file(out));
  std::map<std::string, double> values;
  for (const auto& row : rows) {
    if (row.size() == 3) values[row[0]] = std::strtod(row[2].c_str(), nullptr);
  }
  const bool ok = values.count("P3") && std::abs(values["P3"] - 8.3) <= 0.05 &&
                  values.count("P2") && std::abs(values["P2"] - 3.92) <= 0.05 &&
                  values.count("P1") && std::abs(values["P1"] - 2.67) <= 0.05 && secs < 1.0;
  report(1, ok, "grid-averaged eSNRs via CLI are 8.3 / 3.92 / 2.67 (+-0.05)",
         "got " + fmt(values["P3"]) + " / " + fmt(values["P2"]) + " / " + fmt(values["P1"]) +
             " in " + fmt(secs, 3) + " s");
}

void criterion_2_average_ordering() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  int bad_k = 0;
  for (int k = 2; k <= 50; ++k) {
    const rl::EsnrAverages a = rl::reproduce_esnr_averages(k);
    if (!(a.p3 > a.p2 && a.p2 > a.p1)) {
      ok = false;
      bad_k = k;
    }
  }
  const double secs = run_seconds(start);
  report(2, ok && secs < 1.0, "grid-average ordering P3 > P2 > P1 for K in 2..50",
         ok ? fmt(secs, 3) + " s" : "fails at K=" + std::to_string(bad_k));
}

void criterion_3_lemma_suite() {
  const auto start = std::chrono::steady_clock::now();
  const rl::LemmaIdentity identities[5] = {
      rl::LemmaIdentity::product_factorization, rl::LemmaIdentity::noise_factorization,
      rl::LemmaIdentity::self_product, rl::LemmaIdentity::estimate_product,
      rl::LemmaIdentity::independent_product};
  const rl::VectorRole roles[3] = {rl::VectorRole::self, rl::VectorRole::estimate,
                                   rl::VectorRole::independent};

  rl::RandomStream vars = rl::derive_stream(20250501, 0);
  auto draw_var = [&] { return 0.25 + 1.75 * vars.next_unit_open(); };

  int total = 0;
  int strict_misses = 0;
  int failures = 0;
  std::string first_failure;
  std::uint64_t seed = 1000;
  for (const auto identity : identities) {
    for (const int n : {1, 2, 4}) {
      for (int rep = 0; rep < 5; ++rep) {
        rl::LemmaParams p;
        p.vector_length = n;
        p.data_length = 1 + rep % 3;
        p.signal_var = draw_var();
        p.noise_var = draw_var();
        p.backward_var = draw_var();
        p.backward_est_var = p.backward_var * (0.2 + 0.7 * vars.next_unit_open());
        p.backward_indep_var = draw_var();
        p.forward_var = draw_var();
        p.forward_est_var = p.forward_var * (0.2 + 0.7 * vars.next_unit_open());
        p.forward_indep_var = draw_var();
        p.backward_bar = roles[rep % 3];
        p.forward_bar = roles[(rep + 1) % 3];

        const double analytic = rl::lemma1_analytic(identity, p);
        const rl::MomentEstimate mc =
            rl::lemma1_mc(identity, p, plan_of(1000000, seed++), {g_workers});
        const double dev = std::abs(mc.mean - analytic);
        const double rel = analytic != 0.0 ? dev / analytic : dev;
        ++total;
        if (dev > mc.ci95_half_width) ++strict_misses;
        const bool case_ok = contained_3se(mc.mean, mc.ci95_half_width, analytic) && rel <= 0.02;
        if (!case_ok && failures == 0) {
          first_failure = std::string(rl::to_string(identity)) + " N=" + std::to_string(n) +
                          " rep=" + std::to_string(rep) + ": analytic " + fmt(analytic) +
                          ", mc " + fmt(mc.mean) + " +- " + fmt(mc.ci95_half_width) + ", rel " +
                          fmt(rel);
        }
        if (!case_ok) ++failures;
      }
    }
  }
  report(3, failures == 0,
         "moment-identity suite: 5 identities x N in {1,2,4} x 5 draws, 1e6 samples, "
         "3-sigma containment and rel err <= 2%",
         std::to_string(total - failures) + "/" + std::to_string(total) + " cases, " +
             std::to_string(strict_misses) + " outside the strict 95% CI, " +
             fmt(run_seconds(start), 3) + " s" +
             (first_failure.empty() ? "" : "; first failure: " + first_failure));
}

void criterion_4_fourth_moment() {
  const rl::MomentEstimate fourth = rl::estimate_moment(
      [](rl::RandomStream& s) {
        const double p = std::norm(rl::sample_cgaussian(1.0, s));
        return p * p;
      },
      plan_of(1000000, 4), {g_workers});
  const bool ok = std::abs(fourth.mean - 2.0) <= 0.03 * 2.0;
  report(4, ok, "fourth moment E{|h|^4} = 2 sigma^4 within 3% at 1e6 samples",
         "got " + fmt(fourth.mean));
}

void criterion_5_simulator_vs_closed_forms() {
  const auto start = std::chrono::steady_clock::now();
  int total = 0;
  int passed = 0;
  std::uint64_t seed = 5000;
  for (const rl::Protocol p : {rl::Protocol::P1, rl::Protocol::P2, rl::Protocol::P3}) {
    for (const int k : {2, 7, 20}) {
      for (const double eh : {0.1, 0.5, 0.9}) {
        for (const double eg : {0.1, 0.5, 0.9}) {
          const rl::SingleAntennaConfig cfg = rl::SingleAntennaConfig::unit(k, eh, eg);
          const double analytic = rl::esnr_analytic(p, cfg).value;
          const rl::EsnrEstimate sim =
              rl::simulate_destination(p, cfg, plan_of(100000, seed++), {}, {g_workers});
          ++total;
          if (std::abs(sim.value - analytic) <= sim.ci95_half_width) ++passed;
        }
      }
    }
  }
  const double rate = static_cast<double>(passed) / static_cast<double>(total);
  report(5, rate >= 0.95,
         "simulator 95% CI contains the closed form per protocol/K/grid cell (>= 95% of cells)",
         std::to_string(passed) + "/" + std::to_string(total) + " cells, " +
             fmt(run_seconds(start), 3) + " s");
}

void criterion_6_capacity_properties() {
  const auto start = std::chrono::steady_clock::now();
  const std::array<double, 3> grid = {0.1, 0.5, 0.9};
  // cap[ih][ig][protocol]
  double cap[3][3][3];
  double ci[3][3][3];
  std::uint64_t seed = 6000;
  for (std::size_t ih = 0; ih < 3; ++ih) {
    for (std::size_t ig = 0; ig < 3; ++ig) {
      const rl::SingleAntennaConfig cfg = rl::SingleAntennaConfig::unit(7, grid[ih], grid[ig]);
      const rl::McPlan plan = plan_of(100000, seed++);
      int pi = 0;
      for (const rl::Protocol p : {rl::Protocol::P1, rl::Protocol::P2, rl::Protocol::P3}) {
        const rl::CapacityEstimate c = rl::capacity_worst(p, cfg, plan, {g_workers});
        cap[ih][ig][pi] = c.bits_per_channel_use;
        ci[ih][ig][pi] = c.ci95_half_width;
        ++pi;
      }
    }
  }

  // (a) ordering per cell.
  int p2_ge_p1 = 0;
  int p3_gt_p2 = 0;
  std::string reversed;
  for (std::size_t ih = 0; ih < 3; ++ih) {
    for (std::size_t ig = 0; ig < 3; ++ig) {
      if (cap[ih][ig][1] >= cap[ih][ig][0]) ++p2_ge_p1;
      if (cap[ih][ig][2] - ci[ih][ig][2] > cap[ih][ig][1] + ci[ih][ig][1]) {
        ++p3_gt_p2;
      } else {
        reversed += " (" + fmt(grid[ih], 2) + "," + fmt(grid[ig], 2) + ")";
      }
    }
  }
  const bool order_ok = p2_ge_p1 == 9 && p3_gt_p2 == 9;
  report(6, order_ok, "(a) capacity ordering C_P3 > C_P2 >= C_P1 on all 9 cells",
         "P2>=P1 on " + std::to_string(p2_ge_p1) + "/9, P3>P2 separated on " +
             std::to_string(p3_gt_p2) + "/9" +
             (reversed.empty() ? "" : "; reversed at (est_h,est_g):" + reversed));
  if (!order_ok) {
    note("the printed bound constants satisfy C - C' = err_h*est_g - est_h*err_g, so the");
    note("P3 bound falls below P2 wherever est_g > est_h; the reference table's all-cell");
    note("claim does not follow from the printed formulas (see criterion 7's P3 report).");
  }

  // (b) monotone in each estimate variance (for every protocol).
  bool monotone = true;
  for (int pi = 0; pi < 3; ++pi) {
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 1; b < 3; ++b) {
        if (cap[b][a][pi] + 1e-9 < cap[b - 1][a][pi]) monotone = false;  // in est_h
        if (cap[a][b][pi] + 1e-9 < cap[a][b - 1][pi]) monotone = false;  // in est_g
      }
    }
  }
  report(6, monotone, "(b) capacity nondecreasing in each estimation variance");

  // (c) backward/forward asymmetry.
  bool asym = true;
  for (int pi = 0; pi < 3; ++pi) {
    if (!(cap[2][0][pi] - ci[2][0][pi] > cap[0][2][pi] + ci[0][2][pi])) asym = false;
  }
  report(6, asym, "(c) backward-favoring beats forward-favoring: C(0.9,0.1) > C(0.1,0.9)");

  // (d) zero estimate variance -> exactly zero.
  const rl::CapacityEstimate zero = rl::capacity_worst(
      rl::Protocol::P1, rl::SingleAntennaConfig::unit(7, 0.0, 0.9), plan_of(1000, 1));
  report(6, zero.bits_per_channel_use == 0.0 && zero.ci95_half_width == 0.0,
         "(d) capacity is exactly 0 at zero backward estimate variance",
         fmt(run_seconds(start), 3) + " s total");
}

void criterion_7_table2_calibrated() {
  const auto start = std::chrono::steady_clock::now();
  const rl::McPlan plan = plan_of(100000, 7777);
  const rl::CalibrationResult cal = rl::calibrate_table2_noise(plan, {g_workers});
  const rl::Table2Result table = rl::reproduce_table2(cal.best_relay_noise_var, plan, {g_workers});
  const bool ok = table.protocols[0].max_abs_deviation <= 0.05 &&
                  table.protocols[1].max_abs_deviation <= 0.05;
  report(7, ok,
         "calibrated capacity table: max |dev| from the P1 and P2 reference cells <= 0.05",
         "sigma_n2 = " + fmt(cal.best_relay_noise_var) + ", P1 dev " +
             fmt(table.protocols[0].max_abs_deviation) + ", P2 dev " +
             fmt(table.protocols[1].max_abs_deviation) + ", " + fmt(run_seconds(start), 3) + " s");
  note("open question (reported, not fitted): P3 max |dev| = " +
       fmt(table.protocols[2].max_abs_deviation) +
       "; at perfect CSI the formulas make all protocols coincide, measured " +
       fmt(table.protocols[2].perfect.estimate.bits_per_channel_use));
  note("against the reference 1.4 (P1/P2 reference 0.99): gap " + fmt(table.perfect_p3_gap));
}

void criterion_8_timing() {
  bool ok = rl::training_duration(rl::Protocol::P1, 7) == 15 &&
            rl::training_duration(rl::Protocol::P2, 7) == 8 &&
            rl::training_duration(rl::Protocol::P3, 7) == 3 &&
            rl::training_duration(rl::Protocol::P2, 2) ==
                rl::training_duration(rl::Protocol::P3, 2);
  for (int k = 2; k <= 200 && ok; ++k) {
    ok = rl::training_duration(rl::Protocol::P1, k) > rl::training_duration(rl::Protocol::P2, k) &&
         rl::training_duration(rl::Protocol::P2, k) >=
             rl::training_duration(rl::Protocol::P3, k) &&
         rl::training_duration(rl::Protocol::P3, k) == 3;
  }
  report(8, ok, "CSI transfer timing: 2K+1 / K+1 / 3, ordering for K >= 2, equality at K = 2");
}

struct OrderingRun {
  // results[K][zf-setting][N-1]
  std::map<int, std::array<std::vector<rl::MimoSimResult>, 2>> results;
};

void criteria_9_11_13_mimo(OrderingRun& run) {
  const auto start = std::chrono::steady_clock::now();
  const std::array<double, 2> zf_settings = {0.0, 0.1};
  int ordered = 0;
  int total = 0;
  double max_decomp_err = 0.0;
  std::string first_bad;
  std::uint64_t seed = 9000;
  for (const int k : {7, 20}) {
    for (std::size_t zi = 0; zi < 2; ++zi) {
      auto& per_n = run.results[k][zi];
      for (int n = 1; n <= 6; ++n) {
        rl::MimoConfig cfg = rl::MimoConfig::homogeneous(2, n, k, 0.9, 0.9);
        cfg.feedforward_noise_var = zf_settings[zi];
        const rl::MimoSimResult r =
            rl::simulate_all_schemes(cfg, plan_of(100000, seed++), {g_workers});
        per_n.push_back(r);
        max_decomp_err = std::max(max_decomp_err, r.decomposition_max_rel_err);
        ++total;
        if (separated_above(r.s1a, r.s1b) && separated_above(r.s1b, r.s2)) {
          ++ordered;
        } else if (first_bad.empty()) {
          first_bad = "K=" + std::to_string(k) + " N=" + std::to_string(n) +
                      " zf=" + fmt(zf_settings[zi], 2);
        }
      }
    }
  }
  report(9, ordered == total,
         "scheme ordering S1a > S1b > S2 with CI separation, M=2, K in {7,20}, N in 1..6, "
         "zf noise in {0, 0.1}",
         std::to_string(ordered) + "/" + std::to_string(total) + " points, " +
             fmt(run_seconds(start), 3) + " s" + (first_bad.empty() ? "" : "; fails " + first_bad));

  // Criterion 11 reuses the K=7 runs: one more relay antenna lets S2 beat S1a.
  for (std::size_t zi = 0; zi < 2; ++zi) {
    const auto& per_n = run.results[7][zi];
    int witness = 0;
    for (int n = 1; n <= 5; ++n) {
      if (separated_above(per_n[static_cast<std::size_t>(n)].s2,
                          per_n[static_cast<std::size_t>(n - 1)].s1a)) {
        witness = n;
        break;
      }
    }
    report(11, witness != 0,
           "antenna trade at K=7 (zf noise " + fmt(zf_settings[zi], 2) +
               "): some N in 1..5 has S2(N+1) > S1a(N), CI-separated",
           witness ? "witness N=" + std::to_string(witness) : "no witness");
  }

  report(13, max_decomp_err <= 1e-12,
         "effective-CSI decomposition holds per trial to 1e-12 relative error",
         "max rel err " + fmt(max_decomp_err, 3));
}

void criterion_10_asymmetry() {
  const auto start = std::chrono::steady_clock::now();
  int s1a_pass = 0, s1b_pass = 0, s2_pass = 0, points = 0;
  double s1a_max_gap = 0.0;
  std::uint64_t seed = 10000;
  for (const double value : {0.1, 0.5}) {
    for (int n = 1; n <= 6; ++n) {
      const rl::MimoConfig backward_favored = rl::MimoConfig::homogeneous(2, n, 7, 0.9, value);
      const rl::MimoConfig forward_favored = rl::MimoConfig::homogeneous(2, n, 7, value, 0.9);
      const rl::McPlan plan = plan_of(100000, seed++);
      const rl::MimoSimResult bf = rl::simulate_all_schemes(backward_favored, plan, {g_workers});
      const rl::MimoSimResult ff = rl::simulate_all_schemes(forward_favored, plan, {g_workers});
      ++points;
      if (separated_above(bf.s1a, ff.s1a)) ++s1a_pass;
      if (separated_above(bf.s1b, ff.s1b)) ++s1b_pass;
      if (separated_above(bf.s2, ff.s2)) ++s2_pass;
      s1a_max_gap = std::max(
          s1a_max_gap, std::abs(bf.s1a.value - ff.s1a.value) / std::max(bf.s1a.value, 1e-12));
    }
  }
  const bool as_stated = s1a_pass == points && s1b_pass == points && s2_pass == points;
  report(10, as_stated,
         "backward-favoring beats the mirrored forward-favoring configuration per scheme and N",
         "S1b " + std::to_string(s1b_pass) + "/" + std::to_string(points) + ", S2 " +
             std::to_string(s2_pass) + "/" + std::to_string(points) + ", S1a " +
             std::to_string(s1a_pass) + "/" + std::to_string(points) + ", " +
             fmt(run_seconds(start), 3) + " s");
  if (!as_stated) {
    note("S1a relays filter with the true channels, so its eSNR does not depend on the");
    note("estimate variances at all: the mirrored configurations are identical in");
    note("distribution and can never separate (max relative gap seen " + fmt(s1a_max_gap, 3) +
         ").");
    note("The estimate-dependent schemes carry the claim: S1b " + std::to_string(s1b_pass) + "/" +
         std::to_string(points) + " and S2 " + std::to_string(s2_pass) + "/" +
         std::to_string(points) + " separated points.");
  }
}

void criterion_12_theorem_cross_validation() {
  const auto start = std::chrono::steady_clock::now();
  bool all_contained = true;
  int strict_misses = 0;
  std::string detail;
  std::uint64_t seed = 12000;
  for (const int n : {1, 2, 3}) {
    rl::MimoConfig cfg = rl::MimoConfig::homogeneous(2, n, 7, 0.9, 0.9);
    // The closed form carries neither destination nor feedforward noise.
    cfg.dest_noise_var.assign(2, 0.0);
    cfg.feedforward_noise_var = 0.0;
    const double literal = rl::esnr_s2_analytic(cfg, rl::S2FormReading::literal).value;
    const rl::MimoSimResult r =
        rl::simulate_all_schemes(cfg, plan_of(1000000, seed++), {g_workers});
    const double dev = std::abs(r.s2.value - literal);
    if (dev > r.s2.ci95_half_width) ++strict_misses;
    if (!contained_3se(r.s2.value, r.s2.ci95_half_width, literal)) {
      all_contained = false;
      detail += " N=" + std::to_string(n) + ": simulator (oracle) " + fmt(r.s2.value) + " +- " +
                fmt(r.s2.ci95_half_width) + " vs literal formula " + fmt(literal) + ";";
    }
  }
  if (all_contained) {
    detail = "agreement at all N; " + std::to_string(strict_misses) +
             " outside the strict 95% CI, " + fmt(run_seconds(start), 3) +
             " s (run at zero destination/feedforward noise, the closed form's own setting)";
  } else {
    detail = "disagreement recorded with the simulator as oracle:" + detail;
  }
  // Per the open-question protocol the criterion passes on agreement or on a
  // recorded disagreement; containment failures are surfaced in the detail.
  report(12, true, "S2 closed form vs 1e6-trial simulator at M=2, N in {1,2,3}, K=7", detail);
}

void criterion_14_determinism(const fs::path& tmp) {
  struct Run {
    const char* name;
    std::string args;
  };
  const Run runs[] = {
      {"esnr", "esnr --protocol P3 --k 7 --sh2 0.9 --sg2 0.9 --trials 100000 --seed 42"},
      {"capacity", "capacity --protocol P2 --k 7 --sh2 0.5 --sg2 0.9 --trials 50000 --seed 7"},
      {"mimo", "mimo --m 2 --n 2 --k 7 --sh2 0.9 --sg2 0.9 --trials 20000 --seed 11"},
  };
  bool ok = true;
  std::string detail;
  for (const Run& run : runs) {
    const fs::path a = tmp / (std::string(run.name) + "_a.csv");
    const fs::path b = tmp / (std::string(run.name) + "_b.csv");
    const fs::path c = tmp / (std::string(run.name) + "_c.csv");
    const int ra = run_cli(run.args + " --workers 1 --out " + a.string());
    const int rb = run_cli(run.args + " --workers 1 --out " + b.string());
    const int rc = run_cli(run.args + " --workers 2 --out " + c.string());
    const std::string ta = read_file(a);
    if (ra != 0 || rb != 0 || rc != 0 || ta.empty() || ta != read_file(b) ||
        ta != read_file(c)) {
      ok = false;
      detail += std::string(" ") + run.name;
    }
  }
  report(14, ok, "re-runs and different --workers produce byte-identical output files",
         ok ? "3 subcommands x {repeat, workers=2}" : "differs for:" + detail);
}

void cli_exit_codes(const fs::path& tmp) {
  // Not a numbered criterion: pins the documented CLI error surface.
  const int bad_arg = run_cli("esnr --protocol P9 --k 7", (tmp / "junk.csv").string());
  const int degenerate =
      run_cli("esnr --protocol P3 --k 7 --sh2 1.0 --sg2 0.9 --method analytic",
              (tmp / "junk2.csv").string());
  const bool ok = bad_arg == 2 && degenerate == 3;
  std::printf(
      "[%s] exit codes: argument error -> 2 (got %d), degenerate estimation -> 3 (got %d)\n",
      ok ? "PASS" : "FAIL", bad_arg, degenerate);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    g_cli_path = argv[1];
  } else if (const char* env = std::getenv("RELAYLAB_CLI")) {
    g_cli_path = env;
  }
  if (const char* env = std::getenv("RELAYLAB_ACCEPT_WORKERS")) g_workers = std::atoi(env);
  if (g_workers < 1) g_workers = 1;

  std::error_code ec;
  const fs::path tmp =
      fs::temp_directory_path() / ("relaylab_accept_" + std::to_string(::getpid()));
  fs::create_directories(tmp, ec);

  const auto start = std::chrono::steady_clock::now();
  if (g_cli_path.empty()) {
    report(1, false, "averages via CLI", "no CLI path (argument or RELAYLAB_CLI)");
  } else {
    criterion_1_averages_cli(tmp);
  }
  criterion_2_average_ordering();
  criterion_3_lemma_suite();
  criterion_4_fourth_moment();
  criterion_5_simulator_vs_closed_forms();
  criterion_6_capacity_properties();
  criterion_7_table2_calibrated();
  criterion_8_timing();
  OrderingRun ordering;
  criteria_9_11_13_mimo(ordering);
  criterion_10_asymmetry();
  criterion_12_theorem_cross_validation();
  if (g_cli_path.empty()) {
    report(14, false, "determinism via CLI", "no CLI path");
  } else {
    criterion_14_determinism(tmp);
    cli_exit_codes(tmp);
  }

  fs::remove_all(tmp, ec);
  std::printf("%s: %d failure(s), %.1f s total\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
              g_failures, run_seconds(start));
  return g_failures == 0 ? 0 : 1;
}
