#include "relaylab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace relaylab {

void SweepSpec::validate() const {
  if (axis.empty()) throw ArgumentError("SweepSpec: axis must be named");
  if (values.empty()) throw ArgumentError("SweepSpec: values must be nonempty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw ArgumentError("SweepSpec: values must be strictly increasing");
    }
  }
  if (held.count(axis) != 0) throw ArgumentError("SweepSpec: axis must not appear in held");
  plan.validate();
}

std::uint64_t derive_experiment_seed(std::uint64_t master_seed, const std::string& experiment_id) {
  return fnv1a64(experiment_id, master_seed ^ 0x9E3779B97F4A7C15ULL);
}

EsnrAverages reproduce_esnr_averages(int relays) {
  if (relays < 2) throw ArgumentError("reproduce_esnr_averages: relays must be >= 2");
  EsnrAverages out;
  out.p3 = esnr_grid_average(Protocol::P3, relays);
  out.p2 = esnr_grid_average(Protocol::P2, relays);
  out.p1 = esnr_grid_average(Protocol::P1, relays);
  return out;
}

namespace {

constexpr int kTableRelays = 7;

const CapacityReference kReferenceP1 = {{{{0.14, 0.52, 0.84}, {0.10, 0.37, 0.56}, {0.03, 0.11, 0.17}}},
                                        0.99};
const CapacityReference kReferenceP2 = {{{{0.17, 0.58, 0.87}, {0.12, 0.42, 0.64}, {0.03, 0.14, 0.22}}},
                                        0.99};
const CapacityReference kReferenceP3 = {{{{0.26, 0.82, 1.26}, {0.21, 0.71, 1.11}, {0.11, 0.43, 0.74}}},
                                        1.4};

McPlan cell_plan(const McPlan& base, const std::string& experiment_id, int row, int col) {
  McPlan plan = base;
  plan.master_seed = derive_experiment_seed(base.master_seed,
                                            experiment_id + ":" + std::to_string(row) + "," +
                                                std::to_string(col));
  return plan;
}

}  // namespace

const CapacityReference& capacity_reference(Protocol protocol) {
  switch (protocol) {
    case Protocol::P1: return kReferenceP1;
    case Protocol::P2: return kReferenceP2;
    case Protocol::P3: return kReferenceP3;
  }
  throw ArgumentError("capacity_reference: unknown protocol");
}

Table2Result reproduce_table2(double relay_noise_var, const McPlan& plan,
                              const ExecPolicy& exec) {
  if (!(relay_noise_var >= 0.0)) {
    throw ArgumentError("reproduce_table2: relay_noise_var must be >= 0");
  }
  plan.validate();

  Table2Result out;
  out.relay_noise_var = relay_noise_var;
  const Protocol protocols[3] = {Protocol::P1, Protocol::P2, Protocol::P3};
  for (int p = 0; p < 3; ++p) out.protocols[static_cast<std::size_t>(p)].protocol = protocols[p];

  for (std::size_t row = 0; row < 3; ++row) {
    for (std::size_t col = 0; col < 3; ++col) {
      SingleAntennaConfig cfg = SingleAntennaConfig::unit(
          kTableRelays, kTableBackwardEst[col], kTableForwardEst[row]);
      cfg.relay_noise_var = relay_noise_var;
      const McPlan cp = cell_plan(plan, "table2", static_cast<int>(row), static_cast<int>(col));
      for (std::size_t p = 0; p < 3; ++p) {
        Table2Cell& cell = out.protocols[p].cells[row][col];
        cell.backward_est = kTableBackwardEst[col];
        cell.forward_est = kTableForwardEst[row];
        cell.estimate = capacity_worst(protocols[p], cfg, cp, exec);
        cell.reference = capacity_reference(protocols[p]).cells[row][col];
      }
    }
  }

  {
    SingleAntennaConfig cfg = SingleAntennaConfig::unit(kTableRelays, 1.0, 1.0);
    cfg.relay_noise_var = relay_noise_var;
    const McPlan cp = cell_plan(plan, "table2", 3, 3);
    for (std::size_t p = 0; p < 3; ++p) {
      Table2Cell& cell = out.protocols[p].perfect;
      cell.backward_est = 1.0;
      cell.forward_est = 1.0;
      cell.estimate = capacity_worst(protocols[p], cfg, cp, exec);
      cell.reference = capacity_reference(protocols[p]).perfect;
    }
  }

  for (std::size_t p = 0; p < 3; ++p) {
    double max_dev = 0.0;
    for (const auto& row : out.protocols[p].cells) {
      for (const auto& cell : row) {
        max_dev = std::max(max_dev,
                           std::abs(cell.estimate.bits_per_channel_use - cell.reference));
      }
    }
    out.protocols[p].max_abs_deviation = max_dev;
  }
  out.max_abs_deviation_p1p2 =
      std::max(out.protocols[0].max_abs_deviation, out.protocols[1].max_abs_deviation);
  out.perfect_p3_gap = std::abs(out.protocols[2].perfect.estimate.bits_per_channel_use -
                                out.protocols[2].perfect.reference);
  return out;
}

CalibrationResult calibrate_table2_noise(const McPlan& plan, const ExecPolicy& exec) {
  plan.validate();

  // The per-trial known-CSI terms do not depend on the relay noise variance,
  // so the nine cells are drawn once and every sweep point only re-evaluates
  // the log terms against its own noise constants.
  struct CellDraws {
    double backward_est = 0.0;
    double forward_est = 0.0;
    std::vector<double> a_sq;       // squared known-CSI power per trial
    std::vector<double> p3_extra;   // squared feedforward cross term per trial
  };
  std::array<std::array<CellDraws, 3>, 3> draws;

  for (std::size_t row = 0; row < 3; ++row) {
    for (std::size_t col = 0; col < 3; ++col) {
      CellDraws& cell = draws[row][col];
      cell.backward_est = kTableBackwardEst[col];
      cell.forward_est = kTableForwardEst[row];
      const double est_h = cell.backward_est;
      const double est_g = cell.forward_est;
      const double err_g = 1.0 - est_g;
      const McPlan cp = cell_plan(plan, "table2", static_cast<int>(row), static_cast<int>(col));
      const auto trials = detail::run_trials<std::pair<double, double>>(
          [&](RandomStream& stream) {
            double a = 0.0;
            Complex cross = 0.0;
            for (int r = 0; r < kTableRelays; ++r) {
              const Complex h_hat = sample_cgaussian(est_h, stream);
              const Complex g_hat = sample_cgaussian(est_g, stream);
              const Complex g_err = sample_cgaussian(err_g, stream);
              const double h_hat_sq = std::norm(h_hat);
              a += h_hat_sq * std::norm(g_hat);
              cross += h_hat_sq * std::conj(g_hat) * g_err;
            }
            return std::pair<double, double>{a * a, std::norm(cross)};
          },
          cp, exec);
      cell.a_sq.resize(trials.size());
      cell.p3_extra.resize(trials.size());
      for (std::size_t i = 0; i < trials.size(); ++i) {
        cell.a_sq[i] = trials[i].first;
        cell.p3_extra[i] = trials[i].second;
      }
    }
  }

  const double inv_log2 = 1.0 / std::log(2.0);
  CalibrationResult out;
  out.best_max_abs_deviation = std::numeric_limits<double>::infinity();
  for (int step = 0; step <= 38; ++step) {
    const double noise = 0.1 + 0.05 * step;
    double max_dev = 0.0;
    for (std::size_t row = 0; row < 3; ++row) {
      for (std::size_t col = 0; col < 3; ++col) {
        const CellDraws& cell = draws[row][col];
        const double eh = cell.backward_est;
        const double th = 1.0 - eh;
        const double eg = cell.forward_est;
        const double tg = 1.0 - eg;
        const double b = kTableRelays * eh * eg;
        const double c = (th + noise) * (eg + 1.0);
        const double c_prime = eh * tg + th + (eg + 1.0) * noise;
        const double den_p1 = b * (c + 2.0 * eh * tg);
        const double den_p2 = b * c_prime;
        double sum_p1 = 0.0;
        double sum_p2 = 0.0;
        for (const double a_sq : cell.a_sq) {
          sum_p1 += std::log1p(a_sq / den_p1);
          sum_p2 += std::log1p(a_sq / den_p2);
        }
        const double n = static_cast<double>(cell.a_sq.size());
        const double cap_p1 = 0.5 * inv_log2 * sum_p1 / n;
        const double cap_p2 = 0.5 * inv_log2 * sum_p2 / n;
        max_dev = std::max(max_dev, std::abs(cap_p1 - kReferenceP1.cells[row][col]));
        max_dev = std::max(max_dev, std::abs(cap_p2 - kReferenceP2.cells[row][col]));
      }
    }
    out.sweep.push_back({noise, max_dev});
    if (max_dev < out.best_max_abs_deviation) {
      out.best_max_abs_deviation = max_dev;
      out.best_relay_noise_var = noise;
    }
  }
  return out;
}

FigureCurves reproduce_figures(int relays, int antenna_pairs,
                               const std::vector<int>& relay_antenna_counts,
                               const SweepSpec& sweep, const ExecPolicy& exec) {
  sweep.validate();
  if (sweep.axis != "backward" && sweep.axis != "forward") {
    throw ArgumentError("reproduce_figures: axis must be 'backward' or 'forward'");
  }
  if (relay_antenna_counts.empty()) {
    throw ArgumentError("reproduce_figures: need at least one relay antenna count");
  }

  auto held_or = [&](const std::string& key, double fallback) {
    const auto it = sweep.held.find(key);
    return it == sweep.held.end() ? fallback : it->second;
  };
  const double held_est = held_or("held", 0.9);
  const double dest_noise = held_or("sigma_z_sq", 1.0);
  const double ff_noise = held_or("sigma_zf_sq", 0.1 * dest_noise);

  FigureCurves out;
  out.axis = sweep.axis;
  out.relays = relays;
  out.antenna_pairs = antenna_pairs;
  out.held_value = held_est;
  out.dest_noise_var = dest_noise;
  out.feedforward_noise_var = ff_noise;

  for (const int n : relay_antenna_counts) {
    for (std::size_t vi = 0; vi < sweep.values.size(); ++vi) {
      const double value = sweep.values[vi];
      const double backward_est = sweep.axis == "backward" ? value : held_est;
      const double forward_est = sweep.axis == "forward" ? value : held_est;
      MimoConfig cfg = MimoConfig::homogeneous(antenna_pairs, n, relays, backward_est,
                                               forward_est);
      cfg.dest_noise_var.assign(cfg.dest_noise_var.size(), dest_noise);
      cfg.feedforward_noise_var = ff_noise;

      McPlan plan = sweep.plan;
      plan.master_seed = derive_experiment_seed(
          sweep.plan.master_seed,
          "figures:" + sweep.axis + ":" + std::to_string(n) + ":" + std::to_string(vi));
      const MimoSimResult result = simulate_all_schemes(cfg, plan, exec);
      out.points.push_back({Scheme::S1a, n, value, result.s1a});
      out.points.push_back({Scheme::S1b, n, value, result.s1b});
      out.points.push_back({Scheme::S2, n, value, result.s2});
    }
  }
  return out;
}

void write_rows(const Table2Result& result, int relays, std::uint64_t seed, RowWriter& writer) {
  for (const auto& proto : result.protocols) {
    for (const auto& row : proto.cells) {
      for (const auto& cell : row) {
        writer.add_row({std::string(to_string(proto.protocol)),
                        static_cast<std::int64_t>(relays), cell.backward_est, cell.forward_est,
                        result.relay_noise_var, cell.estimate.bits_per_channel_use,
                        cell.estimate.ci95_half_width, cell.estimate.trials,
                        static_cast<std::int64_t>(seed)});
      }
    }
    writer.add_row({std::string(to_string(proto.protocol)), static_cast<std::int64_t>(relays),
                    proto.perfect.backward_est, proto.perfect.forward_est,
                    result.relay_noise_var, proto.perfect.estimate.bits_per_channel_use,
                    proto.perfect.estimate.ci95_half_width, proto.perfect.estimate.trials,
                    static_cast<std::int64_t>(seed)});
  }
}

void write_rows(const FigureCurves& curves, int relays, std::uint64_t seed, RowWriter& writer) {
  for (const auto& point : curves.points) {
    writer.add_row({std::string(to_string(point.scheme)),
                    static_cast<std::int64_t>(curves.antenna_pairs),
                    static_cast<std::int64_t>(point.relay_antennas),
                    static_cast<std::int64_t>(relays), curves.axis, point.axis_value,
                    point.esnr.value, point.esnr.ci95_half_width, point.esnr.trials,
                    static_cast<std::int64_t>(seed)});
  }
}

void write_rows(const EsnrAverages& averages, int relays, RowWriter& writer) {
  writer.add_row({std::string("P3"), static_cast<std::int64_t>(relays), averages.p3});
  writer.add_row({std::string("P2"), static_cast<std::int64_t>(relays), averages.p2});
  writer.add_row({std::string("P1"), static_cast<std::int64_t>(relays), averages.p1});
}

}  // namespace relaylab
