#include "relaylab/single_antenna.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace relaylab {

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::P1: return "P1";
    case Protocol::P2: return "P2";
    case Protocol::P3: return "P3";
  }
  return "?";
}

Protocol protocol_from_string(const std::string& name) {
  if (name == "P1" || name == "p1") return Protocol::P1;
  if (name == "P2" || name == "p2") return Protocol::P2;
  if (name == "P3" || name == "p3") return Protocol::P3;
  throw ArgumentError("unknown protocol '" + name + "' (expected P1, P2 or P3)");
}

void SingleAntennaConfig::validate() const {
  if (relays < 1) throw ArgumentError("SingleAntennaConfig: relays must be >= 1");
  if (!(source_power > 0.0) || !(relay_power > 0.0) || !(feedforward_power > 0.0)) {
    throw ArgumentError("SingleAntennaConfig: powers must be > 0");
  }
  if (!(signal_var > 0.0)) throw ArgumentError("SingleAntennaConfig: signal_var must be > 0");
  if (!(relay_noise_var >= 0.0) || !(dest_noise_var >= 0.0) || !(feedforward_noise_var >= 0.0)) {
    throw ArgumentError("SingleAntennaConfig: noise variances must be >= 0");
  }
  backward.validate();
  forward.validate();
}

SingleAntennaConfig SingleAntennaConfig::unit(int relays, double backward_est,
                                              double forward_est) {
  SingleAntennaConfig cfg;
  cfg.relays = relays;
  cfg.backward = VarianceSplit::from_total_est(1.0, backward_est);
  cfg.forward = VarianceSplit::from_total_est(1.0, forward_est);
  return cfg;
}

namespace {

struct SplitVars {
  double eh, th, sh;  // backward estimate / error / total variance
  double eg, tg, sg;  // forward estimate / error / total variance
};

SplitVars split_vars(const SingleAntennaConfig& cfg) {
  return {cfg.backward.est, cfg.backward.err, cfg.backward.total,
          cfg.forward.est,  cfg.forward.err,  cfg.forward.total};
}

[[noreturn]] void throw_degenerate(Protocol p, const std::string& detail) {
  throw DegenerateEstimation(std::string(to_string(p)) + " eSNR denominator is zero: " + detail);
}

std::string vanished_terms_p1(const SplitVars& v) {
  std::ostringstream os;
  os << "2*est_h*err_g = " << 2.0 * v.eh * v.tg << ", err_h*(total_g+est_g) = "
     << v.th * (v.sg + v.eg);
  return os.str();
}

/// Relay matched-filter normalization: E{|u_k|^2} * est_g with
/// u_k = r_k * conj(h_hat_k). Zero when either estimate variance vanishes.
double relay_norm_sq(const SingleAntennaConfig& cfg, const SplitVars& v) {
  return (cfg.source_power * (v.eh + v.sh) * cfg.signal_var + cfg.relay_noise_var) * v.eh * v.eg;
}

/// Power of the feedforwarded term A_k g_k = |h_hat|^2 conj(g_hat) g, via the
/// moment factorization var{h_hat h_hat*} * var{g_hat* g} at length 1.
double feedforward_term_power(const SplitVars& v) {
  return 2.0 * v.eh * v.eh * v.eg * (v.eg + v.sg);
}

}  // namespace

EsnrEstimate esnr_analytic(Protocol protocol, const SingleAntennaConfig& cfg) {
  cfg.validate();
  const SplitVars v = split_vars(cfg);
  const double k = static_cast<double>(cfg.relays);

  double num = 0.0;
  double den = 0.0;
  switch (protocol) {
    case Protocol::P1:
      num = (k + 3.0) * v.eh * v.eg;
      den = 2.0 * v.eh * v.tg + v.th * (v.sg + v.eg);
      if (den == 0.0) throw_degenerate(protocol, vanished_terms_p1(v));
      break;
    case Protocol::P2:
      num = (k + 1.0) * v.eh * v.eg;
      den = v.eh * v.tg + v.th * v.sg;
      if (den == 0.0) {
        std::ostringstream os;
        os << "est_h*err_g = " << v.eh * v.tg << ", err_h*total_g = " << v.th * v.sg;
        throw_degenerate(protocol, os.str());
      }
      break;
    case Protocol::P3:
      num = 2.0 * v.eh * (v.eg + v.sg) + (k - 1.0) * v.eh * v.eg;
      den = v.th * (v.eg + v.sg);
      if (den == 0.0) {
        std::ostringstream os;
        os << "err_h = " << v.th << ", est_g+total_g = " << v.eg + v.sg;
        throw_degenerate(protocol, os.str());
      }
      break;
  }
  return {num / den, EstimateMethod::analytic, 0.0, 0};
}

double esnr_grid_average(Protocol protocol, int relays) {
  if (relays < 1) throw ArgumentError("esnr_grid_average: relays must be >= 1");
  double sum = 0.0;
  for (int ih = 1; ih <= 9; ++ih) {
    for (int ig = 1; ig <= 9; ++ig) {
      const SingleAntennaConfig cfg =
          SingleAntennaConfig::unit(relays, 0.1 * ih, 0.1 * ig);
      sum += esnr_analytic(protocol, cfg).value;
    }
  }
  return sum / 81.0;
}

namespace {

/// P1 and P3 share the full physical chain; only the destination's split of
/// the received signal differs.
std::pair<double, double> chain_trial(Protocol protocol, const SingleAntennaConfig& cfg,
                                      const SplitVars& v, const SimOptions& options,
                                      double sqrt_rho_k, double sqrt_rho_k_over_rho_s,
                                      double ff_noise_gain, RandomStream& stream) {
  Complex known_real_part = 0.0;   // P1: sum |h_hat|^2 |g_hat|^2 (real)
  Complex effective = 0.0;         // P3: sum |h_hat|^2 conj(g_hat) g
  Complex residual = 0.0;          // protocol-specific estimation residue
  Complex relay_noise_sum = 0.0;

  for (int k = 0; k < cfg.relays; ++k) {
    const Complex h_hat = sample_cgaussian(v.eh, stream);
    const Complex h_err = sample_cgaussian(v.th, stream);
    const Complex g_hat = sample_cgaussian(v.eg, stream);
    const Complex g_err = sample_cgaussian(v.tg, stream);
    const Complex g = g_hat + g_err;
    const double h_hat_sq = std::norm(h_hat);

    if (protocol == Protocol::P1) {
      known_real_part += h_hat_sq * std::norm(g_hat);
      residual += h_hat_sq * std::conj(g_hat) * g_err +
                  h_err * std::conj(h_hat) * std::conj(g_hat) * g;
    } else {  // P3
      effective += h_hat_sq * std::conj(g_hat) * g;
      residual += h_err * std::conj(h_hat) * std::conj(g_hat) * g;
    }
    if (options.include_overall_noise) {
      const Complex n = sample_cgaussian(cfg.relay_noise_var, stream);
      relay_noise_sum += n * std::conj(h_hat) * std::conj(g_hat) * g;
    }
  }

  const Complex s = sample_cgaussian(cfg.signal_var, stream);

  Complex y_sig;
  Complex overall;
  if (protocol == Protocol::P1) {
    y_sig = sqrt_rho_k * s * known_real_part;
    overall = sqrt_rho_k * s * residual;
  } else {
    const Complex z_f = sample_cgaussian(cfg.feedforward_noise_var, stream);
    const Complex ff = ff_noise_gain * z_f;
    y_sig = sqrt_rho_k * s * (effective + ff);
    overall = sqrt_rho_k * s * (residual - ff);
  }
  if (options.include_overall_noise) {
    const Complex z = sample_cgaussian(cfg.dest_noise_var, stream);
    overall += sqrt_rho_k_over_rho_s * relay_noise_sum + z;
  }
  return {std::norm(y_sig), std::norm(overall)};
}

std::pair<double, double> compound_trial(const SingleAntennaConfig& cfg,
                                         const VarianceSplit& compound, const SplitVars& v,
                                         const SimOptions& options, double sqrt_rho_k,
                                         RandomStream& stream) {
  double known = 0.0;
  Complex residual = 0.0;
  for (int k = 0; k < cfg.relays; ++k) {
    Complex a_hat;
    Complex a_err;
    if (options.compound_model == CompoundModel::gaussian) {
      a_hat = sample_cgaussian(compound.est, stream);
      a_err = sample_cgaussian(compound.err, stream);
    } else {
      const Complex h_hat = sample_cgaussian(v.eh, stream);
      const Complex h_err = sample_cgaussian(v.th, stream);
      const Complex g_hat = sample_cgaussian(v.eg, stream);
      const Complex g_err = sample_cgaussian(v.tg, stream);
      a_hat = h_hat * g_hat;
      a_err = (h_hat + h_err) * (g_hat + g_err) - a_hat;
    }
    known += std::norm(a_hat);
    residual += a_err * std::conj(a_hat);
  }
  const Complex s = sample_cgaussian(cfg.signal_var, stream);
  const Complex y_sig = sqrt_rho_k * s * known;
  Complex overall = sqrt_rho_k * s * residual;
  if (options.include_overall_noise) {
    overall += sample_cgaussian(cfg.dest_noise_var, stream);
  }
  return {std::norm(y_sig), std::norm(overall)};
}

}  // namespace

EsnrEstimate simulate_destination(Protocol protocol, const SingleAntennaConfig& cfg,
                                  const McPlan& plan, const SimOptions& options,
                                  const ExecPolicy& exec) {
  cfg.validate();
  plan.validate();
  const SplitVars v = split_vars(cfg);

  RatioEstimate ratio;
  if (protocol == Protocol::P2) {
    const VarianceSplit compound = compound_split(cfg.backward, cfg.forward);
    if (compound.est == 0.0) {
      throw DegenerateEstimation(
          "P2 simulation: compound estimate variance est_h*est_g is zero");
    }
    const double norm_sq = (cfg.source_power * (compound.est + compound.total) * cfg.signal_var +
                            cfg.relay_noise_var) *
                           compound.est;
    const double sqrt_rho_k = std::sqrt(cfg.relay_power * cfg.source_power / norm_sq);
    ratio = estimate_ratio(
        [&, compound](RandomStream& stream) {
          return compound_trial(cfg, compound, v, options, sqrt_rho_k, stream);
        },
        plan, exec);
  } else {
    const double norm_sq = relay_norm_sq(cfg, v);
    if (norm_sq == 0.0) {
      throw DegenerateEstimation(std::string(to_string(protocol)) +
                                 " simulation: relay matched-filter normalization vanishes "
                                 "(est_h or est_g is zero)");
    }
    const double sqrt_rho_k = std::sqrt(cfg.relay_power * cfg.source_power / norm_sq);
    const double sqrt_rho_k_over_rho_s = std::sqrt(cfg.relay_power / norm_sq);
    double ff_noise_gain = 0.0;
    if (protocol == Protocol::P3) {
      const double term_power = feedforward_term_power(v);
      // z_f / sqrt(rho'_Rf) with rho'_Rf = rho_Rf / var{A_k g_k}.
      ff_noise_gain = std::sqrt(term_power / cfg.feedforward_power);
    }
    ratio = estimate_ratio(
        [&, v](RandomStream& stream) {
          return chain_trial(protocol, cfg, v, options, sqrt_rho_k, sqrt_rho_k_over_rho_s,
                             ff_noise_gain, stream);
        },
        plan, exec);
  }

  return {ratio.ratio, EstimateMethod::monte_carlo, ratio.ci95_half_width, ratio.trials};
}

namespace detail {

std::vector<CapacityTerms> capacity_trials(const SingleAntennaConfig& cfg, const McPlan& plan,
                                           const ExecPolicy& exec) {
  const SplitVars v = split_vars(cfg);
  const double k = static_cast<double>(cfg.relays);
  const double b = k * v.eh * v.eg;
  const double c = (v.th + cfg.relay_noise_var) * (v.eg + v.sg);
  const double c_prime =
      v.eh * v.tg + v.th * v.sg + (v.eg + v.sg) * cfg.relay_noise_var;
  const double den_p1 = b * (c + 2.0 * v.eh * v.tg);
  const double den_p2 = b * c_prime;
  const double den_p3 = b * c;
  if (den_p1 == 0.0 || den_p2 == 0.0 || den_p3 == 0.0) {
    throw DegenerateEstimation(
        "capacity bound is unbounded: noise-side variances vanish (perfect estimation with "
        "zero relay noise)");
  }
  const double inv_log2 = 1.0 / std::log(2.0);

  return run_trials<CapacityTerms>(
      [&, v](RandomStream& stream) {
        double a = 0.0;
        Complex cross = 0.0;
        for (int r = 0; r < cfg.relays; ++r) {
          const Complex h_hat = sample_cgaussian(v.eh, stream);
          const Complex g_hat = sample_cgaussian(v.eg, stream);
          const Complex g_err = sample_cgaussian(v.tg, stream);
          const double h_hat_sq = std::norm(h_hat);
          a += h_hat_sq * std::norm(g_hat);
          cross += h_hat_sq * std::conj(g_hat) * g_err;
        }
        const double a_sq = a * a;
        CapacityTerms t;
        t.i_p1 = std::log1p(a_sq / den_p1) * inv_log2;
        t.i_p2 = std::log1p(a_sq / den_p2) * inv_log2;
        t.i_p3 = std::log1p((a_sq + std::norm(cross)) / den_p3) * inv_log2;
        return t;
      },
      plan, exec);
}

}  // namespace detail

CapacityEstimate capacity_worst(Protocol protocol, const SingleAntennaConfig& cfg,
                                const McPlan& plan, const ExecPolicy& exec) {
  cfg.validate();
  plan.validate();
  // Zero estimate variance on either hop makes the known CSI term vanish
  // almost surely, so the bound is exactly zero.
  if (cfg.backward.est == 0.0 || cfg.forward.est == 0.0) {
    return {0.0, 0.0, 0, 0.5};
  }

  const auto terms = detail::capacity_trials(cfg, plan, exec);
  std::vector<double> values(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    switch (protocol) {
      case Protocol::P1: values[i] = terms[i].i_p1; break;
      case Protocol::P2: values[i] = terms[i].i_p2; break;
      case Protocol::P3: values[i] = terms[i].i_p3; break;
    }
  }
  const MomentEstimate mean = detail::reduce_moment(values);
  return {0.5 * mean.mean, 0.5 * mean.ci95_half_width, mean.trials, 0.5};
}

int training_duration(Protocol protocol, int relays) {
  if (relays < 1) throw ArgumentError("training_duration: relays must be >= 1");
  switch (protocol) {
    case Protocol::P1: return 2 * relays + 1;
    case Protocol::P2: return relays + 1;
    case Protocol::P3: return 3;
  }
  throw ArgumentError("training_duration: unknown protocol");
}

VarianceSplit compound_split(const VarianceSplit& backward, const VarianceSplit& forward) {
  backward.validate();
  forward.validate();
  return VarianceSplit::from_total_est(backward.total * forward.total,
                                       backward.est * forward.est);
}

}  // namespace relaylab
