#pragma once
//
// Single-antenna amplify-and-forward relay network with K relays and
// matched-filter relaying on estimated channels. Covers the three CSI
// transfer protocols:
//   P1 - destination learns the individual channel estimates,
//   P2 - destination learns the compound (backward x forward) estimates,
//   P3 - relays feedforward their effective-CSI terms to the destination.
// Provides closed-form effective SNRs, a signal-level Monte Carlo simulator
// as an independent check, worst-case-noise capacity lower bounds, and the
// CSI transfer timing of each protocol.

#include <string>

#include "relaylab/channel.hpp"
#include "relaylab/mc.hpp"

namespace relaylab {

enum class Protocol { P1, P2, P3 };

const char* to_string(Protocol p);
Protocol protocol_from_string(const std::string& name);

/// All scalars of the single-antenna network.
struct SingleAntennaConfig {
  int relays = 1;                      // K
  double source_power = 1.0;           // rho_s
  double relay_power = 1.0;            // rho_R (data phase)
  double feedforward_power = 1.0;      // rho_R,f (CSI transfer phase, P3)
  double signal_var = 1.0;             // data symbol variance
  double relay_noise_var = 1.0;        // common across relays
  double dest_noise_var = 1.0;         // destination noise in the data phase
  double feedforward_noise_var = 0.0;  // noise of the feedforward phase (P3)
  VarianceSplit backward;              // source -> relay channels h_k
  VarianceSplit forward;               // relay -> destination channels g_k

  void validate() const;

  /// Unit-total splits with the given estimate variances; all powers and
  /// noise variances at their defaults.
  static SingleAntennaConfig unit(int relays, double backward_est, double forward_est);
};

enum class EstimateMethod { analytic, monte_carlo };

/// Effective SNR point value. Analytic values carry a zero-width interval;
/// a +infinity value marks a measured zero-power overall noise.
struct EsnrEstimate {
  double value = 0.0;
  EstimateMethod method = EstimateMethod::analytic;
  double ci95_half_width = 0.0;
  std::int64_t trials = 0;
};

/// Worst-case-noise capacity lower bound in bits per channel use, including
/// the training-overhead prefactor (data fraction of the coherence block).
struct CapacityEstimate {
  double bits_per_channel_use = 0.0;
  double ci95_half_width = 0.0;
  std::int64_t trials = 0;
  double prefactor = 0.5;
};

/// Closed-form effective SNR of a protocol. Raises DegenerateEstimation when
/// the noise-side variances in the denominator all vanish.
EsnrEstimate esnr_analytic(Protocol protocol, const SingleAntennaConfig& cfg);

/// Arithmetic mean of the closed form over the 9x9 grid of estimate
/// variances {0.1, ..., 0.9}^2 at unit channel totals.
double esnr_grid_average(Protocol protocol, int relays);

/// How P2's compound channel estimates are modeled in the simulator.
/// `gaussian` draws the compound estimate/error as an independent Gaussian
/// pair from compound_split() (the statistics the closed form uses);
/// `product` forms the compound estimate literally as the product of the
/// individual channel estimates, which reproduces P1's statistics instead.
enum class CompoundModel { gaussian, product };

struct SimOptions {
  /// Adds the common overall noise (forwarded relay noise plus destination
  /// noise) to the measured noise power. Off for protocol comparison, where
  /// only the CSI-dependent residual matters. For P2 only the destination
  /// noise is added; the compound-channel model has no per-relay filter path.
  bool include_overall_noise = false;
  CompoundModel compound_model = CompoundModel::gaussian;
};

/// Signal-level Monte Carlo eSNR: per trial draws channels, estimates,
/// signal and noises, forms the normalized relay transmissions, splits the
/// destination signal into known-CSI signal and overall noise per protocol,
/// and returns the ratio of the mean powers.
EsnrEstimate simulate_destination(Protocol protocol, const SingleAntennaConfig& cfg,
                                  const McPlan& plan, const SimOptions& options = {},
                                  const ExecPolicy& exec = {});

/// Worst-case-noise capacity lower bound, Monte Carlo over realizations of
/// the channel estimates. Zero estimate variance on either hop gives exactly
/// zero capacity.
CapacityEstimate capacity_worst(Protocol protocol, const SingleAntennaConfig& cfg,
                                const McPlan& plan, const ExecPolicy& exec = {});

/// Symbol durations needed to transfer the CSI to the destination.
int training_duration(Protocol protocol, int relays);

/// Variance split of the compound channel a_k = h_k * g_k: totals and
/// estimates multiply, the error is the complement.
VarianceSplit compound_split(const VarianceSplit& backward, const VarianceSplit& forward);

namespace detail {
/// Per-trial mutual information terms of the three protocols under shared
/// draws; used by capacity_worst and the table reproduction.
struct CapacityTerms {
  double i_p1 = 0.0;
  double i_p2 = 0.0;
  double i_p3 = 0.0;
};
std::vector<CapacityTerms> capacity_trials(const SingleAntennaConfig& cfg, const McPlan& plan,
                                           const ExecPolicy& exec);
}  // namespace detail

}  // namespace relaylab
