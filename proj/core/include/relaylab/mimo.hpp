#pragma once
//
// Multi-antenna relay network with relay partitioning: M source/destination
// antenna pairs, M disjoint subgroups of K relays, N antennas per relay,
// matched-filter relaying on each subgroup's own stream. Covers the moment
// identities for complex Gaussian vector products, the closed-form effective
// SNR of the feedforwarding scheme (S2), and a signal-level simulator for the
// genie-aided schemes (S1a perfect CSI, S1b imperfect CSI) and S2.

#include <string>
#include <vector>

#include "relaylab/channel.hpp"
#include "relaylab/mc.hpp"
#include "relaylab/single_antenna.hpp"

namespace relaylab {

enum class Scheme { S1a, S1b, S2 };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

/// All scalars of the multi-antenna network. Channel statistics are indexed
/// [subgroup][antenna]: backward[x][y] describes the channels between source
/// antenna y and the relays of subgroup x; forward[x][y] the channels between
/// those relays and destination antenna y.
struct MimoConfig {
  int antenna_pairs = 1;   // M
  int relay_antennas = 1;  // N
  int relays_per_group = 1;  // K
  double source_power = 1.0;
  double relay_power = 1.0;
  double feedforward_power = 1.0;
  std::vector<double> signal_var;      // per source antenna, size M
  std::vector<double> relay_noise_var; // per subgroup, size M
  std::vector<double> dest_noise_var;  // per destination antenna, size M
  double feedforward_noise_var = 0.0;
  std::vector<std::vector<VarianceSplit>> backward;  // M x M
  std::vector<std::vector<VarianceSplit>> forward;   // M x M

  void validate() const;

  /// Common estimate variances across all subgroups and antennas, unit
  /// channel totals, unit powers and unit noise variances. The feedforward
  /// noise defaults to one tenth of the destination noise.
  static MimoConfig homogeneous(int antenna_pairs, int relay_antennas, int relays_per_group,
                                double backward_est, double forward_est);
};

/// The five moment identities for products of complex Gaussian vectors.
enum class LemmaIdentity {
  product_factorization,  // var{s h hbar* g* gbar} = var{s} var{h hbar*} var{g* gbar}
  noise_factorization,    // var{n h* g* gbar} = var{n h*} var{g* gbar}
  self_product,           // var{h h*} = N (N+1) sigma_h^4
  estimate_product,       // var{h hhat*} = N sigma_hhat^2 (N sigma_hhat^2 + sigma_h^2)
  independent_product     // var{h h'*} = N sigma_h^2 sigma_h'^2
};

const char* to_string(LemmaIdentity id);
LemmaIdentity lemma_identity_from_string(const std::string& name);

/// Which flavor the barred vector takes in the factorized identities.
enum class VectorRole { self, estimate, independent };

struct LemmaParams {
  int vector_length = 1;  // N
  int data_length = 1;    // rows of the data/noise vectors
  double signal_var = 1.0;
  double noise_var = 1.0;
  VectorRole backward_bar = VectorRole::self;
  VectorRole forward_bar = VectorRole::self;
  double backward_var = 1.0;
  double backward_est_var = 1.0;    // must be <= backward_var
  double backward_indep_var = 1.0;  // variance of the independent partner
  double forward_var = 1.0;
  double forward_est_var = 1.0;
  double forward_indep_var = 1.0;

  void validate() const;
};

/// Closed-form value of a moment identity. var{.} is the total power E{|.|^2}
/// of the (zero-mean) product.
double lemma1_analytic(LemmaIdentity identity, const LemmaParams& params);

/// Monte Carlo power of the sampled vector product; the independent check of
/// lemma1_analytic.
MomentEstimate lemma1_mc(LemmaIdentity identity, const LemmaParams& params, const McPlan& plan,
                         const ExecPolicy& exec = {});

/// Two denominator terms of the S2 closed form are relay-noise-shaped yet
/// carry an interfering-stream signal variance as stated. The `literal`
/// reading keeps that; `relay_noise` substitutes the subgroup noise
/// variances instead. Both coincide when signal and relay noise variances
/// are equal.
enum class S2FormReading { literal, relay_noise };

/// Closed-form S2 numerator, denominator terms and normalization brackets.
struct S2FormTerms {
  double n1 = 0.0;
  double d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
  double a = 0.0, b = 0.0;
};

S2FormTerms s2_form_terms(const MimoConfig& cfg, S2FormReading reading = S2FormReading::literal);

/// Closed-form effective SNR of scheme S2. Representative-index convention:
/// tracked antenna pair i is the first one, the representative interferer j
/// the second, the representative third stream m the third (terms carrying
/// them vanish through their (M-1) / (M-2) factors when absent).
EsnrEstimate esnr_s2_analytic(const MimoConfig& cfg,
                              S2FormReading reading = S2FormReading::literal);

/// One simulation pass evaluates all three schemes on shared channel draws.
struct MimoSimResult {
  EsnrEstimate s1a;
  EsnrEstimate s1b;
  EsnrEstimate s2;
  /// Largest per-trial relative error of the effective-CSI decomposition
  /// (signal coefficient == kept part + discarded part for S2).
  double decomposition_max_rel_err = 0.0;
  /// Empirical correlation E{conj(s) * V} between the data symbol and the
  /// overall noise of S2 (the worst-case-noise precondition).
  MomentEstimate signal_noise_corr_re;
  MomentEstimate signal_noise_corr_im;
};

MimoSimResult simulate_all_schemes(const MimoConfig& cfg, const McPlan& plan,
                                   const ExecPolicy& exec = {});

/// Signal-level Monte Carlo effective SNR of one scheme at the first
/// destination antenna. Raises DegenerateEstimation if the measured noise
/// power is exactly zero.
EsnrEstimate simulate_mimo(Scheme scheme, const MimoConfig& cfg, const McPlan& plan,
                           const ExecPolicy& exec = {});

/// Assigns the M*K relays to M disjoint subgroups of K; subgroup x serves the
/// x-th source/destination antenna pair.
std::vector<std::vector<int>> partition_relays(int antenna_pairs, int relays_per_group);

}  // namespace relaylab
