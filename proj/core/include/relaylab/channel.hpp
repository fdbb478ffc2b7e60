#pragma once
//
// Block-fading channel model: estimate/error variance splits, independent
// split draws, the training-based MMSE estimator, and end-to-end moment
// checks that the split model matches what training actually produces.

#include <Eigen/Dense>

#include "relaylab/mc.hpp"

namespace relaylab {

/// Total / estimate / error variance triple of one channel coefficient
/// population, with total == est + err held exactly by construction.
struct VarianceSplit {
  double total = 1.0;
  double est = 1.0;
  double err = 0.0;

  static VarianceSplit from_parts(double est, double err);
  static VarianceSplit from_total_est(double total, double est);

  void validate() const;
};

/// Training-phase configuration. The coherence block of `coherence_length`
/// symbols is spent as training_length + data_length.
struct TrainingConfig {
  int coherence_length = 2;
  int training_length = 1;
  int data_length = 1;
  double training_snr = 1.0;  // rho_tau; noise entries are unit variance
  int tx_antennas = 1;

  void validate() const;
};

/// One realization of a channel matrix split into estimate + error.
/// channel == estimate + error holds exactly elementwise.
struct ChannelDraw {
  Eigen::MatrixXcd estimate;
  Eigen::MatrixXcd error;
  Eigen::MatrixXcd channel;
};

/// MMSE channel estimate from the received training block. Assumes a unit
/// variance channel prior and unit variance noise; the training SNR carries
/// the power scaling. The inner tx_antennas x tx_antennas system is solved,
/// not inverted, and a relative residual above 1e-10 raises NumericalError.
Eigen::MatrixXcd mmse_estimate(const Eigen::MatrixXcd& rx_training,
                               const Eigen::MatrixXcd& training,
                               const TrainingConfig& cfg);

/// Draws estimate and error entries independently as CN(0, est) and
/// CN(0, err); the channel is their sum.
ChannelDraw draw_split_channel(const VarianceSplit& split, Eigen::Index rows, Eigen::Index cols,
                               RandomStream& stream);

/// Unit-modulus training matrix with orthogonal columns (DFT columns),
/// training^H * training == training_length * I.
Eigen::MatrixXcd dft_training(int training_length, int tx_antennas);

/// Moments of the end-to-end training pipeline
/// (true channel -> received training block -> MMSE estimate):
/// the estimate/error cross moment and the estimate/error powers,
/// all normalized per coefficient.
struct TrainingMoments {
  MomentEstimate cross_re;
  MomentEstimate cross_im;
  MomentEstimate estimate_power;
  MomentEstimate error_power;
};

TrainingMoments training_moments(const TrainingConfig& cfg, int rx_antennas, const McPlan& plan,
                                 const ExecPolicy& exec = {});

/// Empirical cross moment E{estimate * conj(error)} (real part, normalized
/// per coefficient) of the end-to-end training pipeline. Unbiased MMSE makes
/// this vanish.
MomentEstimate verify_orthogonality(const TrainingConfig& cfg, const McPlan& plan,
                                    int rx_antennas = 1, const ExecPolicy& exec = {});

}  // namespace relaylab
