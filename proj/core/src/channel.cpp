#include "relaylab/channel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace relaylab {

VarianceSplit VarianceSplit::from_parts(double est, double err) {
  if (!(est >= 0.0) || !(err >= 0.0)) {
    throw ArgumentError("VarianceSplit: est and err must be >= 0");
  }
  VarianceSplit s;
  s.est = est;
  s.err = err;
  s.total = est + err;
  return s;
}

VarianceSplit VarianceSplit::from_total_est(double total, double est) {
  if (!(total >= 0.0) || !(est >= 0.0)) {
    throw ArgumentError("VarianceSplit: total and est must be >= 0");
  }
  if (est > total) throw ArgumentError("VarianceSplit: est exceeds total");
  // Re-canonicalize total as est + (total - est) so the sum identity is exact.
  return from_parts(est, total - est);
}

void VarianceSplit::validate() const {
  if (!(total >= 0.0) || !(est >= 0.0) || !(err >= 0.0)) {
    throw ArgumentError("VarianceSplit: fields must be >= 0");
  }
  const double scale = std::max({1.0, total, est + err});
  if (std::abs(total - (est + err)) > 8e-16 * scale) {
    throw ArgumentError("VarianceSplit: total != est + err");
  }
}

void TrainingConfig::validate() const {
  if (training_length < 1 || data_length < 1) {
    throw ArgumentError("TrainingConfig: training and data lengths must be >= 1");
  }
  if (coherence_length != training_length + data_length) {
    throw ArgumentError("TrainingConfig: coherence_length != training_length + data_length");
  }
  if (tx_antennas < 1) throw ArgumentError("TrainingConfig: tx_antennas must be >= 1");
  if (training_length < tx_antennas) {
    throw ArgumentError("TrainingConfig: training_length < tx_antennas (not identifiable)");
  }
  if (!(training_snr > 0.0)) throw ArgumentError("TrainingConfig: training_snr must be > 0");
}

Eigen::MatrixXcd mmse_estimate(const Eigen::MatrixXcd& rx_training,
                               const Eigen::MatrixXcd& training,
                               const TrainingConfig& cfg) {
  cfg.validate();
  const auto m = static_cast<Eigen::Index>(cfg.tx_antennas);
  if (training.rows() != cfg.training_length || training.cols() != m) {
    throw ArgumentError("mmse_estimate: training matrix dimensions do not match config");
  }
  if (rx_training.rows() != cfg.training_length) {
    throw ArgumentError("mmse_estimate: received block row count does not match config");
  }

  const double ridge = static_cast<double>(cfg.tx_antennas) / cfg.training_snr;
  const Eigen::MatrixXcd gram =
      ridge * Eigen::MatrixXcd::Identity(m, m) + training.adjoint() * training;
  const Eigen::MatrixXcd rhs = training.adjoint() * rx_training;
  if (rhs.norm() == 0.0) {
    return Eigen::MatrixXcd::Zero(m, rx_training.cols());
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(gram);
  const Eigen::MatrixXcd solution = lu.solve(rhs);
  const double rel_residual = (gram * solution - rhs).norm() / rhs.norm();
  if (!(rel_residual <= 1e-10)) {
    throw NumericalError("mmse_estimate: linear system residual " + std::to_string(rel_residual) +
                         " exceeds 1e-10 (ill-conditioned training)");
  }
  return std::sqrt(ridge) * solution;
}

ChannelDraw draw_split_channel(const VarianceSplit& split, Eigen::Index rows, Eigen::Index cols,
                               RandomStream& stream) {
  split.validate();
  if (rows < 1 || cols < 1) throw ArgumentError("draw_split_channel: empty shape");
  ChannelDraw draw;
  draw.estimate.resize(rows, cols);
  draw.error.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) draw.estimate(r, c) = sample_cgaussian(split.est, stream);
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) draw.error(r, c) = sample_cgaussian(split.err, stream);
  }
  draw.channel = draw.estimate + draw.error;
  return draw;
}

Eigen::MatrixXcd dft_training(int training_length, int tx_antennas) {
  if (training_length < tx_antennas || tx_antennas < 1) {
    throw ArgumentError("dft_training: need training_length >= tx_antennas >= 1");
  }
  Eigen::MatrixXcd s(training_length, tx_antennas);
  for (int t = 0; t < training_length; ++t) {
    for (int m = 0; m < tx_antennas; ++m) {
      const double phase =
          2.0 * std::numbers::pi * static_cast<double>(t) * static_cast<double>(m) /
          static_cast<double>(training_length);
      s(t, m) = Complex(std::cos(phase), std::sin(phase));
    }
  }
  return s;
}

TrainingMoments training_moments(const TrainingConfig& cfg, int rx_antennas, const McPlan& plan,
                                 const ExecPolicy& exec) {
  cfg.validate();
  if (rx_antennas < 1) throw ArgumentError("training_moments: rx_antennas must be >= 1");

  const Eigen::MatrixXcd training = dft_training(cfg.training_length, cfg.tx_antennas);
  const auto m = static_cast<Eigen::Index>(cfg.tx_antennas);
  const auto n = static_cast<Eigen::Index>(rx_antennas);
  const auto t_len = static_cast<Eigen::Index>(cfg.training_length);
  const double tx_scale = std::sqrt(cfg.training_snr / static_cast<double>(cfg.tx_antennas));
  const double norm = 1.0 / static_cast<double>(m * n);

  auto trial = [&, training](RandomStream& stream) -> std::array<double, 4> {
    Eigen::MatrixXcd channel(m, n);
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) channel(r, c) = sample_cgaussian(1.0, stream);
    }
    Eigen::MatrixXcd noise(t_len, n);
    for (Eigen::Index r = 0; r < t_len; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) noise(r, c) = sample_cgaussian(1.0, stream);
    }
    const Eigen::MatrixXcd rx = tx_scale * training * channel + noise;
    const Eigen::MatrixXcd estimate = mmse_estimate(rx, training, cfg);
    const Eigen::MatrixXcd error = channel - estimate;

    Complex cross = 0.0;
    double est_power = 0.0;
    double err_power = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        cross += estimate(r, c) * std::conj(error(r, c));
        est_power += std::norm(estimate(r, c));
        err_power += std::norm(error(r, c));
      }
    }
    return {cross.real() * norm, cross.imag() * norm, est_power * norm, err_power * norm};
  };

  const auto values = detail::run_trials<std::array<double, 4>>(trial, plan, exec);
  std::vector<double> column(values.size());
  TrainingMoments out;
  MomentEstimate* fields[4] = {&out.cross_re, &out.cross_im, &out.estimate_power,
                               &out.error_power};
  for (int f = 0; f < 4; ++f) {
    for (std::size_t i = 0; i < values.size(); ++i) column[i] = values[i][static_cast<std::size_t>(f)];
    *fields[f] = detail::reduce_moment(column);
  }
  return out;
}

MomentEstimate verify_orthogonality(const TrainingConfig& cfg, const McPlan& plan,
                                    int rx_antennas, const ExecPolicy& exec) {
  return training_moments(cfg, rx_antennas, plan, exec).cross_re;
}

}  // namespace relaylab
