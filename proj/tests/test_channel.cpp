#include <doctest.h>

#include <cmath>

#include "relaylab/channel.hpp"

using namespace relaylab;

namespace {

McPlan plan_of(std::int64_t trials, std::uint64_t seed) {
  McPlan plan;
  plan.trials = trials;
  plan.master_seed = seed;
  return plan;
}

}  // namespace

TEST_CASE("variance split sum identity is exact as constructed") {
  RandomStream s = derive_stream(2024, 0);
  for (int i = 0; i < 2000; ++i) {
    const double total = std::norm(sample_cgaussian(2.0, s)) + 1e-9;
    const double est = total * s.next_unit_open();
    const VarianceSplit split = VarianceSplit::from_total_est(total, est);
    CHECK(split.total - (split.est + split.err) == 0.0);
    CHECK_NOTHROW(split.validate());

    const double err = std::norm(sample_cgaussian(1.0, s));
    const VarianceSplit parts = VarianceSplit::from_parts(est, err);
    CHECK(parts.total - (parts.est + parts.err) == 0.0);
  }
}

TEST_CASE("variance split rejects bad arguments") {
  CHECK_THROWS_AS(VarianceSplit::from_total_est(1.0, 1.5), ArgumentError);
  CHECK_THROWS_AS(VarianceSplit::from_total_est(-1.0, 0.5), ArgumentError);
  CHECK_THROWS_AS(VarianceSplit::from_parts(-0.1, 0.5), ArgumentError);
  VarianceSplit broken;
  broken.total = 1.0;
  broken.est = 0.2;
  broken.err = 0.2;
  CHECK_THROWS_AS(broken.validate(), ArgumentError);
}

TEST_CASE("training config validation") {
  TrainingConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.coherence_length = 3;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = TrainingConfig{};
  cfg.tx_antennas = 2;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);  // training shorter than antennas
}

TEST_CASE("zero training signal forces a zero estimate") {
  TrainingConfig cfg;
  const Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(1, 1);
  Eigen::MatrixXcd y(1, 1);
  y(0, 0) = Complex(0.3, -0.7);
  const Eigen::MatrixXcd estimate = mmse_estimate(y, s, cfg);
  CHECK(estimate.norm() == 0.0);
}

TEST_CASE("noiseless high-SNR training recovers the channel") {
  TrainingConfig cfg;
  cfg.training_snr = 1e8;
  RandomStream stream = derive_stream(31, 0);
  const Complex h = sample_cgaussian(1.0, stream);
  Eigen::MatrixXcd s(1, 1);
  s(0, 0) = 1.0;
  Eigen::MatrixXcd y(1, 1);
  y(0, 0) = std::sqrt(cfg.training_snr) * h;  // no noise
  const Eigen::MatrixXcd estimate = mmse_estimate(y, s, cfg);
  CHECK(std::abs(estimate(0, 0) - h) < 1e-3);
}

TEST_CASE("mmse rejects mismatched shapes and singular training") {
  TrainingConfig cfg;
  cfg.tx_antennas = 2;
  cfg.training_length = 2;
  cfg.coherence_length = 3;
  CHECK_THROWS_AS(mmse_estimate(Eigen::MatrixXcd::Ones(3, 1), Eigen::MatrixXcd::Ones(2, 2), cfg),
                  ArgumentError);
  CHECK_THROWS_AS(mmse_estimate(Eigen::MatrixXcd::Ones(2, 1), Eigen::MatrixXcd::Ones(2, 3), cfg),
                  ArgumentError);

  // Duplicate training columns with a vanishing ridge: not solvable to
  // tolerance.
  cfg.training_snr = 1e30;
  Eigen::MatrixXcd duplicated(2, 2);
  duplicated << 1.0, 1.0, Complex(0, 1), Complex(0, 1);
  CHECK_THROWS_AS(mmse_estimate(Eigen::MatrixXcd::Ones(2, 1), duplicated, cfg), NumericalError);
}

TEST_CASE("split draws hit the degenerate corners exactly") {
  RandomStream stream = derive_stream(8, 0);
  const ChannelDraw perfect =
      draw_split_channel(VarianceSplit::from_total_est(1.0, 1.0), 2, 3, stream);
  CHECK(perfect.error.norm() == 0.0);
  CHECK(perfect.channel == perfect.estimate);

  const ChannelDraw blind =
      draw_split_channel(VarianceSplit::from_total_est(1.0, 0.0), 2, 3, stream);
  CHECK(blind.estimate.norm() == 0.0);
}

TEST_CASE("split draws match their variances and are uncorrelated") {
  const VarianceSplit split = VarianceSplit::from_total_est(1.0, 0.9);
  const McPlan plan = plan_of(1000000, 17);

  const auto trials = detail::run_trials<std::array<double, 4>>(
      [&](RandomStream& s) -> std::array<double, 4> {
        const ChannelDraw d = draw_split_channel(split, 1, 1, s);
        const Complex cross = d.estimate(0, 0) * std::conj(d.error(0, 0));
        return {std::norm(d.estimate(0, 0)), std::norm(d.error(0, 0)), std::norm(d.channel(0, 0)),
                cross.real()};
      },
      plan, {});
  std::vector<double> column(trials.size());
  auto moment = [&](int f) {
    for (std::size_t i = 0; i < trials.size(); ++i) column[i] = trials[i][f];
    return detail::reduce_moment(column);
  };
  const MomentEstimate est_power = moment(0);
  const MomentEstimate err_power = moment(1);
  const MomentEstimate tot_power = moment(2);
  const MomentEstimate cross = moment(3);
  CHECK(std::abs(est_power.mean - split.est) <= 3.0 * est_power.ci95_half_width);
  CHECK(std::abs(err_power.mean - split.err) <= 3.0 * err_power.ci95_half_width);
  CHECK(std::abs(tot_power.mean - split.total) <= 3.0 * tot_power.ci95_half_width);
  CHECK(std::abs(cross.mean) <= 3.0 * cross.ci95_half_width);
}

TEST_CASE("end-to-end training: orthogonality and the 0.5 variance split") {
  TrainingConfig cfg;  // scalar channel, unit training signal, rho_tau = 1
  const McPlan plan = plan_of(1000000, 55);
  const TrainingMoments m = training_moments(cfg, 1, plan, {2});

  CHECK(std::abs(m.cross_re.mean) <= 3.0 * m.cross_re.ci95_half_width);
  CHECK(std::abs(m.cross_im.mean) <= 3.0 * m.cross_im.ci95_half_width);
  // Scalar MMSE at rho=1, |s|=1: estimate and error variances are both 1/2.
  CHECK(std::abs(m.estimate_power.mean - 0.5) < 0.02 * 0.5);
  CHECK(std::abs(m.error_power.mean - 0.5) < 0.02 * 0.5);
  // The empirical split reassembles the unit prior.
  const double total = m.estimate_power.mean + m.error_power.mean;
  const double ci =
      3.0 * (m.estimate_power.ci95_half_width + m.error_power.ci95_half_width);
  CHECK(std::abs(total - 1.0) <= ci);
}

TEST_CASE("high-SNR training leaves negligible error power") {
  TrainingConfig cfg;
  cfg.training_snr = 1e8;
  const TrainingMoments m = training_moments(cfg, 1, plan_of(20000, 3), {});
  CHECK(m.error_power.mean <= 1e-6);
}

TEST_CASE("orthogonality holds for a matrix channel") {
  TrainingConfig cfg;
  cfg.tx_antennas = 2;
  cfg.training_length = 2;
  cfg.data_length = 2;
  cfg.coherence_length = 4;
  cfg.training_snr = 2.0;
  const MomentEstimate cross = verify_orthogonality(cfg, plan_of(200000, 9), 2, {2});
  CHECK(std::abs(cross.mean) <= 3.0 * cross.ci95_half_width);
}
