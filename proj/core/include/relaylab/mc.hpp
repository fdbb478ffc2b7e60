#pragma once
//
// Deterministic Monte Carlo engine: counter-seeded complex Gaussian sampling
// and fixed-order moment / power-ratio estimation over parallel trial chunks.
//
// Reproducibility contract: trial t of a plan draws from
// derive_stream(master_seed, t), and the reduction walks stored per-trial
// values in ascending trial order on one thread. Results are therefore
// bit-identical for any worker count and any chunk size.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <utility>
#include <vector>

#include "relaylab/errors.hpp"

namespace relaylab {

using Complex = std::complex<double>;

/// Trial budget, master seed and work partitioning for one Monte Carlo run.
struct McPlan {
  std::int64_t trials = 0;
  std::uint64_t master_seed = 0;
  std::int64_t chunk_size = 16384;

  void validate() const {
    if (trials < 1) throw ArgumentError("McPlan: trials must be >= 1");
    if (chunk_size < 1) throw ArgumentError("McPlan: chunk_size must be >= 1");
  }

  std::int64_t chunk_count() const { return (trials + chunk_size - 1) / chunk_size; }
};

/// Execution knobs. Must never change numerical results, only wall clock.
struct ExecPolicy {
  int workers = 1;
};

/// xoshiro256++ stream. Construct through derive_stream().
class RandomStream {
 public:
  explicit RandomStream(const std::array<std::uint64_t, 4>& state) : s_(state) {}

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in (0, 1]; never 0, so it is safe under log().
  double next_unit_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Independent, reproducible stream for a (master_seed, index) pair.
/// Distinct pairs yield statistically independent streams.
inline RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t seed_state = master_seed;
  const std::uint64_t seed_hash = detail::splitmix64(seed_state);
  std::uint64_t index_state = index;
  const std::uint64_t index_hash = detail::splitmix64(index_state);
  std::uint64_t expand = seed_hash ^ (index_hash * 0xFF51AFD7ED558CCDULL);
  std::array<std::uint64_t, 4> state{};
  for (auto& word : state) word = detail::splitmix64(expand);
  return RandomStream(state);
}

/// Circularly symmetric complex Gaussian draw with E{|x|^2} = variance;
/// real and imaginary parts are independent N(0, variance/2).
/// variance == 0 returns exactly (0, 0) while consuming the same two stream
/// values, so draw sequences stay aligned across configurations.
inline Complex sample_cgaussian(double variance, RandomStream& stream) {
  if (!(variance >= 0.0)) throw ArgumentError("sample_cgaussian: variance must be >= 0");
  const double u1 = stream.next_unit_open();
  const double u2 = stream.next_unit_open();
  if (variance == 0.0) return {0.0, 0.0};
  const double radius = std::sqrt(-variance * std::log(u1));
  const double phase = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(phase), radius * std::sin(phase)};
}

struct MomentEstimate {
  double mean = 0.0;
  double variance_of_mean = 0.0;
  std::int64_t trials = 0;
  double ci95_half_width = 0.0;

  bool operator==(const MomentEstimate&) const = default;
};

/// Ratio of two mean powers with a delta-method 95% confidence interval.
/// A zero measured denominator yields ratio = +infinity.
struct RatioEstimate {
  double numerator_mean = 0.0;
  double denominator_mean = 0.0;
  double ratio = 0.0;
  double ci95_half_width = 0.0;
  std::int64_t trials = 0;

  bool is_infinite() const { return std::isinf(ratio); }
};

namespace detail {

/// Evaluates `generator` for every trial of the plan and stores the outputs
/// at their global trial index. Chunks may run on several threads; each trial
/// owns its derived stream, so the stored values depend only on
/// (master_seed, trial index).
template <typename T, typename F>
std::vector<T> run_trials(F&& generator, const McPlan& plan, const ExecPolicy& exec) {
  plan.validate();
  std::vector<T> values(static_cast<std::size_t>(plan.trials));
  const std::int64_t n_chunks = plan.chunk_count();

  auto run_chunk = [&](std::int64_t chunk) {
    const std::int64_t begin = chunk * plan.chunk_size;
    const std::int64_t end = std::min(begin + plan.chunk_size, plan.trials);
    for (std::int64_t t = begin; t < end; ++t) {
      RandomStream stream = derive_stream(plan.master_seed, static_cast<std::uint64_t>(t));
      values[static_cast<std::size_t>(t)] = generator(stream);
    }
  };

  const int workers = std::max(1, exec.workers);
  if (workers == 1 || n_chunks == 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return values;
  }

  std::atomic<std::int64_t> next_chunk{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker_loop = [&] {
    try {
      for (std::int64_t c = next_chunk.fetch_add(1); c < n_chunks; c = next_chunk.fetch_add(1)) {
        run_chunk(c);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      next_chunk.store(n_chunks);
    }
  };

  const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, n_chunks));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker_loop);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return values;
}

MomentEstimate reduce_moment(const std::vector<double>& values);
RatioEstimate reduce_ratio(const std::vector<std::pair<double, double>>& values);

}  // namespace detail

/// Mean of `generator` over exactly plan.trials evaluations. The generator is
/// called once per trial with that trial's stream and must draw only from it.
template <typename F>
MomentEstimate estimate_moment(F&& generator, const McPlan& plan, const ExecPolicy& exec = {}) {
  const auto values = detail::run_trials<double>(std::forward<F>(generator), plan, exec);
  return detail::reduce_moment(values);
}

/// Ratio of the mean numerator to the mean denominator, with a delta-method
/// confidence interval that accounts for their per-trial covariance.
template <typename F>
RatioEstimate estimate_ratio(F&& generator, const McPlan& plan, const ExecPolicy& exec = {}) {
  const auto values =
      detail::run_trials<std::pair<double, double>>(std::forward<F>(generator), plan, exec);
  return detail::reduce_ratio(values);
}

}  // namespace relaylab
