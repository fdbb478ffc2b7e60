#include "relaylab/mimo.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace relaylab {

namespace {
constexpr int kMaxAntennas = 16;
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::S1a: return "S1a";
    case Scheme::S1b: return "S1b";
    case Scheme::S2: return "S2";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "S1a" || name == "s1a") return Scheme::S1a;
  if (name == "S1b" || name == "s1b") return Scheme::S1b;
  if (name == "S2" || name == "s2") return Scheme::S2;
  throw ArgumentError("unknown scheme '" + name + "' (expected S1a, S1b or S2)");
}

const char* to_string(LemmaIdentity id) {
  switch (id) {
    case LemmaIdentity::product_factorization: return "product_factorization";
    case LemmaIdentity::noise_factorization: return "noise_factorization";
    case LemmaIdentity::self_product: return "self_product";
    case LemmaIdentity::estimate_product: return "estimate_product";
    case LemmaIdentity::independent_product: return "independent_product";
  }
  return "?";
}

LemmaIdentity lemma_identity_from_string(const std::string& name) {
  if (name == "product_factorization") return LemmaIdentity::product_factorization;
  if (name == "noise_factorization") return LemmaIdentity::noise_factorization;
  if (name == "self_product") return LemmaIdentity::self_product;
  if (name == "estimate_product") return LemmaIdentity::estimate_product;
  if (name == "independent_product") return LemmaIdentity::independent_product;
  throw ArgumentError("unknown lemma identity '" + name + "'");
}

void MimoConfig::validate() const {
  const auto m = static_cast<std::size_t>(antenna_pairs);
  if (antenna_pairs < 1 || relay_antennas < 1 || relays_per_group < 1) {
    throw ArgumentError("MimoConfig: antenna_pairs, relay_antennas, relays_per_group must be >= 1");
  }
  if (antenna_pairs > kMaxAntennas || relay_antennas > kMaxAntennas) {
    throw ArgumentError("MimoConfig: supports at most 16 antenna pairs / relay antennas");
  }
  if (!(source_power > 0.0) || !(relay_power > 0.0) || !(feedforward_power > 0.0)) {
    throw ArgumentError("MimoConfig: powers must be > 0");
  }
  if (signal_var.size() != m || relay_noise_var.size() != m || dest_noise_var.size() != m) {
    throw ArgumentError("MimoConfig: per-antenna variance arrays must have size M");
  }
  for (double v : signal_var) {
    if (!(v > 0.0)) throw ArgumentError("MimoConfig: signal variances must be > 0");
  }
  for (double v : relay_noise_var) {
    if (!(v >= 0.0)) throw ArgumentError("MimoConfig: relay noise variances must be >= 0");
  }
  for (double v : dest_noise_var) {
    if (!(v >= 0.0)) throw ArgumentError("MimoConfig: destination noise variances must be >= 0");
  }
  if (!(feedforward_noise_var >= 0.0)) {
    throw ArgumentError("MimoConfig: feedforward_noise_var must be >= 0");
  }
  if (backward.size() != m || forward.size() != m) {
    throw ArgumentError("MimoConfig: channel statistic arrays must have size M x M");
  }
  for (const auto& row : backward) {
    if (row.size() != m) throw ArgumentError("MimoConfig: backward rows must have size M");
    for (const auto& split : row) split.validate();
  }
  for (const auto& row : forward) {
    if (row.size() != m) throw ArgumentError("MimoConfig: forward rows must have size M");
    for (const auto& split : row) split.validate();
  }
}

MimoConfig MimoConfig::homogeneous(int antenna_pairs, int relay_antennas, int relays_per_group,
                                   double backward_est, double forward_est) {
  MimoConfig cfg;
  cfg.antenna_pairs = antenna_pairs;
  cfg.relay_antennas = relay_antennas;
  cfg.relays_per_group = relays_per_group;
  const auto m = static_cast<std::size_t>(antenna_pairs);
  cfg.signal_var.assign(m, 1.0);
  cfg.relay_noise_var.assign(m, 1.0);
  cfg.dest_noise_var.assign(m, 1.0);
  cfg.feedforward_noise_var = 0.1;
  const VarianceSplit b = VarianceSplit::from_total_est(1.0, backward_est);
  const VarianceSplit f = VarianceSplit::from_total_est(1.0, forward_est);
  cfg.backward.assign(m, std::vector<VarianceSplit>(m, b));
  cfg.forward.assign(m, std::vector<VarianceSplit>(m, f));
  return cfg;
}

void LemmaParams::validate() const {
  if (vector_length < 1 || vector_length > kMaxAntennas) {
    throw ArgumentError("LemmaParams: vector_length must be in [1, 16]");
  }
  if (data_length < 1 || data_length > 64) {
    throw ArgumentError("LemmaParams: data_length must be in [1, 64]");
  }
  for (double v : {signal_var, noise_var, backward_var, backward_est_var, backward_indep_var,
                   forward_var, forward_est_var, forward_indep_var}) {
    if (!(v >= 0.0)) throw ArgumentError("LemmaParams: variances must be >= 0");
  }
  if (backward_bar == VectorRole::estimate && backward_est_var > backward_var) {
    throw ArgumentError("LemmaParams: backward_est_var exceeds backward_var");
  }
  if (forward_bar == VectorRole::estimate && forward_est_var > forward_var) {
    throw ArgumentError("LemmaParams: forward_est_var exceeds forward_var");
  }
}

namespace {

double pair_power(VectorRole role, int n, double var, double est_var, double indep_var) {
  const double nd = static_cast<double>(n);
  switch (role) {
    case VectorRole::self: return nd * (nd + 1.0) * var * var;
    case VectorRole::estimate: return nd * est_var * (nd * est_var + var);
    case VectorRole::independent: return nd * var * indep_var;
  }
  return 0.0;
}

/// Draws the (vector, barred vector) pair for one role. The vector has
/// CN(0, var) entries; the bar is the vector itself, its estimate, or an
/// independent partner.
struct VectorPair {
  std::array<Complex, kMaxAntennas> vec{};
  std::array<Complex, kMaxAntennas> bar{};
};

VectorPair draw_pair(VectorRole role, int n, double var, double est_var, double indep_var,
                     RandomStream& stream) {
  VectorPair p;
  switch (role) {
    case VectorRole::self:
      for (int a = 0; a < n; ++a) {
        p.vec[a] = sample_cgaussian(var, stream);
        p.bar[a] = p.vec[a];
      }
      break;
    case VectorRole::estimate:
      for (int a = 0; a < n; ++a) p.bar[a] = sample_cgaussian(est_var, stream);
      for (int a = 0; a < n; ++a) p.vec[a] = p.bar[a] + sample_cgaussian(var - est_var, stream);
      break;
    case VectorRole::independent:
      for (int a = 0; a < n; ++a) p.vec[a] = sample_cgaussian(var, stream);
      for (int a = 0; a < n; ++a) p.bar[a] = sample_cgaussian(indep_var, stream);
      break;
  }
  return p;
}

}  // namespace

double lemma1_analytic(LemmaIdentity identity, const LemmaParams& params) {
  params.validate();
  const int n = params.vector_length;
  const double backward_factor = pair_power(params.backward_bar, n, params.backward_var,
                                            params.backward_est_var, params.backward_indep_var);
  const double forward_factor = pair_power(params.forward_bar, n, params.forward_var,
                                           params.forward_est_var, params.forward_indep_var);
  switch (identity) {
    case LemmaIdentity::self_product:
      return pair_power(VectorRole::self, n, params.backward_var, 0.0, 0.0);
    case LemmaIdentity::estimate_product:
      return pair_power(VectorRole::estimate, n, params.backward_var, params.backward_est_var, 0.0);
    case LemmaIdentity::independent_product:
      return pair_power(VectorRole::independent, n, params.backward_var, 0.0,
                        params.backward_indep_var);
    case LemmaIdentity::product_factorization:
      return static_cast<double>(params.data_length) * params.signal_var * backward_factor *
             forward_factor;
    case LemmaIdentity::noise_factorization:
      return static_cast<double>(params.data_length) * static_cast<double>(n) * params.noise_var *
             params.backward_var * forward_factor;
  }
  throw ArgumentError("lemma1_analytic: unknown identity");
}

MomentEstimate lemma1_mc(LemmaIdentity identity, const LemmaParams& params, const McPlan& plan,
                         const ExecPolicy& exec) {
  params.validate();
  const int n = params.vector_length;
  const int t_len = params.data_length;

  auto backward_pair = [&](RandomStream& stream) {
    return draw_pair(params.backward_bar, n, params.backward_var, params.backward_est_var,
                     params.backward_indep_var, stream);
  };
  auto forward_pair = [&](RandomStream& stream) {
    return draw_pair(params.forward_bar, n, params.forward_var, params.forward_est_var,
                     params.forward_indep_var, stream);
  };
  auto dot_vec_bar = [n](const VectorPair& p) {
    Complex acc = 0.0;
    for (int a = 0; a < n; ++a) acc += p.vec[a] * std::conj(p.bar[a]);
    return acc;
  };
  auto dot_conj_vec_bar = [n](const VectorPair& p) {
    Complex acc = 0.0;
    for (int a = 0; a < n; ++a) acc += std::conj(p.vec[a]) * p.bar[a];
    return acc;
  };

  switch (identity) {
    case LemmaIdentity::self_product:
    case LemmaIdentity::estimate_product:
    case LemmaIdentity::independent_product: {
      const VectorRole role = identity == LemmaIdentity::self_product ? VectorRole::self
                              : identity == LemmaIdentity::estimate_product
                                  ? VectorRole::estimate
                                  : VectorRole::independent;
      return estimate_moment(
          [&, role](RandomStream& stream) {
            const VectorPair p = draw_pair(role, n, params.backward_var, params.backward_est_var,
                                           params.backward_indep_var, stream);
            Complex acc = 0.0;
            for (int a = 0; a < n; ++a) acc += p.vec[a] * std::conj(p.bar[a]);
            return std::norm(acc);
          },
          plan, exec);
    }
    case LemmaIdentity::product_factorization:
      return estimate_moment(
          [&](RandomStream& stream) {
            double s_power = 0.0;
            for (int t = 0; t < t_len; ++t) {
              s_power += std::norm(sample_cgaussian(params.signal_var, stream));
            }
            const VectorPair hp = backward_pair(stream);
            const VectorPair gp = forward_pair(stream);
            const Complex product = dot_vec_bar(hp) * dot_conj_vec_bar(gp);
            return s_power * std::norm(product);
          },
          plan, exec);
    case LemmaIdentity::noise_factorization:
      return estimate_moment(
          [&](RandomStream& stream) {
            std::array<Complex, kMaxAntennas> h{};
            for (int a = 0; a < n; ++a) h[a] = sample_cgaussian(params.backward_var, stream);
            double rows_power = 0.0;
            for (int t = 0; t < t_len; ++t) {
              Complex row = 0.0;
              for (int a = 0; a < n; ++a) {
                row += sample_cgaussian(params.noise_var, stream) * std::conj(h[a]);
              }
              rows_power += std::norm(row);
            }
            const VectorPair gp = forward_pair(stream);
            return rows_power * std::norm(dot_conj_vec_bar(gp));
          },
          plan, exec);
  }
  throw ArgumentError("lemma1_mc: unknown identity");
}

S2FormTerms s2_form_terms(const MimoConfig& cfg, S2FormReading reading) {
  cfg.validate();
  const int m_count = cfg.antenna_pairs;
  const int i = 0;
  const int j = m_count >= 2 ? 1 : 0;
  const int m = m_count >= 3 ? 2 : j;

  const double nd = static_cast<double>(cfg.relay_antennas);
  const double kd = static_cast<double>(cfg.relays_per_group);
  const double md = static_cast<double>(m_count);
  const double m_minus_2 = std::max(md - 2.0, 0.0);
  const double rho_s = cfg.source_power;

  const double eh_ii = cfg.backward[i][i].est;
  const double th_ii = cfg.backward[i][i].err;
  const double sh_ii = cfg.backward[i][i].total;
  const double sh_ij = cfg.backward[i][j].total;
  const double eh_jj = cfg.backward[j][j].est;
  const double sh_jj = cfg.backward[j][j].total;
  const double sh_jm = cfg.backward[j][m].total;
  const double sh_ji = cfg.backward[j][i].total;
  const double eg_ii = cfg.forward[i][i].est;
  const double sg_ii = cfg.forward[i][i].total;
  const double sg_ji = cfg.forward[j][i].total;
  const double ss_i = cfg.signal_var[static_cast<std::size_t>(i)];
  const double ss_j = cfg.signal_var[static_cast<std::size_t>(j)];
  const double ss_m = cfg.signal_var[static_cast<std::size_t>(m)];
  const double sn_i = cfg.relay_noise_var[static_cast<std::size_t>(i)];
  const double sn_j = cfg.relay_noise_var[static_cast<std::size_t>(j)];

  const double fwd_ii = nd * eg_ii + sg_ii;

  S2FormTerms t;
  t.a = rho_s * ((nd * eh_ii + sh_ii) * ss_i + (md - 1.0) * sh_ij * ss_j) + sn_i;
  t.b = rho_s * (sh_ji * ss_i + (nd * eh_jj + sh_jj) * ss_j + m_minus_2 * sh_jm * ss_m) + sn_j;
  t.n1 = rho_s *
         ((nd + 1.0) * eh_ii * fwd_ii + (kd - 1.0) * nd * nd * eh_ii * eg_ii) * ss_i / t.a;
  t.d1 = rho_s * (th_ii * fwd_ii * ss_i + (md - 1.0) * sh_ij * fwd_ii * ss_j) / t.a;
  const double d3_var = reading == S2FormReading::literal ? ss_j : sn_i;
  const double d4_var = reading == S2FormReading::literal ? ss_j : sn_j;
  t.d3 = fwd_ii * d3_var / t.a;
  if (m_count >= 2) {
    t.d2 = rho_s * (md - 1.0) *
           ((nd * eh_jj + sh_jj) * ss_j + m_minus_2 * sh_jm * ss_m + sh_ji * ss_i) * sg_ji / t.b;
    t.d4 = (md - 1.0) * sg_ji * d4_var / t.b;
  }
  return t;
}

EsnrEstimate esnr_s2_analytic(const MimoConfig& cfg, S2FormReading reading) {
  const S2FormTerms t = s2_form_terms(cfg, reading);
  const double den = t.d1 + t.d2 + t.d3 + t.d4;
  if (den == 0.0) {
    throw DegenerateEstimation("S2 eSNR denominator is zero (all noise-side terms vanish)");
  }
  return {t.n1 / den, EstimateMethod::analytic, 0.0, 0};
}

namespace {

struct MimoTrialOut {
  double s1a_num, s1a_den;
  double s1b_num, s1b_den;
  double s2_num, s2_den;
  double decomp_rel_err;
  double corr_re, corr_im;
};

/// Per-subgroup constants of the printed ensemble normalizations, for both
/// the imperfect-CSI matched filter and its perfect-CSI variant.
struct SubgroupConstants {
  double coef_imp;   // sqrt(rho_x / N)
  double noise_imp;  // sqrt(rho_x / (rho_s N))
  double coef_p;
  double noise_p;
};

struct SimConstants {
  std::vector<SubgroupConstants> sub;
  double ff_gain;  // sqrt(rho_0 / rho'_Rf)
};

SimConstants sim_constants(const MimoConfig& cfg) {
  const double nd = static_cast<double>(cfg.relay_antennas);
  SimConstants out;
  out.sub.resize(static_cast<std::size_t>(cfg.antenna_pairs));
  for (int x = 0; x < cfg.antenna_pairs; ++x) {
    const auto xu = static_cast<std::size_t>(x);
    const double eh = cfg.backward[xu][xu].est;
    const double sh = cfg.backward[xu][xu].total;
    const double eg = cfg.forward[xu][xu].est;
    const double sg = cfg.forward[xu][xu].total;
    if (eh == 0.0 || eg == 0.0 || sh == 0.0 || sg == 0.0) {
      throw DegenerateEstimation(
          "mimo simulation: matched-filter normalization vanishes for subgroup " +
          std::to_string(x));
    }
    double interference = 0.0;
    for (int y = 0; y < cfg.antenna_pairs; ++y) {
      if (y == x) continue;
      interference += cfg.backward[xu][static_cast<std::size_t>(y)].total *
                      cfg.signal_var[static_cast<std::size_t>(y)];
    }
    const double bracket_imp =
        cfg.source_power * ((nd * eh + sh) * cfg.signal_var[xu] + interference) +
        cfg.relay_noise_var[xu];
    const double bracket_p =
        cfg.source_power * ((nd * sh + sh) * cfg.signal_var[xu] + interference) +
        cfg.relay_noise_var[xu];
    const double rho_imp = cfg.relay_power / (bracket_imp * nd * eh * eg);
    const double rho_p = cfg.relay_power / (bracket_p * nd * sh * sg);
    out.sub[xu] = {std::sqrt(rho_imp / nd), std::sqrt(rho_imp / (cfg.source_power * nd)),
                   std::sqrt(rho_p / nd), std::sqrt(rho_p / (cfg.source_power * nd))};
  }
  // var{A g} = var{h_hat h_hat*} var{g_hat* g} for the tracked subgroup.
  const double eh0 = cfg.backward[0][0].est;
  const double eg0 = cfg.forward[0][0].est;
  const double sg0 = cfg.forward[0][0].total;
  const double ff_term_power =
      nd * (nd + 1.0) * eh0 * eh0 * nd * eg0 * (nd * eg0 + sg0);
  const double rho0 =
      out.sub[0].coef_imp * out.sub[0].coef_imp * nd;  // recover rho_0 from sqrt(rho_0/N)
  out.ff_gain = std::sqrt(rho0 * ff_term_power / cfg.feedforward_power);
  return out;
}

MimoTrialOut mimo_trial(const MimoConfig& cfg, const SimConstants& consts, RandomStream& stream) {
  const int m_count = cfg.antenna_pairs;
  const int n = cfg.relay_antennas;

  std::array<Complex, kMaxAntennas> coef_imp{};  // stream coefficients at destination 0
  std::array<Complex, kMaxAntennas> coef_p{};
  Complex kept_sum = 0.0;       // own-subgroup all-estimates part (feedforwarded)
  Complex discarded_sum = 0.0;  // own-subgroup estimation-error part
  Complex cross_carry = 0.0;    // other subgroups carrying stream 0
  Complex own_sum_p = 0.0;      // perfect-CSI analogues, associated identically
  Complex cross_carry_p = 0.0;
  Complex v_imp = 0.0;
  Complex v_p = 0.0;

  std::array<Complex, kMaxAntennas> h_hat;
  std::array<Complex, kMaxAntennas> h_own;
  std::array<Complex, kMaxAntennas> g_hat;
  std::array<Complex, kMaxAntennas> g_own;
  std::array<Complex, kMaxAntennas> g_dest0;

  for (int x = 0; x < m_count; ++x) {
    const auto xu = static_cast<std::size_t>(x);
    const SubgroupConstants& sc = consts.sub[xu];
    const double eh = cfg.backward[xu][xu].est;
    const double th = cfg.backward[xu][xu].err;
    const double eg = cfg.forward[xu][xu].est;
    const double tg = cfg.forward[xu][xu].err;

    for (int k = 0; k < cfg.relays_per_group; ++k) {
      for (int a = 0; a < n; ++a) h_hat[a] = sample_cgaussian(eh, stream);
      Complex bmf_hat = 0.0;  // h_x^x . conj(h_hat), estimate part (= ||h_hat||^2)
      Complex bmf_til = 0.0;  // error part
      for (int a = 0; a < n; ++a) {
        const Complex err = sample_cgaussian(th, stream);
        h_own[a] = h_hat[a] + err;
        bmf_hat += h_hat[a] * std::conj(h_hat[a]);
        bmf_til += err * std::conj(h_hat[a]);
      }

      // Other streams' backward channels, consumed on the fly.
      std::array<Complex, kMaxAntennas> bdot_imp{};
      std::array<Complex, kMaxAntennas> bdot_p{};
      for (int y = 0; y < m_count; ++y) {
        if (y == x) continue;
        const double var = cfg.backward[xu][static_cast<std::size_t>(y)].total;
        Complex acc_imp = 0.0;
        Complex acc_p = 0.0;
        for (int a = 0; a < n; ++a) {
          const Complex hc = sample_cgaussian(var, stream);
          acc_imp += hc * std::conj(h_hat[a]);
          acc_p += hc * std::conj(h_own[a]);
        }
        bdot_imp[static_cast<std::size_t>(y)] = acc_imp;
        bdot_p[static_cast<std::size_t>(y)] = acc_p;
      }

      for (int a = 0; a < n; ++a) g_hat[a] = sample_cgaussian(eg, stream);
      for (int a = 0; a < n; ++a) g_own[a] = g_hat[a] + sample_cgaussian(tg, stream);
      if (x == 0) {
        for (int a = 0; a < n; ++a) g_dest0[a] = g_own[a];
      } else {
        const double var = cfg.forward[xu][0].total;
        for (int a = 0; a < n; ++a) g_dest0[a] = sample_cgaussian(var, stream);
      }
      Complex fmf_imp = 0.0;
      Complex fmf_p = 0.0;
      for (int a = 0; a < n; ++a) {
        fmf_imp += std::conj(g_hat[a]) * g_dest0[a];
        fmf_p += std::conj(g_own[a]) * g_dest0[a];
      }

      Complex nh_imp = 0.0;
      Complex nh_p = 0.0;
      for (int a = 0; a < n; ++a) {
        const Complex nc = sample_cgaussian(cfg.relay_noise_var[xu], stream);
        nh_imp += nc * std::conj(h_hat[a]);
        nh_p += nc * std::conj(h_own[a]);
      }

      if (x == 0) {
        kept_sum += bmf_hat * fmf_imp;
        discarded_sum += bmf_til * fmf_imp;
        Complex bmf_own_p = 0.0;
        for (int a = 0; a < n; ++a) bmf_own_p += h_own[a] * std::conj(h_own[a]);
        own_sum_p += bmf_own_p * fmf_p;
      } else {
        cross_carry += sc.coef_imp * bdot_imp[0] * fmf_imp;
        cross_carry_p += sc.coef_p * bdot_p[0] * fmf_p;
        // Matched own stream of subgroup x leaking into destination 0.
        coef_imp[xu] += sc.coef_imp * (bmf_hat + bmf_til) * fmf_imp;
        Complex bmf_own_p = 0.0;
        for (int a = 0; a < n; ++a) bmf_own_p += h_own[a] * std::conj(h_own[a]);
        coef_p[xu] += sc.coef_p * bmf_own_p * fmf_p;
      }
      for (int y = 0; y < m_count; ++y) {
        if (y == x || y == 0) continue;
        const auto yu = static_cast<std::size_t>(y);
        coef_imp[yu] += sc.coef_imp * bdot_imp[yu] * fmf_imp;
        coef_p[yu] += sc.coef_p * bdot_p[yu] * fmf_p;
      }
      v_imp += sc.noise_imp * nh_imp * fmf_imp;
      v_p += sc.noise_p * nh_p * fmf_p;
    }
  }

  const Complex z0 = sample_cgaussian(cfg.dest_noise_var[0], stream);
  v_imp += z0;
  v_p += z0;
  const Complex z_f = sample_cgaussian(cfg.feedforward_noise_var, stream);

  std::array<Complex, kMaxAntennas> symbols;
  for (int y = 0; y < m_count; ++y) {
    symbols[static_cast<std::size_t>(y)] =
        sample_cgaussian(cfg.signal_var[static_cast<std::size_t>(y)], stream);
  }

  const double c0 = consts.sub[0].coef_imp;
  const Complex ff = consts.ff_gain * z_f;
  const Complex sig_coef = c0 * (kept_sum + discarded_sum) + cross_carry;
  const Complex sig_kept = c0 * kept_sum + ff;
  const Complex sig_discarded = c0 * discarded_sum - ff + cross_carry;
  coef_p[0] = consts.sub[0].coef_p * own_sum_p + cross_carry_p;

  const double sig_scale = std::abs(sig_coef);
  const double decomp_err =
      sig_scale > 0.0 ? std::abs(sig_coef - (sig_kept + sig_discarded)) / sig_scale
                      : std::abs(sig_coef - (sig_kept + sig_discarded));

  Complex y_int_imp = 0.0;
  Complex y_int_p = 0.0;
  for (int y = 1; y < m_count; ++y) {
    const auto yu = static_cast<std::size_t>(y);
    y_int_imp += symbols[yu] * coef_imp[yu];
    y_int_p += symbols[yu] * coef_p[yu];
  }

  const Complex s0 = symbols[0];
  MimoTrialOut out;
  out.s1b_num = std::norm(s0 * sig_coef);
  out.s1b_den = std::norm(y_int_imp) + std::norm(v_imp);
  out.s2_num = std::norm(s0 * sig_kept);
  out.s2_den = std::norm(s0 * sig_discarded) + std::norm(y_int_imp) + std::norm(v_imp);
  out.s1a_num = std::norm(s0 * coef_p[0]);
  out.s1a_den = std::norm(y_int_p) + std::norm(v_p);
  out.decomp_rel_err = decomp_err;
  const Complex overall = s0 * sig_discarded + y_int_imp + v_imp;
  const Complex corr = std::conj(s0) * overall;
  out.corr_re = corr.real();
  out.corr_im = corr.imag();
  return out;
}

EsnrEstimate to_esnr(const RatioEstimate& r, Scheme scheme) {
  if (r.denominator_mean == 0.0) {
    throw DegenerateEstimation(std::string(to_string(scheme)) +
                               " simulation measured a zero overall-noise power");
  }
  return {r.ratio, EstimateMethod::monte_carlo, r.ci95_half_width, r.trials};
}

}  // namespace

MimoSimResult simulate_all_schemes(const MimoConfig& cfg, const McPlan& plan,
                                   const ExecPolicy& exec) {
  cfg.validate();
  plan.validate();
  const SimConstants consts = sim_constants(cfg);

  const auto trials = detail::run_trials<MimoTrialOut>(
      [&cfg, &consts](RandomStream& stream) { return mimo_trial(cfg, consts, stream); }, plan,
      exec);

  const std::size_t count = trials.size();
  std::vector<std::pair<double, double>> pairs(count);
  MimoSimResult out;

  for (std::size_t i = 0; i < count; ++i) pairs[i] = {trials[i].s1a_num, trials[i].s1a_den};
  out.s1a = to_esnr(detail::reduce_ratio(pairs), Scheme::S1a);
  for (std::size_t i = 0; i < count; ++i) pairs[i] = {trials[i].s1b_num, trials[i].s1b_den};
  out.s1b = to_esnr(detail::reduce_ratio(pairs), Scheme::S1b);
  for (std::size_t i = 0; i < count; ++i) pairs[i] = {trials[i].s2_num, trials[i].s2_den};
  out.s2 = to_esnr(detail::reduce_ratio(pairs), Scheme::S2);

  double max_err = 0.0;
  std::vector<double> column(count);
  for (std::size_t i = 0; i < count; ++i) {
    max_err = std::max(max_err, trials[i].decomp_rel_err);
    column[i] = trials[i].corr_re;
  }
  out.decomposition_max_rel_err = max_err;
  out.signal_noise_corr_re = detail::reduce_moment(column);
  for (std::size_t i = 0; i < count; ++i) column[i] = trials[i].corr_im;
  out.signal_noise_corr_im = detail::reduce_moment(column);
  return out;
}

EsnrEstimate simulate_mimo(Scheme scheme, const MimoConfig& cfg, const McPlan& plan,
                           const ExecPolicy& exec) {
  const MimoSimResult result = simulate_all_schemes(cfg, plan, exec);
  switch (scheme) {
    case Scheme::S1a: return result.s1a;
    case Scheme::S1b: return result.s1b;
    case Scheme::S2: return result.s2;
  }
  throw ArgumentError("simulate_mimo: unknown scheme");
}

std::vector<std::vector<int>> partition_relays(int antenna_pairs, int relays_per_group) {
  if (antenna_pairs < 1 || relays_per_group < 1) {
    throw ArgumentError("partition_relays: antenna_pairs and relays_per_group must be >= 1");
  }
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(antenna_pairs));
  int relay = 0;
  for (auto& group : groups) {
    group.reserve(static_cast<std::size_t>(relays_per_group));
    for (int k = 0; k < relays_per_group; ++k) group.push_back(relay++);
  }
  return groups;
}

}  // namespace relaylab
