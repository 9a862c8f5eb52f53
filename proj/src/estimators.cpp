#include "qemscope/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace qemscope {

int64_t ZneConfig::total_shots() const {
  return std::accumulate(shots.begin(), shots.end(), int64_t{0});
}

void ZneConfig::validate() const {
  if (r() < 2) throw std::invalid_argument("ZneConfig: need at least two gains");
  if (shots.size() != gains.size())
    throw std::invalid_argument("ZneConfig: gains and shots must have equal length");
  for (int i = 0; i < r(); ++i) {
    if (gains[i] < 1.0) throw std::invalid_argument("ZneConfig: gains must be >= 1");
    if (i > 0 && gains[i] <= gains[i - 1])
      throw std::invalid_argument("ZneConfig: gains must be strictly increasing");
    if (shots[i] <= 0) throw std::invalid_argument("ZneConfig: shots must be positive");
  }
}

double lambert_w(double x) {
  const double branch = -std::exp(-1.0);
  if (x < branch - 1e-15) throw std::domain_error("lambert_w: x below -1/e");
  if (x < branch) x = branch;
  double lo, hi;
  if (x >= 0.0) {
    lo = 0.0;
    hi = std::max(1.0, std::log1p(x)) + 1.0;
  } else {
    lo = -1.0;
    hi = 0.0;
  }
  auto f = [x](double w) { return w * std::exp(w) - x; };
  double w = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {  // coarse bracketing before Halley
    (f(w) > 0.0 ? hi : lo) = w;
    w = 0.5 * (lo + hi);
  }
  for (int i = 0; i < 64; ++i) {
    double ew = std::exp(w);
    double r = w * ew - x;
    double d = ew * (w + 1.0) - 0.5 * (w + 2.0) * r / (w + 1.0);
    double step = r / d;
    double next = w - step;
    if (next < lo || next > hi) next = 0.5 * (lo + hi);  // keep the bracket
    (f(next) > 0.0 ? hi : lo) = next;
    w = next;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

std::pair<double, double> optimal_gains(double k) {
  if (k <= 0.0 || k >= 1.0)
    throw std::invalid_argument("optimal_gains: damping K must lie in (0, 1)");
  double g2 = 1.0 + (1.0 + lambert_w(std::exp(-1.0))) / std::log(1.0 / k);
  return {1.0, g2};
}

namespace {

// A_j = sum_i G_i (G_i - G_j) and D = R sum G^2 - (sum G)^2.
void fit_coefficients(const std::vector<double>& gains, std::vector<double>& a, double& d) {
  double sg = 0.0, sg2 = 0.0;
  for (double g : gains) {
    sg += g;
    sg2 += g * g;
  }
  d = gains.size() * sg2 - sg * sg;
  a.resize(gains.size());
  for (size_t j = 0; j < gains.size(); ++j) a[j] = sg2 - gains[j] * sg;
}

}  // namespace

std::vector<int64_t> optimal_shot_allocation(const std::vector<double>& gains, double k,
                                             int64_t m) {
  const int r = static_cast<int>(gains.size());
  if (r < 2) throw std::invalid_argument("optimal_shot_allocation: need at least two gains");
  if (m < r) throw std::invalid_argument("optimal_shot_allocation: need at least R shots");
  std::vector<double> a;
  double d;
  fit_coefficients(gains, a, d);
  std::vector<double> w(r);
  double total = 0.0;
  for (int j = 0; j < r; ++j) {
    w[j] = std::abs(a[j]) * std::pow(k, -gains[j]);
    total += w[j];
  }
  std::vector<int64_t> shots(r);
  std::vector<std::pair<double, int>> remainder(r);
  int64_t assigned = 0;
  for (int j = 0; j < r; ++j) {
    double raw = m * w[j] / total;
    shots[j] = static_cast<int64_t>(std::floor(raw));
    assigned += shots[j];
    remainder[j] = {raw - std::floor(raw), j};
  }
  std::sort(remainder.begin(), remainder.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  for (int64_t i = 0; i < m - assigned; ++i) ++shots[remainder[i % r].second];
  return shots;
}

double zne_random_error(const ZneConfig& config, double k) {
  config.validate();
  std::vector<double> a;
  double d;
  fit_coefficients(config.gains, a, d);
  if (d <= 0.0) throw std::invalid_argument("zne_random_error: degenerate gains");
  double s = 0.0;
  for (int j = 0; j < config.r(); ++j)
    s += a[j] * a[j] * std::pow(k, -2.0 * config.gains[j]) / config.shots[j];
  return std::sqrt(s) / d;
}

std::pair<double, double> fit_exponential(const std::vector<double>& gains,
                                          const std::vector<double>& means,
                                          const std::vector<double>& stds) {
  const int r = static_cast<int>(gains.size());
  if (r < 2 || means.size() != gains.size() || stds.size() != gains.size())
    throw std::invalid_argument("fit_exponential: need R >= 2 matched points");
  for (double m : means)
    if (m <= 0.0)
      throw std::domain_error(
          "fit_exponential: non-positive sample mean; the log transform requires more shots");
  std::vector<double> a;
  double d;
  fit_coefficients(gains, a, d);
  if (d <= 0.0) throw std::invalid_argument("fit_exponential: degenerate gains");
  double b = 0.0, db2 = 0.0;
  for (int j = 0; j < r; ++j) {
    double y = std::log(means[j]);
    double dy = stds[j] / means[j];
    b += a[j] * y;
    db2 += a[j] * a[j] * dy * dy;
  }
  b /= d;
  double f0 = std::exp(b);
  return {f0, f0 * std::sqrt(db2) / d};
}

double zne_extrapolation_bias(const ExponentStatistics& stats, double g1, double g2, int n_t) {
  if (n_t < 0) throw std::invalid_argument("zne_extrapolation_bias: N_T must be >= 0");
  return 0.5 * g1 * g2 * (1.0 - std::exp2(-static_cast<double>(n_t))) * stats.variance;
}

namespace {

// Precomputed per-generator data for shot sampling along a fixed trajectory.
struct GeneratorSlot {
  bool anti;       // generator anticommutes with the trajectory string
  double p_flip;   // probability of applying the generator's Pauli
  double p_neg;    // PEC only: probability of the negative-sign branch
};

struct ShotPlan {
  int base_sign = 1;
  std::vector<std::vector<GeneratorSlot>> layers;
};

ShotPlan make_plan(const NoisyCircuit& circuit, const PauliString& observable, double power,
                   bool pec) {
  Trajectory traj = propagate(circuit, observable);
  for (int q = 0; q < circuit.n; ++q) {
    int letter = traj.strings.empty() ? observable.letter(q) : traj.strings[0].letter(q);
    if (letter == kX || letter == kY)
      throw std::invalid_argument("simulate: observable is not a stabilizer of the ideal circuit");
  }
  ShotPlan plan;
  plan.base_sign = traj.sign;
  plan.layers.resize(circuit.depth());
  for (int l = 0; l < circuit.depth(); ++l) {
    const auto& gens = circuit.noise.layers[l].generators;
    plan.layers[l].resize(gens.size());
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      GeneratorSlot& slot = plan.layers[l][gi];
      slot.anti = gens[gi].anticommutes(traj.strings[l]);
      slot.p_flip = forward_error_probability(gens[gi], power);
      if (pec) {
        double q0, q1, gamma_g;
        inverse_quasiprobability(gens[gi], q0, q1, gamma_g);
        slot.p_neg = -q1 / gamma_g;
      } else {
        slot.p_neg = 0.0;
      }
    }
  }
  return plan;
}

// Deterministic chunked reduction: shot i always uses stream rng.derive(i),
// partial sums are per 4096-shot chunk and combined in chunk order, so the
// result is independent of the thread schedule.
template <typename PerShot>
EstimatorResult reduce_shots(int64_t shots, int threads, PerShot per_shot) {
  constexpr int64_t kChunk = 4096;
  const int64_t chunks = (shots + kChunk - 1) / kChunk;
  std::vector<std::pair<double, double>> partial(chunks, {0.0, 0.0});
  std::atomic<int64_t> cursor{0};
  auto worker = [&]() {
    for (int64_t c = cursor.fetch_add(1); c < chunks; c = cursor.fetch_add(1)) {
      double sum = 0.0, sumsq = 0.0;
      int64_t end = std::min(shots, (c + 1) * kChunk);
      for (int64_t i = c * kChunk; i < end; ++i) {
        double v = per_shot(i);
        sum += v;
        sumsq += v * v;
      }
      partial[c] = {sum, sumsq};
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  double sum = 0.0, sumsq = 0.0;
  for (auto [s, s2] : partial) {
    sum += s;
    sumsq += s2;
  }
  EstimatorResult out;
  out.shots_used = shots;
  out.mean = sum / shots;
  double var = std::max(0.0, sumsq / shots - out.mean * out.mean);
  if (shots > 1) var *= static_cast<double>(shots) / (shots - 1);
  out.std_error = std::sqrt(var / shots);
  out.overhead = var;
  return out;
}

}  // namespace

EstimatorResult pec_simulate(const NoisyCircuit& circuit, const PauliString& observable,
                             int64_t shots, Rng& rng, int threads) {
  if (shots < 1) throw std::invalid_argument("pec_simulate: shots must be >= 1");
  ShotPlan plan = make_plan(circuit, observable, 1.0, true);
  const double gamma = circuit.noise.gamma_total();
  return reduce_shots(shots, threads, [&](int64_t shot) {
    int outcome = plan.base_sign;
    int sign = 1;
    for (size_t l = 0; l < plan.layers.size(); ++l) {
      for (size_t gi = 0; gi < plan.layers[l].size(); ++gi) {
        const GeneratorSlot& slot = plan.layers[l][gi];
        Rng stream = rng.derive(static_cast<uint64_t>(shot), l, gi);
        bool hw = stream.next_bernoulli(slot.p_flip);
        bool neg = stream.next_bernoulli(slot.p_neg);
        if (neg) sign = -sign;
        // The PEC correction applies the generator's Pauli on the negative
        // branch; combined with the hardware error the net flip is the parity.
        if (slot.anti && (hw ^ neg)) outcome = -outcome;
      }
    }
    return gamma * sign * outcome;
  });
}

EstimatorResult zne_simulate(const NoisyCircuit& circuit, const PauliString& observable,
                             const ZneConfig& config, Rng& rng, int threads) {
  config.validate();
  std::vector<double> means(config.r()), stds(config.r());
  for (int i = 0; i < config.r(); ++i) {
    // Hardware noise at power 1 plus amplification at power G-1 merge into a
    // single flip at power G per generator.
    ShotPlan plan = make_plan(circuit, observable, config.gains[i], false);
    Rng gain_rng = rng.derive(0x2e7a, static_cast<uint64_t>(i));
    EstimatorResult r = reduce_shots(config.shots[i], threads, [&](int64_t shot) {
      int outcome = plan.base_sign;
      for (size_t l = 0; l < plan.layers.size(); ++l)
        for (size_t gi = 0; gi < plan.layers[l].size(); ++gi) {
          const GeneratorSlot& slot = plan.layers[l][gi];
          if (slot.anti &&
              gain_rng.derive(static_cast<uint64_t>(shot), l, gi).next_bernoulli(slot.p_flip))
            outcome = -outcome;
        }
      return static_cast<double>(outcome);
    });
    means[i] = r.mean;
    stds[i] = r.std_error;
  }
  auto [f0, df0] = fit_exponential(config.gains, means, stds);
  EstimatorResult out;
  out.mean = f0;
  out.std_error = df0;
  out.shots_used = config.total_shots();
  out.overhead = df0 * df0 * out.shots_used;
  return out;
}

EstimatorResult tem_simulate(const NoisyCircuit& circuit, const PauliString& observable,
                             const TemMap& tem, int64_t shots, Rng& rng, int threads) {
  if (shots < 1) throw std::invalid_argument("tem_simulate: shots must be >= 1");
  ShotPlan plan = make_plan(circuit, observable, 1.0, false);
  PauliString index = observable;
  index.set_phase(0);
  const double d = diagonal_element(tem, index);
  return reduce_shots(shots, threads, [&](int64_t shot) {
    int outcome = plan.base_sign;
    for (size_t l = 0; l < plan.layers.size(); ++l)
      for (size_t gi = 0; gi < plan.layers[l].size(); ++gi) {
        const GeneratorSlot& slot = plan.layers[l][gi];
        if (slot.anti &&
            rng.derive(static_cast<uint64_t>(shot), l, gi).next_bernoulli(slot.p_flip))
          outcome = -outcome;
      }
    return d * outcome;
  });
}

}  // namespace qemscope
