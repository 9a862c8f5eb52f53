#include "qemscope/spl_noise.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace qemscope {

namespace {

bool letters_anticommute(int a, int b) { return a != kI && b != kI && a != b; }

double sum_rates(const SplLayer& layer) {
  double s = 0.0;
  for (const auto& g : layer.generators) s += g.rate;
  return s;
}

}  // namespace

bool SplGenerator::anticommutes(const PauliString& beta) const {
  bool anti = letters_anticommute(axis1, beta.letter(q1));
  if (two_qubit()) anti ^= letters_anticommute(axis2, beta.letter(q2));
  return anti;
}

double fidelity(const SplLayer& layer, const PauliString& beta) {
  if (beta.n() != layer.n) throw std::invalid_argument("fidelity: qubit count mismatch");
  double log_f = 0.0;
  for (const auto& g : layer.generators)
    if (g.anticommutes(beta)) log_f -= 2.0 * g.rate;
  return std::exp(log_f);
}

double gamma(const SplLayer& layer) { return std::exp(2.0 * sum_rates(layer)); }

double NoiseModel::gamma_total() const {
  double log_g = 0.0;
  for (const auto& layer : layers) log_g += 2.0 * sum_rates(layer);
  return std::exp(log_g);
}

double NoiseModel::epsilon() const {
  if (n == 0 || layers.empty()) return 0.0;
  return std::exp(std::log(gamma_total()) / (static_cast<double>(n) * depth())) - 1.0;
}

NoiseModel sample_model(int n, int L, double epsilon, Rng& rng, double theta) {
  if (epsilon < 0) throw std::invalid_argument("sample_model: epsilon must be >= 0");
  NoiseModel model;
  model.n = n;
  model.theta = theta;
  model.layers.resize(L);
  for (int l = 0; l < L; ++l) {
    SplLayer& layer = model.layers[l];
    layer.n = n;
    Rng stream = rng.derive(static_cast<uint64_t>(l));
    uint64_t idx = 0;
    for (int q = 0; q < n; ++q) {
      for (int axis : {kX, kY, kZ}) {
        double rate = stream.derive(idx++).next_normal(epsilon / 12.0, epsilon / 12.0);
        layer.generators.push_back({q, -1, axis, kI, rate > 0 ? rate : 0.0});
      }
    }
    for (int q = 0; q + 1 < n; ++q) {
      for (int a1 : {kX, kY, kZ}) {
        for (int a2 : {kX, kY, kZ}) {
          double rate = stream.derive(idx++).next_normal(epsilon / 36.0, epsilon / 36.0);
          layer.generators.push_back({q, q + 1, a1, a2, rate > 0 ? rate : 0.0});
        }
      }
    }
  }
  return model;
}

NoiseModel perturb_model(const NoiseModel& model, Rng& rng, int* clamped) {
  if (model.theta < 0) throw std::invalid_argument("perturb_model: theta must be >= 0");
  NoiseModel out = model;
  if (clamped) *clamped = 0;
  for (int l = 0; l < out.depth(); ++l) {
    SplLayer& layer = out.layers[l];
    double total = sum_rates(layer);
    if (total <= 0.0) continue;
    double theta_l = rng.derive(static_cast<uint64_t>(l)).next_normal(0.0, model.theta);
    double shift = 1.0 + theta_l * model.epsilon();
    // gamma_l -> gamma_l * shift^n translates into a uniform rate scale.
    double scale = (shift > 0.0)
                       ? 1.0 + model.n * std::log(shift) / (2.0 * total)
                       : -1.0;
    if (scale < 0.0) {
      scale = 0.0;
      if (clamped) ++*clamped;
    }
    for (auto& g : layer.generators) g.rate *= scale;
  }
  return out;
}

void inverse_quasiprobability(const SplGenerator& g, double& q0, double& q1, double& gamma_g) {
  double e = std::exp(2.0 * g.rate);
  q0 = 0.5 * (1.0 + e);
  q1 = 0.5 * (1.0 - e);
  gamma_g = e;
}

double forward_error_probability(const SplGenerator& g, double power) {
  if (power < 0) throw std::invalid_argument("forward_error_probability: power must be >= 0");
  return 0.5 * (1.0 - std::exp(-2.0 * power * g.rate));
}

double purity_overhead_bound(const SplLayer& layer) {
  // Group generators by support, then evaluate the purity parameter of each
  // local inverse map: nu = 4^{-m} sum over the 4^m local strings of f^{-2}.
  std::map<std::pair<int, int>, std::vector<const SplGenerator*>> supports;
  for (const auto& g : layer.generators)
    supports[{g.q1, g.q2}].push_back(&g);

  double log_nu_total = 0.0;
  for (const auto& [support, gens] : supports) {
    bool two = support.second >= 0;
    int count = two ? 16 : 4;
    double nu = 0.0;
    for (int code = 0; code < count; ++code) {
      int b1 = code & 3;
      int b2 = (code >> 2) & 3;
      double log_f = 0.0;
      for (const SplGenerator* g : gens) {
        bool anti = letters_anticommute(g->axis1, b1);
        if (two) anti ^= letters_anticommute(g->axis2, b2);
        if (anti) log_f -= 2.0 * g->rate;
      }
      nu += std::exp(-2.0 * log_f);  // f^{-2}
    }
    log_nu_total += std::log(nu / count);
  }
  return std::exp(log_nu_total);
}

}  // namespace qemscope
