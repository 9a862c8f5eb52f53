#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qemscope {

enum class Technique { kPec, kZne, kTem };

std::string technique_name(Technique t);
Technique technique_from_name(const std::string& name);  // throws std::invalid_argument

// Hardware and classical-compute parameters; defaults are the contour-diagram
// working point (24 h wall time, superconducting-qubit timings, 1e15 FLOPS).
struct ResourceParams {
  double wall_time = 86400.0;   // T, seconds
  double tau_layer = 0.6e-6;    // gate-layer duration, seconds
  double tau_meas = 0.8e-6;     // measurement duration, seconds
  double tau_delay = 0.5e-3;    // delay between circuit executions, seconds
  double flops = 1e15;          // classical power P
  double c_b_inv = 3e5;         // FLOPs per unit chi^3 N L of TEM contraction
  int n_rec = 1;                // noise recharacterizations within T
  double theta = 0.018;         // relative rate-fluctuation std. deviation

  void validate() const;  // throws std::invalid_argument on non-positive fields
};

// State-vector simulation memory threshold used for the classical baseline.
constexpr double kStateVectorMemoryGib = 562950.0;

struct ErrorBudget {
  Technique technique = Technique::kPec;
  double delta_random = 0.0;
  std::vector<std::pair<std::string, double>> delta_sys;  // named components
  double delta_total = 0.0;
  int64_t shots = 0;
  double chi_affordable = 0.0;  // TEM only; 0 otherwise
};

// M = floor(T / (L tau_l + tau_m + tau_delay)).
int64_t shots_available(const ResourceParams& params, int l);

// Closed-form error budget for a dense N x L circuit with error density
// epsilon and effective error-accumulating area |A| <= N*L (pass n*l for the
// dense case).  delta_total^2 = delta_random^2 + sum of squared components.
ErrorBudget budget(Technique technique, int n, int l, double epsilon, double area,
                   const ResourceParams& params);

// Sampling-overhead curves per total error count epsilon*N*L; the information
// lower bound coincides with the TEM column.
struct OverheadRow {
  double nl = 0.0;  // N*L
  double pec = 1.0;
  double zne = 1.0;
  double tem = 1.0;
  double lower_bound = 1.0;
};

std::vector<OverheadRow> overhead_curves(double epsilon, const std::vector<double>& nl_values);

// delta_total over an (N, L) grid; values stored row-major by N then L and
// equal budget() pointwise with area = N*L.
struct ContourGrid {
  std::vector<int> n_values;
  std::vector<int> l_values;
  std::vector<double> delta;
};

ContourGrid contour_grid(Technique technique, double epsilon, const ResourceParams& params,
                         const std::vector<int>& n_values, const std::vector<int>& l_values);

// Uncustomized-MPS classical baseline for the Floquet benchmark: the bond
// dimension affordable from the final-contraction cost 2 N chi^3 and the
// piecewise relative-error model against chi_exact = 2^{min(t+1, N/2)}.
struct MpsBaseline {
  double chi_affordable = 0.0;  // capped at chi_exact
  double chi_exact = 0.0;
  double relative_error = 0.0;  // 0 / (1 - chi/chi_exact) / ~1
};

MpsBaseline classical_mps_baseline(int n, int t, const ResourceParams& params);

// Wall time in seconds of the final MPS contraction, 2 N chi^3 / P.
double mps_contraction_seconds(int n, double chi, double flops);

}  // namespace qemscope
