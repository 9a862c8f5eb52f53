#include "qemscope/budget.hpp"

#include <cmath>
#include <stdexcept>

#include "qemscope/tem_mpo.hpp"

namespace qemscope {

std::string technique_name(Technique t) {
  switch (t) {
    case Technique::kPec: return "pec";
    case Technique::kZne: return "zne";
    case Technique::kTem: return "tem";
  }
  throw std::logic_error("technique_name: unreachable");
}

Technique technique_from_name(const std::string& name) {
  if (name == "pec") return Technique::kPec;
  if (name == "zne") return Technique::kZne;
  if (name == "tem") return Technique::kTem;
  throw std::invalid_argument("unknown technique: " + name + " (expected pec, zne, or tem)");
}

void ResourceParams::validate() const {
  if (wall_time <= 0 || tau_layer <= 0 || tau_meas <= 0 || tau_delay <= 0 || flops <= 0 ||
      c_b_inv <= 0 || theta < 0)
    throw std::invalid_argument("ResourceParams: time, compute, and rate fields must be positive");
  if (n_rec < 1) throw std::invalid_argument("ResourceParams: n_rec must be >= 1");
}

int64_t shots_available(const ResourceParams& params, int l) {
  params.validate();
  if (l < 1) throw std::invalid_argument("shots_available: depth must be >= 1");
  return static_cast<int64_t>(
      std::floor(params.wall_time / (l * params.tau_layer + params.tau_meas + params.tau_delay)));
}

ErrorBudget budget(Technique technique, int n, int l, double epsilon, double area,
                   const ResourceParams& params) {
  params.validate();
  if (n < 1 || l < 1) throw std::invalid_argument("budget: n and l must be >= 1");
  if (epsilon < 0) throw std::invalid_argument("budget: epsilon must be >= 0");
  if (area < 0 || area > static_cast<double>(n) * l)
    throw std::invalid_argument("budget: area must lie in [0, N*L]");
  ErrorBudget out;
  out.technique = technique;
  out.shots = shots_available(params, l);
  const double m = static_cast<double>(out.shots);
  const double ea = epsilon * area;
  const double instability = 0.5 * epsilon * n * std::sqrt(static_cast<double>(l)) * params.theta;
  out.delta_sys.emplace_back("instability", instability);
  switch (technique) {
    case Technique::kPec:
      out.delta_random = std::exp(ea) / std::sqrt(m);
      break;
    case Technique::kZne: {
      out.delta_random = (1.0 + 1.795 * ea) * std::exp(ea / 2.0) / std::sqrt(m);
      double extrapolation = ea > 0.0 ? (1.0 + 2.557 / ea) * epsilon * ea / 36.0 : 0.0;
      out.delta_sys.emplace_back("extrapolation", extrapolation);
      break;
    }
    case Technique::kTem: {
      out.delta_random = std::exp(ea / 2.0) / std::sqrt(m);
      out.chi_affordable = std::cbrt(params.flops * params.wall_time /
                                     (params.c_b_inv * params.n_rec * n * l));
      out.delta_sys.emplace_back(
          "compression", below_threshold_error(n, l, epsilon, std::max(1.0, out.chi_affordable)));
      break;
    }
  }
  double total2 = out.delta_random * out.delta_random;
  for (const auto& [name, value] : out.delta_sys) total2 += value * value;
  out.delta_total = std::sqrt(total2);
  return out;
}

std::vector<OverheadRow> overhead_curves(double epsilon, const std::vector<double>& nl_values) {
  std::vector<OverheadRow> rows;
  rows.reserve(nl_values.size());
  for (double nl : nl_values) {
    OverheadRow row;
    row.nl = nl;
    double x = epsilon * nl;
    row.pec = std::exp(2.0 * x);
    row.zne = (1.0 + 1.795 * x) * (1.0 + 1.795 * x) * std::exp(x);
    row.tem = std::exp(x);
    row.lower_bound = row.tem;
    rows.push_back(row);
  }
  return rows;
}

ContourGrid contour_grid(Technique technique, double epsilon, const ResourceParams& params,
                         const std::vector<int>& n_values, const std::vector<int>& l_values) {
  ContourGrid grid;
  grid.n_values = n_values;
  grid.l_values = l_values;
  grid.delta.reserve(n_values.size() * l_values.size());
  for (int n : n_values)
    for (int l : l_values)
      grid.delta.push_back(
          budget(technique, n, l, epsilon, static_cast<double>(n) * l, params).delta_total);
  return grid;
}

MpsBaseline classical_mps_baseline(int n, int t, const ResourceParams& params) {
  params.validate();
  if (n < 2 || t < 0) throw std::invalid_argument("classical_mps_baseline: need n >= 2, t >= 0");
  MpsBaseline out;
  out.chi_exact = std::exp2(std::min(t + 1, n / 2));
  double raw = std::cbrt(params.flops * params.wall_time / (2.0 * n));
  out.chi_affordable = std::min(raw, out.chi_exact);
  if (raw >= out.chi_exact)
    out.relative_error = 0.0;
  else if (raw > 0.5 * out.chi_exact)
    out.relative_error = 1.0 - raw / out.chi_exact;
  else
    out.relative_error = 1.0;
  return out;
}

double mps_contraction_seconds(int n, double chi, double flops) {
  if (flops <= 0) throw std::invalid_argument("mps_contraction_seconds: flops must be positive");
  return 2.0 * n * chi * chi * chi / flops;
}

}  // namespace qemscope
