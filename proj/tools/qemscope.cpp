// qemscope: command-line front end for the error-mitigation toolkit.
//
// Subcommands: budget, overhead, contour, simulate, tem, spectrum, floquet,
// noise-gen.  All numeric output is written with 17 significant digits and a
// '.' decimal separator; every output file embeds or accompanies a run
// manifest (command line, seed, input digests, version).  Exit codes: 0 on
// success, 2 on input errors, 3 on capacity-guard violations.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qemscope/budget.hpp"
#include "qemscope/clifford.hpp"
#include "qemscope/estimators.hpp"
#include "qemscope/floquet.hpp"
#include "qemscope/io.hpp"
#include "qemscope/pauli.hpp"
#include "qemscope/rng.hpp"
#include "qemscope/spl_noise.hpp"
#include "qemscope/tem_mpo.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

using nlohmann::json;
using namespace qemscope;

struct RunManifest {
  std::string command;
  uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> digests;  // path, fnv1a hex
  double elapsed_seconds = 0.0;

  json to_json() const {
    json d = json::object();
    for (const auto& [path, digest] : digests) d[path] = digest;
    return json{{"command", command},
                {"seed", seed},
                {"config_digests", d},
                {"version", kVersion},
                {"elapsed_seconds", elapsed_seconds}};
  }
};

std::string fnv1a_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  uint64_t h = 0xcbf29ce484222325ull;
  char c;
  while (in.get(c)) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string join_argv(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write output file: " + path);
  out << body;
}

// JSON with every double rendered through format_double (round-trip exact).
std::string dump_json(const json& j) {
  std::ostringstream out;
  std::function<void(const json&, int)> emit = [&](const json& node, int indent) {
    std::string pad(indent, ' ');
    if (node.is_object()) {
      out << "{\n";
      size_t i = 0;
      for (auto it = node.begin(); it != node.end(); ++it, ++i) {
        out << pad << "  " << json(it.key()).dump() << ": ";
        emit(it.value(), indent + 2);
        if (i + 1 < node.size()) out << ",";
        out << "\n";
      }
      out << pad << "}";
    } else if (node.is_array()) {
      out << "[\n";
      for (size_t i = 0; i < node.size(); ++i) {
        out << pad << "  ";
        emit(node[i], indent + 2);
        if (i + 1 < node.size()) out << ",";
        out << "\n";
      }
      out << pad << "]";
    } else if (node.is_number_float()) {
      out << format_double(node.get<double>());
    } else {
      out << node.dump();
    }
  };
  emit(j, 0);
  out << "\n";
  return out.str();
}

// Manifest lines prepended to CSV files as '#' comments.
std::string csv_manifest(const RunManifest& m) {
  std::ostringstream out;
  out << "# command: " << m.command << "\n";
  out << "# seed: " << m.seed << "\n";
  for (const auto& [path, digest] : m.digests) out << "# digest " << path << ": " << digest << "\n";
  out << "# version: " << kVersion << "\n";
  out << "# elapsed_seconds: " << format_double(m.elapsed_seconds) << "\n";
  return out.str();
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw std::invalid_argument("empty list: " + csv);
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_doubles(csv)) out.push_back(static_cast<int>(v));
  return out;
}

void add_resource_flags(CLI::App* cmd, ResourceParams& params,
                        const std::string& theta_flag = "--theta") {
  cmd->add_option("--wall-time", params.wall_time, "Experiment wall time T, seconds");
  cmd->add_option("--tau-layer", params.tau_layer, "Gate-layer duration, seconds");
  cmd->add_option("--tau-meas", params.tau_meas, "Measurement duration, seconds");
  cmd->add_option("--tau-delay", params.tau_delay, "Delay between executions, seconds");
  cmd->add_option("--flops", params.flops, "Classical compute power, FLOPS");
  cmd->add_option("--c-b-inv", params.c_b_inv, "FLOPs per unit chi^3 N L of TEM contraction");
  cmd->add_option("--n-rec", params.n_rec, "Noise recharacterizations within T");
  cmd->add_option(theta_flag, params.theta, "Relative rate-fluctuation std. deviation");
}

NoisyCircuit load_noisy_circuit(const std::string& circuit_path, const std::string& noise_path) {
  NoisyCircuit circuit;
  circuit.unitaries = load_circuit(circuit_path, circuit.n);
  circuit.noise = load_noise(noise_path);
  if (circuit.noise.n != circuit.n)
    throw std::invalid_argument("circuit and noise qubit counts differ");
  if (circuit.noise.depth() != circuit.depth())
    throw std::invalid_argument("circuit and noise layer counts differ");
  return circuit;
}

json budget_json(const ErrorBudget& b) {
  json sys = json::array();
  for (const auto& [name, value] : b.delta_sys) sys.push_back(json{{"name", name}, {"value", value}});
  return json{{"technique", technique_name(b.technique)},
              {"delta_random", b.delta_random},
              {"delta_sys", sys},
              {"delta_total", b.delta_total},
              {"shots", b.shots},
              {"chi_affordable", b.chi_affordable}};
}

struct CliState {
  uint64_t seed = 1;
  int threads = 1;
  RunManifest manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void finish() {
    manifest.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.seed = seed;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"qemscope: error-mitigation budgets, simulators, and benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global --seed/--threads after the subcommand too

  CliState st;
  st.manifest.command = join_argv(argc, argv);
  bool seed_given = false;
  if (const char* env = std::getenv("QEMSCOPE_SEED")) st.seed = std::strtoull(env, nullptr, 10);
  app.add_option("--seed", st.seed, "Random seed (fallback: env QEMSCOPE_SEED, then 1)")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--threads", st.threads, "Worker threads; never changes numerical results")
      ->check(CLI::PositiveNumber);
  (void)seed_given;

  // budget -----------------------------------------------------------------
  auto* cmd_budget = app.add_subcommand("budget", "Closed-form error budget for one technique");
  std::string b_technique;
  int b_n = 100, b_l = 100;
  double b_eps = 0.0016, b_area = -1.0;
  ResourceParams b_params;
  std::string b_out = "budget.json";
  cmd_budget->add_option("--technique", b_technique, "pec | zne | tem")->required();
  cmd_budget->add_option("--n", b_n, "Qubits")->required();
  cmd_budget->add_option("--l", b_l, "Layers")->required();
  cmd_budget->add_option("--eps", b_eps, "Error density per qubit per layer")->required();
  cmd_budget->add_option("--area", b_area, "Effective error-accumulating area (default N*L)");
  cmd_budget->add_option("--out", b_out, "Output JSON path");
  add_resource_flags(cmd_budget, b_params);
  cmd_budget->callback([&] {
    Technique t = technique_from_name(b_technique);
    double area = b_area < 0 ? static_cast<double>(b_n) * b_l : b_area;
    ErrorBudget b = budget(t, b_n, b_l, b_eps, area, b_params);
    st.finish();
    json out = budget_json(b);
    out["manifest"] = st.manifest.to_json();
    write_text(b_out, dump_json(out));
    std::cout << "budget " << technique_name(t) << " n=" << b_n << " l=" << b_l
              << " eps=" << format_double(b_eps) << ": delta_total=" << format_double(b.delta_total)
              << " shots=" << b.shots << " -> " << b_out << "\n";
  });

  // overhead ---------------------------------------------------------------
  auto* cmd_overhead = app.add_subcommand("overhead", "Sampling-overhead curves per epsilon*N*L");
  double o_eps = 0.0016;
  std::string o_nl = "10000";
  std::string o_out = "overhead.csv";
  cmd_overhead->add_option("--eps", o_eps, "Error density per qubit per layer")->required();
  cmd_overhead->add_option("--nl", o_nl, "Comma-separated N*L values")->required();
  cmd_overhead->add_option("--out", o_out, "Output CSV path");
  cmd_overhead->callback([&] {
    auto rows = overhead_curves(o_eps, parse_doubles(o_nl));
    st.finish();
    std::ostringstream body;
    body << csv_manifest(st.manifest) << "nl,pec,zne,tem,lower_bound\n";
    for (const auto& r : rows)
      body << format_double(r.nl) << ',' << format_double(r.pec) << ',' << format_double(r.zne)
           << ',' << format_double(r.tem) << ',' << format_double(r.lower_bound) << "\n";
    write_text(o_out, body.str());
    std::cout << "overhead eps=" << format_double(o_eps) << " rows=" << rows.size() << " -> "
              << o_out << "\n";
  });

  // contour ----------------------------------------------------------------
  auto* cmd_contour = app.add_subcommand("contour", "delta_total over an (N, L) grid");
  std::string c_technique = "tem", c_n = "20,40,60,80,100", c_l = "20,40,60,80,100";
  double c_eps = 0.0016;
  ResourceParams c_params;
  std::string c_out = "contour.csv";
  cmd_contour->add_option("--technique", c_technique, "pec | zne | tem")->required();
  cmd_contour->add_option("--eps", c_eps, "Error density per qubit per layer")->required();
  cmd_contour->add_option("--n", c_n, "Comma-separated qubit counts");
  cmd_contour->add_option("--l", c_l, "Comma-separated layer counts");
  cmd_contour->add_option("--out", c_out, "Output CSV path");
  add_resource_flags(cmd_contour, c_params);
  cmd_contour->callback([&] {
    Technique t = technique_from_name(c_technique);
    auto ns = parse_ints(c_n);
    auto ls = parse_ints(c_l);
    ContourGrid grid = contour_grid(t, c_eps, c_params, ns, ls);
    st.finish();
    std::ostringstream body;
    body << csv_manifest(st.manifest) << "n,l,delta\n";
    for (size_t i = 0; i < ns.size(); ++i)
      for (size_t j = 0; j < ls.size(); ++j)
        body << ns[i] << ',' << ls[j] << ',' << format_double(grid.delta[i * ls.size() + j])
             << "\n";
    write_text(c_out, body.str());
    std::cout << "contour " << technique_name(t) << " eps=" << format_double(c_eps)
              << " grid=" << ns.size() << "x" << ls.size() << " -> " << c_out << "\n";
  });

  // simulate ---------------------------------------------------------------
  auto* cmd_sim = app.add_subcommand("simulate", "Shot-level mitigation on a noisy circuit");
  std::string s_technique, s_circuit, s_noise, s_obs, s_gains;
  int64_t s_shots = 100000;
  int s_chi = 64;
  std::string s_out = "simulate.json";
  cmd_sim->add_option("technique", s_technique, "pec | zne | tem")->required();
  cmd_sim->add_option("--circuit", s_circuit, "Circuit JSON path")->required();
  cmd_sim->add_option("--noise", s_noise, "Noise-model JSON path")->required();
  cmd_sim->add_option("--shots", s_shots, "Total shots M");
  cmd_sim->add_option("--obs", s_obs, "Observable Pauli text (default: a sampled stabilizer)");
  cmd_sim->add_option("--gains", s_gains, "ZNE gains, comma-separated (default: optimal pair)");
  cmd_sim->add_option("--chi", s_chi, "TEM bond-dimension cap");
  cmd_sim->add_option("--out", s_out, "Output JSON path");
  cmd_sim->callback([&] {
    Technique t = technique_from_name(s_technique);
    NoisyCircuit circuit = load_noisy_circuit(s_circuit, s_noise);
    st.manifest.digests = {{s_circuit, fnv1a_hex(s_circuit)}, {s_noise, fnv1a_hex(s_noise)}};
    Rng rng(st.seed);
    PauliString obs(circuit.n);
    if (s_obs.empty()) {
      Rng obs_rng = rng.derive(0x0b5eull);
      obs = stabilizer_observables(circuit, 1, obs_rng)[0];
    } else {
      obs = PauliString::from_text(s_obs);
      if (obs.n() != circuit.n) throw std::invalid_argument("--obs length differs from circuit n");
    }
    EstimatorResult res;
    json config = json::object();
    if (t == Technique::kPec) {
      res = pec_simulate(circuit, obs, s_shots, rng, st.threads);
    } else if (t == Technique::kZne) {
      double k = propagate(circuit, obs).damping;
      ZneConfig zc;
      if (s_gains.empty()) {
        auto [g1, g2] = optimal_gains(k);
        zc.gains = {g1, g2};
      } else {
        zc.gains = parse_doubles(s_gains);
      }
      zc.shots = optimal_shot_allocation(zc.gains, k, s_shots);
      res = zne_simulate(circuit, obs, zc, rng, st.threads);
      config["gains"] = zc.gains;
      config["gain_shots"] = zc.shots;
      config["damping"] = k;
    } else {
      TemMap tem = build_tem(circuit, s_chi);
      res = tem_simulate(circuit, obs, tem, s_shots, rng, st.threads);
      config["chi"] = s_chi;
      config["compression_error_estimate"] = compression_error_estimate(tem);
    }
    st.finish();
    config["shots"] = s_shots;
    config["threads"] = st.threads;
    json out{{"technique", technique_name(t)}, {"observable", obs.text()},
             {"mean", res.mean},               {"std_error", res.std_error},
             {"overhead", res.overhead},       {"shots_used", res.shots_used},
             {"config", config},               {"manifest", st.manifest.to_json()}};
    write_text(s_out, dump_json(out));
    std::cout << "simulate " << technique_name(t) << " obs=" << obs.text()
              << ": mean=" << format_double(res.mean)
              << " std_error=" << format_double(res.std_error) << " -> " << s_out << "\n";
  });

  // tem build --------------------------------------------------------------
  auto* cmd_tem = app.add_subcommand("tem", "Tensor-network error-mitigation map");
  cmd_tem->require_subcommand(1);
  auto* cmd_tem_build = cmd_tem->add_subcommand("build", "Build the map and checkpoint it");
  std::string t_circuit, t_noise, t_checkpoint = "tem.mpo";
  int t_chi = 64;
  cmd_tem_build->add_option("--circuit", t_circuit, "Circuit JSON path")->required();
  cmd_tem_build->add_option("--noise", t_noise, "Noise-model JSON path")->required();
  cmd_tem_build->add_option("--chi", t_chi, "Bond-dimension cap")->required();
  cmd_tem_build->add_option("--checkpoint", t_checkpoint, "Output MPO path");
  cmd_tem_build->callback([&] {
    NoisyCircuit circuit = load_noisy_circuit(t_circuit, t_noise);
    st.manifest.digests = {{t_circuit, fnv1a_hex(t_circuit)}, {t_noise, fnv1a_hex(t_noise)}};
    TemMap tem = build_tem(circuit, t_chi);
    save_mpo(t_checkpoint, tem.mpo);
    st.finish();
    json side{{"chi", t_chi},
              {"max_bond_dim", tem.mpo.max_bond_dim()},
              {"per_layer_truncation", tem.per_layer_truncation},
              {"compression_error_estimate", compression_error_estimate(tem)},
              {"manifest", st.manifest.to_json()}};
    write_text(t_checkpoint + ".json", dump_json(side));
    std::cout << "tem build chi=" << t_chi << " max_bond=" << tem.mpo.max_bond_dim()
              << " error_estimate=" << format_double(compression_error_estimate(tem)) << " -> "
              << t_checkpoint << "\n";
  });

  // spectrum ---------------------------------------------------------------
  auto* cmd_spec = app.add_subcommand("spectrum", "Singular values of one MPO link");
  std::string p_checkpoint, p_noise, p_out = "spectrum.csv";
  int p_link = -1;
  cmd_spec->add_option("--checkpoint", p_checkpoint, "MPO checkpoint path")->required();
  cmd_spec->add_option("--noise", p_noise, "Noise-model JSON path")->required();
  cmd_spec->add_option("--link", p_link, "1-based cut position (default: central link)");
  cmd_spec->add_option("--out", p_out, "Output CSV path");
  cmd_spec->callback([&] {
    DiagonalPauliMpo mpo = load_mpo(p_checkpoint);
    NoiseModel noise = load_noise(p_noise);
    st.manifest.digests = {{p_checkpoint, fnv1a_hex(p_checkpoint)}, {p_noise, fnv1a_hex(p_noise)}};
    TemMap tem(mpo.n());
    tem.mpo = mpo;
    int link = p_link > 0 ? p_link : mpo.n() / 2;
    SingularSpectrum spec = link_spectrum(tem, noise, link);
    st.finish();
    std::ostringstream body;
    body << csv_manifest(st.manifest);
    body << "# lambda1: " << format_double(spec.lambda1) << "\n";
    body << "# lambda2: " << format_double(spec.lambda2) << "\n";
    body << "link,index,sigma,relative\n";
    for (int i = 0; i < spec.values.size(); ++i)
      body << spec.link << ',' << i + 1 << ',' << format_double(spec.values(i)) << ','
           << format_double(spec.relative(i)) << "\n";
    write_text(p_out, body.str());
    std::cout << "spectrum link=" << spec.link << " count=" << spec.values.size() << " -> " << p_out
              << "\n";
  });

  // floquet ----------------------------------------------------------------
  auto* cmd_flo = app.add_subcommand("floquet", "Kicked-Heisenberg benchmark values");
  std::string f_mode, f_obs = "parity";
  FloquetConfig f_cfg;
  f_cfg.n = 122;
  f_cfg.t = 30;
  f_cfg.j = 0.7853981633974483;
  f_cfg.theta = 1.5;
  f_cfg.phi = 2.63;
  int f_chi = 1024;
  double f_eps = 0.0014;
  ResourceParams f_params;
  std::string f_out = "floquet.json";
  cmd_flo->add_option("mode", f_mode, "exact | truncated | mps | compare")->required();
  cmd_flo->add_option("--n", f_cfg.n, "Qubits (N = 4k+2)");
  cmd_flo->add_option("--t", f_cfg.t, "Floquet steps");
  cmd_flo->add_option("--j", f_cfg.j, "Interaction strength in (0, pi/2]");
  cmd_flo->add_option("--theta", f_cfg.theta, "Symmetry-breaking angle");
  cmd_flo->add_option("--phi", f_cfg.phi, "Local phase");
  cmd_flo->add_option("--obs", f_obs, "parity or a Pauli text of length N");
  cmd_flo->add_option("--chi", f_chi, "MPS bond-dimension cap (mps mode)");
  cmd_flo->add_option("--eps", f_eps, "Error density (compare mode)");
  cmd_flo->add_option("--out", f_out, "Output JSON path");
  add_resource_flags(cmd_flo, f_params, "--theta-inst");
  cmd_flo->callback([&] {
    f_cfg.validate();
    PauliString obs(f_cfg.n);
    if (f_obs == "parity") {
      for (int q = 0; q < f_cfg.n; ++q) obs.set_letter(q, kZ);
    } else {
      obs = PauliString::from_text(f_obs);
      if (obs.n() != f_cfg.n) throw std::invalid_argument("--obs length differs from --n");
    }
    json out{{"mode", f_mode}, {"n", f_cfg.n},         {"t", f_cfg.t},
             {"j", f_cfg.j},   {"theta", f_cfg.theta}, {"phi", f_cfg.phi},
             {"obs", f_obs}};
    std::string summary;
    if (f_mode == "exact") {
      double v = dual_unitary_exact(f_cfg, obs);
      out["value"] = v;
      summary = "value=" + format_double(v);
    } else if (f_mode == "truncated") {
      double v = dual_unitary_truncated(f_cfg, obs);
      out["value"] = v;
      summary = "value=" + format_double(v);
    } else if (f_mode == "mps") {
      MpsRunResult run = mps_simulate(f_cfg, f_chi, obs);
      out["value"] = run.value;
      out["chi"] = f_chi;
      out["max_bond_per_step"] = run.max_bond_per_step;
      out["truncation_weight"] = run.truncation_weight;
      summary = "value=" + format_double(run.value);
    } else if (f_mode == "compare") {
      Rng rng(st.seed);
      NoiseModel noise = sample_model(f_cfg.n, f_cfg.depth(), f_eps, rng);
      auto rows = advantage_comparison(f_cfg, noise, f_params);
      json jrows = json::array();
      for (const auto& r : rows)
        jrows.push_back(json{{"t", r.t},
                             {"depth", r.depth},
                             {"classical_modest", r.classical_modest},
                             {"classical_frontier", r.classical_frontier},
                             {"unmitigated", r.unmitigated},
                             {"mitigated", r.mitigated}});
      out["eps"] = f_eps;
      out["rows"] = jrows;
      summary = "rows=" + std::to_string(rows.size());
    } else {
      throw CLI::ValidationError("mode", "expected exact | truncated | mps | compare");
    }
    st.finish();
    out["manifest"] = st.manifest.to_json();
    write_text(f_out, dump_json(out));
    std::cout << "floquet " << f_mode << " n=" << f_cfg.n << " t=" << f_cfg.t << ": " << summary
              << " -> " << f_out << "\n";
  });

  // noise-gen --------------------------------------------------------------
  auto* cmd_gen = app.add_subcommand("noise-gen", "Sample a sparse Pauli-Lindblad noise model");
  int g_n = 4, g_l = 4;
  double g_eps = 0.01, g_theta = 0.0;
  std::string g_out = "noise.json";
  cmd_gen->add_option("--n", g_n, "Qubits")->required();
  cmd_gen->add_option("--l", g_l, "Layers")->required();
  cmd_gen->add_option("--eps", g_eps, "Error density per qubit per layer")->required();
  cmd_gen->add_option("--theta", g_theta, "Relative rate-fluctuation std. deviation");
  cmd_gen->add_option("--out", g_out, "Output noise-model JSON path");
  cmd_gen->callback([&] {
    if (g_n < 2 || g_l < 1 || g_eps < 0)
      throw std::invalid_argument("noise-gen: need n >= 2, l >= 1, eps >= 0");
    Rng rng(st.seed);
    NoiseModel model = sample_model(g_n, g_l, g_eps, rng, g_theta);
    save_noise(g_out, model);
    st.finish();
    write_text(g_out + ".manifest.json", dump_json(st.manifest.to_json()));
    std::cout << "noise-gen n=" << g_n << " l=" << g_l << " eps=" << format_double(g_eps)
              << ": gamma=" << format_double(model.gamma_total()) << " -> " << g_out << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::length_error& e) {
    std::cerr << "capacity guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
