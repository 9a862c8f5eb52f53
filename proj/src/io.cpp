#include "qemscope/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qemscope {

using nlohmann::json;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

const char* axis_letter(int axis) {
  switch (axis) {
    case kX: return "X";
    case kY: return "Y";
    case kZ: return "Z";
    default: throw std::invalid_argument("axis_letter: invalid axis");
  }
}

int axis_from_letter(char c) {
  switch (c) {
    case 'X': return kX;
    case 'Y': return kY;
    case 'Z': return kZ;
    default: throw std::invalid_argument(std::string("invalid axis letter: ") + c);
  }
}

}  // namespace

json noise_to_json(const NoiseModel& model) {
  json layers = json::array();
  for (const auto& layer : model.layers) {
    json gens = json::array();
    for (const auto& g : layer.generators) {
      json entry;
      std::string axis = axis_letter(g.axis1);
      if (g.two_qubit()) {
        entry["sites"] = {g.q1, g.q2};
        axis += axis_letter(g.axis2);
      } else {
        entry["sites"] = {g.q1};
      }
      entry["axis"] = axis;
      entry["rate"] = g.rate;
      gens.push_back(entry);
    }
    layers.push_back(gens);
  }
  return json{{"n", model.n}, {"layers", layers}, {"theta", model.theta}};
}

NoiseModel noise_from_json(const json& j) {
  NoiseModel model;
  model.n = j.at("n").get<int>();
  model.theta = j.value("theta", 0.0);
  if (model.n < 1) throw std::invalid_argument("noise model: n must be >= 1");
  if (model.theta < 0) throw std::invalid_argument("noise model: theta must be >= 0");
  for (const auto& layer_json : j.at("layers")) {
    SplLayer layer;
    layer.n = model.n;
    for (const auto& entry : layer_json) {
      SplGenerator g;
      auto sites = entry.at("sites").get<std::vector<int>>();
      std::string axis = entry.at("axis").get<std::string>();
      g.rate = entry.at("rate").get<double>();
      if (g.rate < 0) throw std::invalid_argument("noise model: rates must be >= 0");
      if (sites.size() == 1 && axis.size() == 1) {
        g.q1 = sites[0];
        g.axis1 = axis_from_letter(axis[0]);
      } else if (sites.size() == 2 && axis.size() == 2) {
        g.q1 = sites[0];
        g.q2 = sites[1];
        g.axis1 = axis_from_letter(axis[0]);
        g.axis2 = axis_from_letter(axis[1]);
        if (std::abs(g.q1 - g.q2) != 1)
          throw std::invalid_argument("noise model: two-qubit generators must act on adjacent qubits");
      } else {
        throw std::invalid_argument("noise model: sites/axis arity mismatch");
      }
      if (g.q1 < 0 || g.q1 >= model.n || (g.two_qubit() && (g.q2 < 0 || g.q2 >= model.n)))
        throw std::invalid_argument("noise model: qubit index out of range");
      layer.generators.push_back(g);
    }
    model.layers.push_back(std::move(layer));
  }
  return model;
}

json circuit_to_json(int n, const std::vector<CliffordLayer>& layers) {
  const auto& table = SqCliffords::instance();
  json out_layers = json::array();
  for (const auto& layer : layers) {
    json cnots = json::array();
    for (auto [c, t] : layer.cnots) cnots.push_back({c, t});
    json sq = json::array();
    for (uint8_t id : layer.sq) sq.push_back(table.gate(id).name);
    out_layers.push_back(json{{"cnots", cnots}, {"sq", sq}});
  }
  return json{{"n", n}, {"layers", out_layers}};
}

std::vector<CliffordLayer> circuit_from_json(const json& j, int& n) {
  const auto& table = SqCliffords::instance();
  n = j.at("n").get<int>();
  if (n < 1) throw std::invalid_argument("circuit: n must be >= 1");
  std::vector<CliffordLayer> layers;
  for (const auto& layer_json : j.at("layers")) {
    CliffordLayer layer;
    for (const auto& pair : layer_json.at("cnots")) {
      int c = pair.at(0).get<int>(), t = pair.at(1).get<int>();
      if (c < 0 || c >= n || t < 0 || t >= n || c == t)
        throw std::invalid_argument("circuit: invalid CNOT pair");
      layer.cnots.emplace_back(c, t);
    }
    auto names = layer_json.at("sq").get<std::vector<std::string>>();
    if (static_cast<int>(names.size()) != n)
      throw std::invalid_argument("circuit: sq list must name one gate per qubit");
    for (const auto& name : names) layer.sq.push_back(static_cast<uint8_t>(table.by_name(name)));
    layers.push_back(std::move(layer));
  }
  return layers;
}

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text << "\n";
}

}  // namespace

NoiseModel load_noise(const std::string& path) { return noise_from_json(read_json_file(path)); }

void save_noise(const std::string& path, const NoiseModel& model) {
  write_text_file(path, noise_to_json(model).dump(2));
}

std::vector<CliffordLayer> load_circuit(const std::string& path, int& n) {
  return circuit_from_json(read_json_file(path), n);
}

void save_circuit(const std::string& path, int n, const std::vector<CliffordLayer>& layers) {
  write_text_file(path, circuit_to_json(n, layers).dump(2));
}

namespace {

void write_u32(std::ofstream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t read_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::invalid_argument("mpo checkpoint: truncated header");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void write_f64(std::ofstream& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::invalid_argument("mpo checkpoint: truncated data");
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_mpo(const std::string& path, const DiagonalPauliMpo& mpo) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out.write("QMPO", 4);
  write_u32(out, static_cast<uint32_t>(mpo.n()));
  for (int q = 0; q < mpo.n(); ++q) {
    for (int phi = 0; phi < 4; ++phi) {
      const Eigen::MatrixXd& a = mpo.site(q)[phi];
      write_u32(out, static_cast<uint32_t>(a.rows()));
      write_u32(out, static_cast<uint32_t>(a.cols()));
      for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c) write_f64(out, a(r, c));
    }
  }
}

DiagonalPauliMpo load_mpo(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "QMPO", 4) != 0)
    throw std::invalid_argument("mpo checkpoint: bad magic");
  uint32_t n = read_u32(in);
  if (n < 1 || n > 4096) throw std::invalid_argument("mpo checkpoint: invalid site count");
  DiagonalPauliMpo mpo(static_cast<int>(n));
  for (uint32_t q = 0; q < n; ++q) {
    for (int phi = 0; phi < 4; ++phi) {
      uint32_t rows = read_u32(in), cols = read_u32(in);
      if (rows < 1 || cols < 1 || rows > (1u << 20) || cols > (1u << 20))
        throw std::invalid_argument("mpo checkpoint: invalid tensor shape");
      Eigen::MatrixXd a(rows, cols);
      for (uint32_t r = 0; r < rows; ++r)
        for (uint32_t c = 0; c < cols; ++c) a(r, c) = read_f64(in);
      mpo.site(static_cast<int>(q))[phi] = a;
    }
  }
  return mpo;
}

}  // namespace qemscope
