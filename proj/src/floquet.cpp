#include "qemscope/floquet.hpp"

#include <cmath>
#include <stdexcept>

namespace qemscope {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::complex;

constexpr double kPi = 3.14159265358979323846;
const complex<double> kImag(0.0, 1.0);

Matrix2cd pauli_matrix(int letter) {
  Matrix2cd m;
  switch (letter) {
    case kI: m << 1, 0, 0, 1; break;
    case kX: m << 0, 1, 1, 0; break;
    case kY: m << 0, -kImag, kImag, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Matrix2cd ry(double a) {
  Matrix2cd m;
  m << std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2);
  return m;
}

Matrix2cd rz(double a) {
  Matrix2cd m;
  m << std::exp(-kImag * (a / 2)), 0, 0, std::exp(kImag * (a / 2));
  return m;
}

Matrix2cd hadamard() {
  Matrix2cd m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

Matrix2cd s_gate() {
  Matrix2cd m;
  m << 1, 0, 0, kImag;
  return m;
}

Matrix2cd sqrt_x() {
  // exp(i pi/4) R_X(pi/2) = [[1+i, 1-i], [1-i, 1+i]] / 2.
  Matrix2cd m;
  m << 1.0 + kImag, 1.0 - kImag, 1.0 - kImag, 1.0 + kImag;
  return 0.5 * m;
}

Matrix2cd t_gate() {
  Matrix2cd m;
  m << 1, 0, 0, std::exp(kImag * (kPi / 4));
  return m;
}

Matrix4cd cnot4() {
  Matrix4cd m = Matrix4cd::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}

Matrix4cd kron2(const Matrix2cd& a, const Matrix2cd& b) {
  Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace

Eigen::Matrix4cd heisenberg_interaction(double j) {
  // Triplet eigenvalue +1, singlet eigenvalue -3 of XX + YY + ZZ.
  Eigen::Vector4cd singlet;
  singlet << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
  Matrix4cd ps = singlet * singlet.adjoint();
  return std::exp(-kImag * j) * (Matrix4cd::Identity() - ps) + std::exp(3.0 * kImag * j) * ps;
}

void FloquetConfig::validate() const {
  if (n < 6 || n % 4 != 2)
    throw std::invalid_argument("FloquetConfig: n must be 4k+2 with k >= 1");
  if (t < 0) throw std::invalid_argument("FloquetConfig: t must be >= 0");
  if (j <= 0.0 || j > kPi / 2 + 1e-12)
    throw std::invalid_argument("FloquetConfig: j must lie in (0, pi/2]");
}

std::vector<std::pair<std::string, Eigen::Matrix4cd>> partial_swap_decomposition(double j) {
  const Matrix2cd id = Matrix2cd::Identity();
  const Matrix2cd h = hadamard();
  auto top = [&](const Matrix2cd& g) { return kron2(g, id); };
  auto bottom = [&](const Matrix2cd& g) { return kron2(id, g); };
  std::vector<std::pair<std::string, Matrix4cd>> seq;
  seq.emplace_back("s_0", top(s_gate()));
  seq.emplace_back("cnot_01", cnot4());
  seq.emplace_back("ry_0", top(ry(kPi / 2 + 2 * j)));
  seq.emplace_back("rz_1", bottom(rz(kPi / 2 + 2 * j)));
  seq.emplace_back("h_0", top(h));
  seq.emplace_back("h_1", bottom(h));
  seq.emplace_back("cnot_01", cnot4());
  seq.emplace_back("h_0", top(h));
  seq.emplace_back("h_1", bottom(h));
  seq.emplace_back("ry_0", top(ry(-kPi / 2 - 2 * j)));
  seq.emplace_back("cnot_01", cnot4());
  seq.emplace_back("sdg_1", bottom(s_gate().adjoint()));
  return seq;
}

int cnot_depth(const FloquetConfig& config) { return config.depth(); }

int64_t cnot_count(const FloquetConfig& config) {
  return config.n / 2 + static_cast<int64_t>(config.t) * (config.n / 2) * 3;
}

FloquetCircuit build_circuit(const FloquetConfig& config) {
  config.validate();
  const int n = config.n;
  FloquetCircuit circuit;
  circuit.n = n;
  const Matrix4cd u_block =
      kron2(sqrt_x(), t_gate()) * heisenberg_interaction(config.j) * kron2(sqrt_x(), t_gate());

  std::vector<FloquetOp> init;
  for (int p = 0; p < n / 2; ++p) {
    int q1 = 2 * p, q2 = 2 * p + 1;
    double angle = (p == (n - 2) / 4) ? config.theta : kPi / 2;
    FloquetOp op;
    op.q1 = q1;
    op.u1 = ry(angle);
    op.name = "ry";
    init.push_back(op);
    FloquetOp cx;
    cx.q1 = q1;
    cx.q2 = q2;
    cx.u2 = cnot4();
    cx.name = "cnot";
    init.push_back(cx);
    for (int q : {q1, q2}) {
      FloquetOp hop;
      hop.q1 = q;
      hop.u1 = hadamard();
      hop.name = "h";
      init.push_back(hop);
    }
    FloquetOp ph;
    ph.q1 = q1;
    ph.u1 = rz(config.phi);
    ph.name = "rz";
    init.push_back(ph);
  }
  circuit.layers.push_back(std::move(init));

  for (int tau = 1; tau <= config.t; ++tau) {
    std::vector<FloquetOp> layer;
    int start = (tau % 2 == 1) ? 1 : 0;
    for (int q = start; q < n; q += 2) {
      FloquetOp op;
      op.q1 = q;
      op.q2 = (q + 1) % n;
      op.u2 = u_block;
      op.name = "u";
      layer.push_back(op);
    }
    circuit.layers.push_back(std::move(layer));
  }
  return circuit;
}

namespace {

// Statevector with qubit 0 as the most significant bit.
void apply_u1(VectorXcd& state, int n, int q, const Matrix2cd& u) {
  const int64_t stride = int64_t{1} << (n - 1 - q);
  for (int64_t base = 0; base < state.size(); ++base) {
    if (base & stride) continue;
    complex<double> a = state(base), b = state(base | stride);
    state(base) = u(0, 0) * a + u(0, 1) * b;
    state(base | stride) = u(1, 0) * a + u(1, 1) * b;
  }
}

void apply_u2(VectorXcd& state, int n, int q1, int q2, const Matrix4cd& u) {
  const int64_t s1 = int64_t{1} << (n - 1 - q1);
  const int64_t s2 = int64_t{1} << (n - 1 - q2);
  for (int64_t base = 0; base < state.size(); ++base) {
    if ((base & s1) || (base & s2)) continue;
    complex<double> amp[4];
    for (int k = 0; k < 4; ++k)
      amp[k] = state(base | ((k >> 1) ? s1 : 0) | ((k & 1) ? s2 : 0));
    for (int k = 0; k < 4; ++k) {
      complex<double> v = 0.0;
      for (int m = 0; m < 4; ++m) v += u(k, m) * amp[m];
      state(base | ((k >> 1) ? s1 : 0) | ((k & 1) ? s2 : 0)) = v;
    }
  }
}

VectorXcd run_statevector(const FloquetCircuit& circuit) {
  VectorXcd state = VectorXcd::Zero(int64_t{1} << circuit.n);
  state(0) = 1.0;
  for (const auto& layer : circuit.layers)
    for (const auto& op : layer) {
      if (op.q2 < 0)
        apply_u1(state, circuit.n, op.q1, op.u1);
      else
        apply_u2(state, circuit.n, op.q1, op.q2, op.u2);
    }
  return state;
}

double pauli_expectation(const VectorXcd& state, int n, const PauliString& observable) {
  VectorXcd applied = state;
  for (int q = 0; q < n; ++q)
    if (observable.letter(q) != kI) apply_u1(applied, n, q, pauli_matrix(observable.letter(q)));
  return state.dot(applied).real();
}

}  // namespace

double statevector_simulate(const FloquetConfig& config, const PauliString& observable) {
  config.validate();
  if (config.n > 12)
    throw std::length_error("statevector_simulate: dense reference limited to n <= 12");
  if (observable.n() != config.n)
    throw std::invalid_argument("statevector_simulate: observable size mismatch");
  VectorXcd state = run_statevector(build_circuit(config));
  return pauli_expectation(state, config.n, observable);
}

namespace {

struct RainbowPair {
  int first;   // qubit 2p - t (mod N)
  int second;  // qubit 2p + 1 + t (mod N)
  Eigen::Vector4cd state;
};

std::vector<RainbowPair> rainbow_state(const FloquetConfig& config, bool truncated) {
  config.validate();
  if (std::abs(config.j - kPi / 4) > 1e-12)
    throw std::invalid_argument("rainbow oracle requires the dual-unitary point j = pi/4");
  if (config.t > config.n / 4)
    throw std::out_of_range("rainbow oracle valid only for t <= floor(n/4)");
  const int n = config.n;
  Matrix2cd d1 = Matrix2cd::Identity(), d2 = Matrix2cd::Identity();
  const Matrix2cd g1 = sqrt_x() * t_gate();  // dressing (sqrtX T)^t
  const Matrix2cd g2 = t_gate() * sqrt_x();  // dressing (T sqrtX)^t
  for (int k = 0; k < config.t; ++k) {
    d1 = g1 * d1;
    d2 = g2 * d2;
  }
  std::vector<RainbowPair> pairs;
  for (int p = 0; p < n / 2; ++p) {
    RainbowPair pair;
    pair.first = ((2 * p - config.t) % n + n) % n;
    pair.second = (2 * p + 1 + config.t) % n;
    if (p == (n - 2) / 4) {
      double c = std::cos(config.theta / 2), s = std::sin(config.theta / 2);
      if (truncated) {
        if (std::abs(std::abs(c) - std::abs(s)) < 1e-12)
          throw std::invalid_argument(
              "dual_unitary_truncated: degenerate Schmidt halves at |cos| = |sin|");
        Eigen::Vector2cd local;
        local << 1.0 / std::sqrt(2.0), (std::abs(c) > std::abs(s) ? 1.0 : -1.0) / std::sqrt(2.0);
        Eigen::Vector2cd left = d1 * rz(config.phi) * local;
        Eigen::Vector2cd right = d2 * local;
        pair.state << left(0) * right(0), left(0) * right(1), left(1) * right(0),
            left(1) * right(1);
      } else {
        Eigen::Vector4cd pp, mm;
        pp << 0.5, 0.5, 0.5, 0.5;
        mm << 0.5, -0.5, -0.5, 0.5;
        pair.state = kron2(d1 * rz(config.phi), d2) * (c * pp + s * mm);
      }
    } else {
      Eigen::Vector4cd bell;
      bell << 1.0 / std::sqrt(2.0), 0, 0, std::exp(kImag * config.phi) / std::sqrt(2.0);
      pair.state = kron2(d1, d2) * bell;
    }
    pairs.push_back(pair);
  }
  return pairs;
}

double rainbow_expectation(const FloquetConfig& config, const PauliString& observable,
                           bool truncated) {
  if (observable.n() != config.n)
    throw std::invalid_argument("rainbow oracle: observable size mismatch");
  auto pairs = rainbow_state(config, truncated);
  complex<double> value = 1.0;
  for (const auto& pair : pairs) {
    Matrix4cd op = kron2(pauli_matrix(observable.letter(pair.first)),
                         pauli_matrix(observable.letter(pair.second)));
    value *= pair.state.dot(op * pair.state);
  }
  return value.real();
}

}  // namespace

double dual_unitary_exact(const FloquetConfig& config, const PauliString& observable) {
  return rainbow_expectation(config, observable, false);
}

double dual_unitary_truncated(const FloquetConfig& config, const PauliString& observable) {
  return rainbow_expectation(config, observable, true);
}

double skewed_pair_correlator(const FloquetConfig& config, bool truncated) {
  const int a = config.n / 2 - 1 - config.t;
  const int b = config.n / 2 + config.t;
  PauliString zz(config.n), za(config.n), zb(config.n);
  zz.set_letter(a, kZ);
  zz.set_letter(b, kZ);
  za.set_letter(a, kZ);
  zb.set_letter(b, kZ);
  return rainbow_expectation(config, zz, truncated) -
         rainbow_expectation(config, za, truncated) * rainbow_expectation(config, zb, truncated);
}

namespace {

// Minimal open-boundary MPS (physical dimension 2) with exact two-site gate
// application; bond caps are imposed only by explicit compress() calls.
class Mps {
 public:
  explicit Mps(int n) : sites_(n) {
    for (auto& site : sites_)
      for (int phys = 0; phys < 2; ++phys)
        site[phys] = MatrixXcd::Constant(1, 1, phys == 0 ? 1.0 : 0.0);
  }

  int n() const { return static_cast<int>(sites_.size()); }

  int max_bond() const {
    int d = 1;
    for (int q = 0; q + 1 < n(); ++q) d = std::max<int>(d, sites_[q][0].cols());
    return d;
  }

  void apply_one(int q, const Matrix2cd& u) {
    std::array<MatrixXcd, 2> out;
    for (int i = 0; i < 2; ++i) out[i] = u(i, 0) * sites_[q][0] + u(i, 1) * sites_[q][1];
    sites_[q] = out;
  }

  // Exact application on adjacent sites (q, q+1) with a zero-tolerance split.
  void apply_two(int q, const Matrix4cd& u) {
    const Eigen::Index dl = sites_[q][0].rows();
    const Eigen::Index dr = sites_[q + 1][0].cols();
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(2 * dl, 2 * dr);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int m = 0; m < 2; ++m)
            big.block(i * dl, j * dr, dl, dr) += u(2 * i + j, 2 * k + m) * sites_[q][k] * sites_[q + 1][m];
    Eigen::BDCSVD<MatrixXcd> svd(big, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
    Eigen::Index keep = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      if (sigma(i) > 1e-14 * smax) ++keep;
    if (keep == 0) keep = 1;
    MatrixXcd us = svd.matrixU().leftCols(keep) * sigma.head(keep).asDiagonal();
    MatrixXcd vt = svd.matrixV().adjoint().topRows(keep);
    for (int phys = 0; phys < 2; ++phys) {
      sites_[q][phys] = us.middleRows(phys * dl, dl);
      sites_[q + 1][phys] = vt.middleCols(phys * dr, dr);
    }
  }

  // Left QR + right SVD sweep with the bond cap; returns the relative 2-norm
  // discard and renormalizes the state.
  double compress(int chi) {
    for (int q = 0; q + 1 < n(); ++q) {
      const Eigen::Index dl = sites_[q][0].rows();
      const Eigen::Index dr = sites_[q][0].cols();
      MatrixXcd m(2 * dl, dr);
      for (int phys = 0; phys < 2; ++phys) m.middleRows(phys * dl, dl) = sites_[q][phys];
      const Eigen::Index r = std::min(m.rows(), m.cols());
      Eigen::HouseholderQR<MatrixXcd> qr(m);
      MatrixXcd thin_q = qr.householderQ() * MatrixXcd::Identity(m.rows(), r);
      MatrixXcd rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
      for (int phys = 0; phys < 2; ++phys) sites_[q][phys] = thin_q.middleRows(phys * dl, dl);
      for (int phys = 0; phys < 2; ++phys) sites_[q + 1][phys] = rr * sites_[q + 1][phys];
    }
    double discard2 = 0.0;
    for (int q = n() - 1; q >= 1; --q) {
      const Eigen::Index dl = sites_[q][0].rows();
      const Eigen::Index dr = sites_[q][0].cols();
      MatrixXcd m(dl, 2 * dr);
      for (int phys = 0; phys < 2; ++phys) m.middleCols(phys * dr, dr) = sites_[q][phys];
      Eigen::BDCSVD<MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Eigen::VectorXd& sigma = svd.singularValues();
      const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
      Eigen::Index rank = 0;
      for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > 1e-14 * smax) ++rank;
      if (rank == 0) rank = 1;
      const Eigen::Index keep = std::min<Eigen::Index>(rank, chi);
      for (Eigen::Index i = keep; i < rank; ++i) discard2 += sigma(i) * sigma(i);
      MatrixXcd vt = svd.matrixV().adjoint().topRows(keep);
      MatrixXcd us = svd.matrixU().leftCols(keep) * sigma.head(keep).asDiagonal();
      for (int phys = 0; phys < 2; ++phys) sites_[q][phys] = vt.middleCols(phys * dr, dr);
      for (int phys = 0; phys < 2; ++phys) sites_[q - 1][phys] = sites_[q - 1][phys] * us;
    }
    double norm2 = 0.0;
    for (int phys = 0; phys < 2; ++phys) norm2 += sites_[0][phys].squaredNorm();
    double norm = std::sqrt(norm2);
    if (norm > 0.0)
      for (int phys = 0; phys < 2; ++phys) sites_[0][phys] /= norm;
    return norm > 0.0 ? std::sqrt(discard2) / norm : 0.0;
  }

  // <psi|prod_q sigma|psi> / <psi|psi> via a transfer-matrix contraction.
  double expectation(const PauliString& observable) const {
    MatrixXcd env = MatrixXcd::Ones(1, 1), nrm = MatrixXcd::Ones(1, 1);
    for (int q = 0; q < n(); ++q) {
      Matrix2cd op = pauli_matrix(observable.letter(q));
      MatrixXcd next = MatrixXcd::Zero(sites_[q][0].cols(), sites_[q][0].cols());
      MatrixXcd next_n = MatrixXcd::Zero(sites_[q][0].cols(), sites_[q][0].cols());
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          if (op(i, j) != 0.0) next += op(i, j) * sites_[q][i].adjoint() * env * sites_[q][j];
          if (i == j) next_n += sites_[q][i].adjoint() * nrm * sites_[q][j];
        }
      env = next;
      nrm = next_n;
    }
    return (env(0, 0) / nrm(0, 0)).real();
  }

 private:
  std::vector<std::array<MatrixXcd, 2>> sites_;
};

const Matrix4cd& swap4() {
  static const Matrix4cd m = [] {
    Matrix4cd s = Matrix4cd::Zero();
    s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1;
    return s;
  }();
  return m;
}

}  // namespace

MpsRunResult mps_simulate(const FloquetConfig& config, int chi, const PauliString& observable) {
  config.validate();
  if (config.n > 24) throw std::length_error("mps_simulate: capacity guard n <= 24");
  if (chi < 1 || chi > 4096) throw std::length_error("mps_simulate: capacity guard chi <= 4096");
  if (observable.n() != config.n)
    throw std::invalid_argument("mps_simulate: observable size mismatch");
  FloquetCircuit circuit = build_circuit(config);
  Mps mps(config.n);
  MpsRunResult result;
  double discard2 = 0.0;
  for (const auto& layer : circuit.layers) {
    for (const auto& op : layer) {
      if (op.q2 < 0) {
        mps.apply_one(op.q1, op.u1);
      } else if (op.q2 == op.q1 + 1) {
        mps.apply_two(op.q1, op.u2);
      } else {
        // Periodic pair (n-1, 0): route qubit 0 to the right end with exact
        // swaps, apply the gate with swapped tensor factors, route back.
        for (int k = 0; k + 2 < config.n; ++k) mps.apply_two(k, swap4());
        mps.apply_two(config.n - 2, swap4() * op.u2 * swap4());
        for (int k = config.n - 3; k >= 0; --k) mps.apply_two(k, swap4());
      }
    }
    double d = mps.compress(chi);
    discard2 += d * d;
    result.max_bond_per_step.push_back(mps.max_bond());
  }
  result.truncation_weight = std::sqrt(discard2);
  result.value = mps.expectation(observable);
  return result;
}

std::vector<AdvantageRow> advantage_comparison(const FloquetConfig& config,
                                               const NoiseModel& noise,
                                               const ResourceParams& params) {
  config.validate();
  const double eps = noise.epsilon();
  std::vector<AdvantageRow> rows;
  for (int step = 1; step <= config.t; ++step) {
    AdvantageRow row;
    row.t = step;
    row.depth = 3 * step + 1;
    row.classical_modest = classical_mps_baseline(config.n, step, params).relative_error;
    ResourceParams frontier = params;
    frontier.flops = 1.2e18;
    row.classical_frontier = classical_mps_baseline(config.n, step, frontier).relative_error;
    row.unmitigated = 1.0 - std::exp(-eps * config.n * row.depth / 2.0);
    row.mitigated = budget(Technique::kTem, config.n, row.depth, eps,
                           static_cast<double>(config.n) * row.depth, params)
                        .delta_total;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qemscope
