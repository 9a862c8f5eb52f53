#include "qemscope/tem_mpo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace qemscope {

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

using SiteTensor = std::array<Eigen::MatrixXd, 4>;

// Left-to-right QR canonicalization; no weight is lost.
void left_qr_sweep(std::vector<SiteTensor>& sites) {
  const int n = static_cast<int>(sites.size());
  for (int q = 0; q + 1 < n; ++q) {
    const Eigen::Index dl = sites[q][0].rows();
    const Eigen::Index dr = sites[q][0].cols();
    Eigen::MatrixXd m(4 * dl, dr);
    for (int phi = 0; phi < 4; ++phi) m.middleRows(phi * dl, dl) = sites[q][phi];
    const Eigen::Index r = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd thin_q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), r);
    Eigen::MatrixXd rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    for (int phi = 0; phi < 4; ++phi) sites[q][phi] = thin_q.middleRows(phi * dl, dl);
    for (int phi = 0; phi < 4; ++phi) sites[q + 1][phi] = rr * sites[q + 1][phi];
  }
}

// Right-to-left SVD sweep on a left-canonical MPO.  Caps every bond at chi,
// drops numerical zeros (<= zero_tol * sigma_max) free of charge, and returns
// the total squared discarded weight.  When record_link >= 0, the singular
// values of that bond (1-based cut: bond `link` joins sites link-1 and link)
// are stored before truncation.
double right_svd_sweep(std::vector<SiteTensor>& sites, int chi, double zero_tol, int record_link,
                       Eigen::VectorXd* record) {
  const int n = static_cast<int>(sites.size());
  double discard2 = 0.0;
  for (int q = n - 1; q >= 1; --q) {
    const Eigen::Index dl = sites[q][0].rows();
    const Eigen::Index dr = sites[q][0].cols();
    Eigen::MatrixXd m(dl, 4 * dr);
    for (int phi = 0; phi < 4; ++phi) m.middleCols(phi * dr, dr) = sites[q][phi];
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      if (sigma(i) > zero_tol * smax) ++rank;
    if (rank == 0) rank = 1;
    if (record && record_link == q) *record = sigma.head(rank);
    const Eigen::Index keep = std::min<Eigen::Index>(rank, chi);
    for (Eigen::Index i = keep; i < rank; ++i) discard2 += sigma(i) * sigma(i);
    Eigen::MatrixXd vt = svd.matrixV().adjoint().topRows(keep);
    Eigen::MatrixXd us = svd.matrixU().leftCols(keep) * sigma.head(keep).asDiagonal();
    for (int phi = 0; phi < 4; ++phi) sites[q][phi] = vt.middleCols(phi * dr, dr);
    for (int phi = 0; phi < 4; ++phi) sites[q - 1][phi] = sites[q - 1][phi] * us;
  }
  return discard2;
}

double stacked_norm(const SiteTensor& site) {
  double s = 0.0;
  for (const auto& a : site) s += a.squaredNorm();
  return std::sqrt(s);
}

constexpr int kNoCap = std::numeric_limits<int>::max();

}  // namespace

DiagonalPauliMpo::DiagonalPauliMpo(int n) {
  if (n < 1) throw std::invalid_argument("DiagonalPauliMpo: need at least one site");
  sites_.resize(n);
  for (auto& site : sites_)
    for (auto& a : site) a = Eigen::MatrixXd::Ones(1, 1);
}

std::vector<int> DiagonalPauliMpo::bond_dims() const {
  std::vector<int> dims;
  for (int q = 0; q + 1 < n(); ++q) dims.push_back(static_cast<int>(sites_[q][0].cols()));
  return dims;
}

int DiagonalPauliMpo::max_bond_dim() const {
  int d = 1;
  for (int b : bond_dims()) d = std::max(d, b);
  return d;
}

double DiagonalPauliMpo::value(const PauliString& beta) const {
  if (beta.n() != n()) throw std::invalid_argument("DiagonalPauliMpo::value: qubit count mismatch");
  Eigen::RowVectorXd v = sites_[0][beta.letter(0)].row(0);
  for (int q = 1; q < n(); ++q) v = v * sites_[q][beta.letter(q)];
  return v(0);
}

double DiagonalPauliMpo::norm() const {
  std::vector<SiteTensor> copy = sites_;
  left_qr_sweep(copy);
  return stacked_norm(copy.back());
}

void DiagonalPauliMpo::hadamard_multiply(const DiagonalPauliMpo& other) {
  if (other.n() != n())
    throw std::invalid_argument("DiagonalPauliMpo::hadamard_multiply: qubit count mismatch");
  for (int q = 0; q < n(); ++q)
    for (int phi = 0; phi < 4; ++phi)
      sites_[q][phi] = kron(sites_[q][phi], other.sites_[q][phi]);
}

void DiagonalPauliMpo::permute_site(int q, const std::array<uint8_t, 4>& perm) {
  SiteTensor out;
  for (int phi = 0; phi < 4; ++phi) out[phi] = sites_[q][perm[phi]];
  sites_[q] = out;
}

void DiagonalPauliMpo::permute_pair(int q, const std::array<uint8_t, 16>& perm) {
  if (q < 0 || q + 1 >= n())
    throw std::invalid_argument("DiagonalPauliMpo::permute_pair: sites must be adjacent");
  const Eigen::Index dl = sites_[q][0].rows();
  const Eigen::Index dr = sites_[q + 1][0].cols();
  // Merge, relabel, and split back exactly.  No rank is dropped here: the
  // bond sits away from the canonical centre, so even tiny local singular
  // values can carry large global weight.  The layer-end compress truncates
  // after canonicalising, which is the only place a cut is safe.
  Eigen::MatrixXd big(4 * dl, 4 * dr);
  for (int b1 = 0; b1 < 4; ++b1) {
    for (int b2 = 0; b2 < 4; ++b2) {
      int src = perm[4 * b1 + b2];
      big.block(b1 * dl, b2 * dr, dl, dr) = sites_[q][src >> 2] * sites_[q + 1][src & 3];
    }
  }
  const Eigen::Index r = std::min(big.rows(), big.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(big);
  Eigen::MatrixXd thin_q = qr.householderQ() * Eigen::MatrixXd::Identity(big.rows(), r);
  Eigen::MatrixXd rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  for (int phi = 0; phi < 4; ++phi) {
    sites_[q][phi] = thin_q.middleRows(phi * dl, dl);
    sites_[q + 1][phi] = rr.middleCols(phi * dr, dr);
  }
}

double DiagonalPauliMpo::compress(int chi, double zero_tol) {
  if (chi < 1) throw std::invalid_argument("DiagonalPauliMpo::compress: chi must be >= 1");
  if (n() == 1) return 0.0;
  left_qr_sweep(sites_);
  double discard2 = right_svd_sweep(sites_, chi, zero_tol, -1, nullptr);
  double post = stacked_norm(sites_[0]);
  return post > 0.0 ? std::sqrt(discard2) / post : 0.0;
}

Eigen::VectorXd DiagonalPauliMpo::link_singular_values(int link) const {
  if (link < 1 || link >= n())
    throw std::invalid_argument("DiagonalPauliMpo::link_singular_values: link out of range");
  std::vector<SiteTensor> copy = sites_;
  left_qr_sweep(copy);
  Eigen::VectorXd out;
  right_svd_sweep(copy, kNoCap, 1e-14, link, &out);
  return out;
}

DiagonalPauliMpo noise_inverse_mpo(const SplLayer& layer) {
  const int n = layer.n;
  DiagonalPauliMpo m(n);
  // Per-site inverse-fidelity factors from one-qubit generators and per-bond
  // 4x4 factors from adjacent two-qubit generators; the diagonal is their
  // product, so the raw bond dimension is 4 before the exact-rank reduction.
  std::vector<Eigen::Vector4d> site_factor(n, Eigen::Vector4d::Ones());
  std::vector<Eigen::Matrix4d> bond_factor(std::max(0, n - 1), Eigen::Matrix4d::Ones());
  for (const auto& g : layer.generators) {
    double boost = std::exp(2.0 * g.rate);
    if (!g.two_qubit()) {
      for (int b = 0; b < 4; ++b)
        if (b != kI && b != g.axis1) site_factor[g.q1](b) *= boost;
    } else {
      int lo = std::min(g.q1, g.q2), hi = std::max(g.q1, g.q2);
      if (hi - lo != 1)
        throw std::invalid_argument("noise_inverse_mpo: two-qubit generators must be adjacent");
      int a1 = (lo == g.q1) ? g.axis1 : g.axis2;
      int a2 = (lo == g.q1) ? g.axis2 : g.axis1;
      for (int b1 = 0; b1 < 4; ++b1) {
        for (int b2 = 0; b2 < 4; ++b2) {
          bool anti = (b1 != kI && b1 != a1) != (b2 != kI && b2 != a2);
          if (anti) bond_factor[lo](b1, b2) *= boost;
        }
      }
    }
  }
  if (n == 1) {
    for (int phi = 0; phi < 4; ++phi) m.site(0)[phi](0, 0) = site_factor[0](phi);
    return m;
  }
  for (int phi = 0; phi < 4; ++phi) {
    m.site(0)[phi] = Eigen::MatrixXd::Zero(1, 4);
    m.site(0)[phi](0, phi) = site_factor[0](phi);
    m.site(n - 1)[phi] = bond_factor[n - 2].col(phi) * site_factor[n - 1](phi);
  }
  for (int q = 1; q + 1 < n; ++q) {
    for (int phi = 0; phi < 4; ++phi) {
      m.site(q)[phi] = Eigen::MatrixXd::Zero(4, 4);
      m.site(q)[phi].col(phi) = bond_factor[q - 1].col(phi) * site_factor[q](phi);
    }
  }
  m.compress(kNoCap);  // exact-rank reduction, no weight discarded
  return m;
}

void apply_inverse_noise(TemMap& m, const SplLayer& layer) {
  m.mpo.hadamard_multiply(noise_inverse_mpo(layer));
  m.per_layer_truncation.push_back(m.mpo.compress(m.chi));
}

void conjugate_clifford(TemMap& m, const CliffordLayer& layer) {
  const auto& table = SqCliffords::instance();
  const int n = m.mpo.n();
  // New diagonal: r'_beta = r_{beta''} with sigma_{beta''} = U^dag sigma_beta U
  // and U = (sq gates) * (CNOTs).  Index pullback composes contravariantly, so
  // the CNOT relabelings are applied to the tensors first.
  for (auto [c, t] : layer.cnots) {
    int lo = std::min(c, t);
    if (std::abs(c - t) != 1)
      throw std::invalid_argument("conjugate_clifford: CNOT pairs must be adjacent");
    std::array<uint8_t, 16> perm{};
    for (int code = 0; code < 16; ++code) {
      PauliString p(2);
      p.set_letter(lo == c ? 0 : 1, code >> 2);
      p.set_letter(lo == c ? 1 : 0, code & 3);
      int sign = 1;
      CliffordLayer local;
      local.cnots.emplace_back(lo == c ? 0 : 1, lo == c ? 1 : 0);
      local.sq = {0, 0};
      conjugate_forward(local, p, sign);  // CNOT conjugation is self-adjoint
      perm[code] = static_cast<uint8_t>((p.letter(lo == c ? 0 : 1) << 2) |
                                        p.letter(lo == c ? 1 : 0));
    }
    m.mpo.permute_pair(lo, perm);
  }
  for (int q = 0; q < n; ++q) {
    const auto& g = table.gate(table.gate(layer.sq[q]).inverse);
    std::array<uint8_t, 4> perm{g.img[0], g.img[1], g.img[2], g.img[3]};
    m.mpo.permute_site(q, perm);
  }
  m.per_layer_truncation.push_back(m.mpo.compress(m.chi));
}

TemMap build_tem(const NoisyCircuit& circuit, int chi) {
  if (chi < 1) throw std::invalid_argument("build_tem: chi must be >= 1");
  if (circuit.noise.depth() != circuit.depth())
    throw std::invalid_argument("build_tem: noise depth must match circuit depth");
  TemMap m(circuit.n);
  m.chi = chi;
  for (int l = 0; l < circuit.depth(); ++l) {
    apply_inverse_noise(m, circuit.noise.layers[l]);
    conjugate_clifford(m, circuit.unitaries[l]);
  }
  return m;
}

double diagonal_element(const TemMap& m, const PauliString& beta) { return m.mpo.value(beta); }

double compression_error_estimate(const TemMap& m) {
  double s = 0.0;
  for (double d : m.per_layer_truncation) s += d * d;
  return std::sqrt(s);
}

SingularSpectrum link_spectrum(const TemMap& m, const NoiseModel& noise, int link) {
  SingularSpectrum spec;
  spec.link = link;
  spec.values = m.mpo.link_singular_values(link);
  spec.relative = spec.values / spec.values(0);
  std::vector<double> rates;
  double sumsq = 0.0;
  for (const auto& layer : noise.layers) {
    for (const auto& g : layer.generators) {
      rates.push_back(g.rate);
      sumsq += g.rate * g.rate;
    }
  }
  if (!rates.empty()) {
    size_t mid = rates.size() / 2;
    std::nth_element(rates.begin(), rates.begin() + mid, rates.end());
    double hi = rates[mid];
    if (rates.size() % 2 == 0) {
      std::nth_element(rates.begin(), rates.begin() + mid - 1, rates.begin() + mid);
      spec.lambda1 = 0.5 * (rates[mid - 1] + hi);
    } else {
      spec.lambda1 = hi;
    }
    spec.lambda2 = std::sqrt(sumsq / noise.depth());
  }
  return spec;
}

namespace {

// First-order network Id + propagated single-generator inverse deviations,
// deduplicated by letter pattern.  Values are irrelevant for the link rank
// because the (prefix, suffix) pair determines the pattern uniquely, so every
// matrix entry is a single term; only the sparsity pattern matters.
std::vector<std::string> first_order_patterns(const NoisyCircuit& circuit) {
  std::unordered_map<std::string, bool> seen;
  std::vector<std::string> out;
  auto add = [&](const std::string& text) {
    if (seen.emplace(text, true).second) out.push_back(text);
  };
  add(std::string(circuit.n, 'I'));
  for (int l = 0; l < circuit.depth(); ++l) {
    for (const auto& g : circuit.noise.layers[l].generators) {
      if (g.rate <= 0.0) continue;
      PauliString p(circuit.n);
      p.set_letter(g.q1, g.axis1);
      if (g.two_qubit()) p.set_letter(g.q2, g.axis2);
      int sign = 1;
      for (int ll = l; ll < circuit.depth(); ++ll)
        conjugate_forward(circuit.unitaries[ll], p, sign);
      add(p.text());
    }
  }
  return out;
}

// Numerical rank of the bipartite prefix/suffix incidence matrix via a seeded
// Gaussian column sketch followed by Gram-matrix eigen-decomposition at
// relative tolerance 1e-10; the sketch width doubles until the rank is
// resolved, so the result is exact with probability one and deterministic.
int pattern_link_rank(const std::vector<std::string>& patterns, int link) {
  std::unordered_map<std::string, int> rows, cols;
  std::vector<std::pair<int, int>> entries;
  for (const auto& text : patterns) {
    int r = rows.emplace(text.substr(0, link), static_cast<int>(rows.size())).first->second;
    int c = cols.emplace(text.substr(link), static_cast<int>(cols.size())).first->second;
    entries.emplace_back(r, c);
  }
  const int p = static_cast<int>(rows.size());
  const int s = static_cast<int>(cols.size());
  const int kmax = std::min(p, s);
  Rng base(0x7e57c0de);
  int k = std::min(kmax, 256);
  while (true) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, k);
    for (auto [r, c] : entries)
      for (int j = 0; j < k; ++j)
        b(r, j) += base.derive(static_cast<uint64_t>(c), static_cast<uint64_t>(j)).next_normal();
    Eigen::MatrixXd gram = b.transpose() * b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    double lmax = eig.eigenvalues().maxCoeff();
    int rank = 0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
      if (eig.eigenvalues()(i) > 1e-10 * lmax) ++rank;
    if (rank < k || k == kmax) return rank;
    k = std::min(kmax, 2 * k);
  }
}

}  // namespace

int threshold_link_rank(const NoisyCircuit& circuit, int link) {
  if (link < 1 || link >= circuit.n)
    throw std::invalid_argument("threshold_link_rank: link out of range");
  return pattern_link_rank(first_order_patterns(circuit), link);
}

int threshold_bond_dimension(const NoisyCircuit& circuit) {
  if (circuit.depth() < 1) throw std::invalid_argument("threshold_bond_dimension: empty circuit");
  auto patterns = first_order_patterns(circuit);
  int best = 1;
  for (int link = 1; link < circuit.n; ++link)
    best = std::max(best, pattern_link_rank(patterns, link));
  return best;
}

double below_threshold_error(int n, int L, double epsilon, double chi) {
  if (chi < 1) throw std::invalid_argument("below_threshold_error: chi must be >= 1");
  double above = n * L * epsilon * epsilon / 30.0;
  double chi_star = 0.5 * L * L;
  if (chi >= chi_star) return above;
  double tail = (epsilon * epsilon * L * L / (72.0 * std::log(4.0 * std::sqrt(2.0 * n)))) *
                (n * std::pow(1.0 / (32.0 * n), 2.0 * chi / (L * L)) - 1.0 / 32.0);
  return std::sqrt(above * above + tail);
}

}  // namespace qemscope
