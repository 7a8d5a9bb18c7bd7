#include "tkl/trimer.hpp"

#include <algorithm>
#include <cmath>

#include "tkl/errors.hpp"

namespace tkl {

namespace {

using cd = std::complex<double>;

const cd kQ = std::polar(1.0, 2.0 * M_PI / 3.0);

// basis indices for |s1 s2 s3>
constexpr int idx(int s1, int s2, int s3) { return 4 * s1 + 2 * s2 + s3; }

std::array<TrimerState, kTrimerDim> make_eigenvectors() {
  const double r = 1.0 / std::sqrt(3.0);
  const cd q = kQ;
  const cd q2 = kQ * kQ;
  std::array<TrimerState, kTrimerDim> psi;
  for (auto& v : psi) v.setZero();

  psi[0](idx(0, 0, 0)) = 1.0;

  psi[1](idx(0, 0, 1)) = r * q;
  psi[1](idx(0, 1, 0)) = r * q2;
  psi[1](idx(1, 0, 0)) = r;

  psi[2](idx(0, 0, 1)) = r * q2;
  psi[2](idx(0, 1, 0)) = r * q;
  psi[2](idx(1, 0, 0)) = r;

  psi[3](idx(0, 0, 1)) = r;
  psi[3](idx(0, 1, 0)) = r;
  psi[3](idx(1, 0, 0)) = r;

  psi[4](idx(1, 1, 0)) = r * q;
  psi[4](idx(1, 0, 1)) = r * q2;
  psi[4](idx(0, 1, 1)) = r;

  psi[5](idx(1, 1, 0)) = r * q2;
  psi[5](idx(1, 0, 1)) = r * q;
  psi[5](idx(0, 1, 1)) = r;

  psi[6](idx(1, 1, 0)) = r;
  psi[6](idx(1, 0, 1)) = r;
  psi[6](idx(0, 1, 1)) = r;

  psi[7](idx(1, 1, 1)) = 1.0;
  return psi;
}

double sz_of(int bit) { return bit ? 0.5 : -0.5; }

}  // namespace

double TrimerSpectrum::ground_energy() const {
  return *std::min_element(energies.begin(), energies.end());
}

TrimerSpectrum trimer_energies(const EffectiveFields& fields) {
  const double l = fields.lambda_aa;
  const double g = fields.gamma_a;
  TrimerSpectrum s;
  s.energies = {0.75 * (l + 2.0 * g),
                0.25 * (-3.0 * l + 2.0 * g),
                0.25 * (-3.0 * l + 2.0 * g),
                0.25 * (3.0 * l + 2.0 * g),
                0.25 * (-3.0 * l - 2.0 * g),
                0.25 * (-3.0 * l - 2.0 * g),
                0.25 * (3.0 * l - 2.0 * g),
                0.75 * (l - 2.0 * g)};
  s.total_sz = {-1.5, -0.5, -0.5, -0.5, 0.5, 0.5, 0.5, 1.5};
  const cd one{1.0, 0.0};
  s.shift_eigenvalue = {one, kQ, kQ * kQ, one, kQ, kQ * kQ, one, one};
  return s;
}

const std::array<TrimerState, kTrimerDim>& trimer_eigenvectors() {
  static const std::array<TrimerState, kTrimerDim> psi = make_eigenvectors();
  return psi;
}

TrimerMatrix build_trimer_hamiltonian(const EffectiveFields& fields) {
  TrimerMatrix h = TrimerMatrix::Zero();
  constexpr std::array<std::array<int, 2>, 3> bonds{{{0, 1}, {1, 2}, {0, 2}}};
  for (int b = 0; b < kTrimerDim; ++b) {
    // bit for site i (0-based, site 0 is the MSB)
    auto bit = [b](int i) { return (b >> (2 - i)) & 1; };
    double diag = 0.0;
    for (int i = 0; i < 3; ++i) diag -= fields.gamma_a * sz_of(bit(i));
    for (const auto& [i, j] : bonds) {
      diag += fields.lambda_aa * sz_of(bit(i)) * sz_of(bit(j));
      // S+S- + S-S+ flips an antiparallel pair with amplitude 1/2
      if (bit(i) != bit(j)) {
        const int flipped = b ^ (1 << (2 - i)) ^ (1 << (2 - j));
        h(flipped, b) += 0.5 * fields.lambda_aa;
      }
    }
    h(b, b) += diag;
  }
  return h;
}

PartitionFunction trimer_partition(const EffectiveFields& fields, double t) {
  require_positive_temperature(t);
  const double x = fields.gamma_a / (2.0 * t);
  const double big = 1.5 * fields.lambda_aa / t;
  const double shift = -0.75 * fields.lambda_aa / t;
  // Tr e^{-H/T} = 2 e^{-3l/4T} [cosh 3x + 2 e^{3l/2T} cosh x + cosh x]
  const double log_z = shift + log_sum_exp({{1.0, 3.0 * x},
                                            {1.0, -3.0 * x},
                                            {2.0, big + x},
                                            {2.0, big - x},
                                            {1.0, x},
                                            {1.0, -x}});
  return {std::exp(log_z), log_z};
}

double trimer_free_energy(const EffectiveFields& fields, double t) {
  return -t * trimer_partition(fields, t).log_value;
}

PartitionFunction monomer_partition(double gamma_b, double t) {
  require_positive_temperature(t);
  const double log_z = log_two_cosh(gamma_b / (2.0 * t));
  return {std::exp(log_z), log_z};
}

double monomer_free_energy(double gamma_b, double t) {
  return -t * monomer_partition(gamma_b, t).log_value;
}

std::array<double, kTrimerDim> boltzmann_weights(const TrimerSpectrum& spectrum, double t) {
  require_positive_temperature(t);
  const double e0 = spectrum.ground_energy();
  std::array<double, kTrimerDim> w{};
  double sum = 0.0;
  for (int k = 0; k < kTrimerDim; ++k) {
    w[k] = std::exp(-(spectrum.energies[k] - e0) / t);
    sum += w[k];
  }
  for (auto& x : w) x /= sum;
  return w;
}

TrimerDensityMatrix thermal_density_matrix(const EffectiveFields& fields, double t) {
  const auto w = boltzmann_weights(trimer_energies(fields), t);
  const auto& psi = trimer_eigenvectors();
  TrimerDensityMatrix rho;
  rho.entries.setZero();
  for (int k = 0; k < kTrimerDim; ++k) {
    rho.entries += w[k] * (psi[k] * psi[k].adjoint());
  }
  return rho;
}

}  // namespace tkl
