#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "tkl/log_domain.hpp"
#include "tkl/model.hpp"

namespace tkl {

// Three-site product basis |s1 s2 s3> indexed by 4*s1 + 2*s2 + s3, with |1> = spin up
// (S^z = +1/2) and |0> = spin down. Site 1 is the most significant bit.
inline constexpr int kTrimerDim = 8;

using TrimerMatrix = Eigen::Matrix<double, kTrimerDim, kTrimerDim>;
using TrimerComplexMatrix = Eigen::Matrix<std::complex<double>, kTrimerDim, kTrimerDim>;
using TrimerState = Eigen::Matrix<std::complex<double>, kTrimerDim, 1>;

// Energies E_1..E_8 of the trimer in effective field gamma_a, stored 0-based.
// E_2 == E_3 and E_5 == E_6 are the two chirality doublets.
struct TrimerSpectrum {
  std::array<double, kTrimerDim> energies{};
  std::array<double, kTrimerDim> total_sz{};
  std::array<std::complex<double>, kTrimerDim> shift_eigenvalue{};

  double ground_energy() const;
};

TrimerSpectrum trimer_energies(const EffectiveFields& fields);

// psi_1..psi_8, field independent. Each is an eigenstate of the cyclic shift
// P|s1 s2 s3> = |s3 s1 s2> with eigenvalue shift_eigenvalue[k].
const std::array<TrimerState, kTrimerDim>& trimer_eigenvectors();

// lambda (S1.S2 + S2.S3 + S1.S3) - gamma_a (S1z + S2z + S3z) with S = sigma/2.
TrimerMatrix build_trimer_hamiltonian(const EffectiveFields& fields);

struct PartitionFunction {
  double value = 0.0;  // +inf when the linear value overflows
  double log_value = 0.0;
};

PartitionFunction trimer_partition(const EffectiveFields& fields, double t);
double trimer_free_energy(const EffectiveFields& fields, double t);

PartitionFunction monomer_partition(double gamma_b, double t);
double monomer_free_energy(double gamma_b, double t);

struct TrimerDensityMatrix {
  TrimerComplexMatrix entries;
};

// Gibbs state of the trimer, weights shifted by the ground energy before exponentiation.
TrimerDensityMatrix thermal_density_matrix(const EffectiveFields& fields, double t);

// Normalised Boltzmann weights exp(-(E_k - E_min)/T) / sum, in spectrum order.
std::array<double, kTrimerDim> boltzmann_weights(const TrimerSpectrum& spectrum, double t);

}  // namespace tkl
