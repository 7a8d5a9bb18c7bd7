#pragma once

#include <cmath>

namespace tkl {

// Couplings and field of the triangulated Kagome Ising-Heisenberg model, k_B = 1.
// j_aa > 0 is the antiferromagnetic intra-trimer Heisenberg exchange, j_ab > 0 the
// ferromagnetic trimer-monomer Ising exchange.
struct ModelParams {
  double j_aa = 1.0;
  double j_ab = 0.025;
  double h = 0.0;

  // alpha = |J_ab / J_aa|, so the ferromagnetic-trimer case keeps J_ab > 0.
  static ModelParams from_ratio(double j_aa, double alpha, double h = 0.0) {
    return ModelParams{j_aa, alpha * std::abs(j_aa), h};
  }

  double alpha() const { return j_ab / std::abs(j_aa); }

  ModelParams with_field(double field) const {
    ModelParams p = *this;
    p.h = field;
    return p;
  }
};

// Variational parameters of the trial Hamiltonian.
struct EffectiveFields {
  double lambda_aa = 0.0;
  double gamma_a = 0.0;  // acts on trimer spins
  double gamma_b = 0.0;  // acts on monomer spins
};

}  // namespace tkl
