#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracle.hpp"
#include "tkl/entanglement.hpp"
#include "tkl/errors.hpp"
#include "tkl/phase.hpp"
#include "tkl/trimer.hpp"

using tkl::EffectiveFields;
using tkl::ModelParams;
using tkl::PairMatrix;

namespace {

PairMatrix random_x_state_matrix(std::mt19937_64& g, tkl::XState* out) {
  const double w = oracle::uniform(g, 0.0, 0.5);
  const double y = oracle::uniform(g, -w, w);
  const double r = oracle::uniform(g, 0.0, 1.0);
  const double u = r * (1.0 - 2.0 * w);
  const double v = (1.0 - r) * (1.0 - 2.0 * w);
  *out = tkl::XState::from_entries(u, w, v, y);
  return out->matrix();
}

}  // namespace

TEST_CASE("reduced density matrix equals the partial trace of the thermal state") {
  for (double lambda : {-2.0, -0.7, 0.0, 0.4, 1.0, 2.0}) {
    for (double gamma : {-2.0, -0.3, 0.0, 0.2, 1.0, 1.6}) {
      for (double t : {0.005, 0.05, 0.3, 1.0, 4.0}) {
        const oracle::Mat4 ref = oracle::trace_site3(oracle::thermal_state(lambda, gamma, t));
        const PairMatrix closed = tkl::reduced_density_matrix({lambda, gamma, 0.0}, t).matrix();
        CHECK((closed - ref).cwiseAbs().maxCoeff() < 1e-11);
      }
    }
  }
}

TEST_CASE("every pair of the trimer carries the same reduced state") {
  auto g = oracle::rng(61);
  for (int n = 0; n < 20; ++n) {
    const double lambda = oracle::uniform(g, -2.0, 2.0);
    const double gamma = oracle::uniform(g, -2.0, 2.0);
    const double t = oracle::uniform(g, 0.05, 2.0);
    const oracle::Mat8 rho = oracle::thermal_state(lambda, gamma, t);
    const oracle::Mat4 r12 = oracle::trace_site3(rho);
    CHECK((oracle::trace_site3(oracle::permute_sites(rho, 0, 2)) - r12).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((oracle::trace_site3(oracle::permute_sites(rho, 1, 2)) - r12).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("trace identity and positivity of the closed-form entries") {
  auto g = oracle::rng(67);
  for (int n = 0; n < 500; ++n) {
    const EffectiveFields f{oracle::uniform(g, -2.0, 2.0), oracle::uniform(g, -2.0, 2.0), 0.0};
    const double t = oracle::uniform(g, 0.05, 5.0);
    const tkl::XState x = tkl::reduced_density_matrix(f, t);
    const double raw = std::exp(x.log_u) + 2.0 * std::exp(x.log_w) + std::exp(x.log_v);
    CHECK(std::abs(raw - x.z_norm) < 1e-12 * x.z_norm);
    CHECK(x.z_norm == doctest::Approx(tkl::trimer_partition(f, t).value).epsilon(1e-14));
    CHECK(std::abs(x.u + 2.0 * x.w + x.v - 1.0) < 1e-12);
    CHECK(x.u >= 0.0);
    CHECK(x.v >= 0.0);
    CHECK(x.w >= std::abs(x.y) - 1e-12);
    // the cancellation-free coherence agrees with the direct difference where the latter is accurate
    CHECK(std::abs(x.coherence - (std::abs(x.y) - std::sqrt(x.u * x.v))) < 1e-12);
  }
  // at lambda = gamma = 0 the unnormalised entries are 2, 2, 2 and Z = 8
  const tkl::XState free = tkl::reduced_density_matrix({0.0, 0.0, 0.0}, 1.0);
  CHECK(std::exp(free.log_u) == doctest::Approx(2.0));
  CHECK(std::exp(free.log_w) == doctest::Approx(2.0));
  CHECK(std::exp(free.log_v) == doctest::Approx(2.0));
  CHECK(free.z_norm == doctest::Approx(8.0));
}

TEST_CASE("closed-form examples") {
  for (double gamma : {-1.0, 0.0, 0.7}) {
    const tkl::XState x = tkl::reduced_density_matrix({0.0, gamma, 0.0}, 0.2);
    CHECK(x.y == 0.0);
    CHECK(tkl::concurrence_xstate(x).value == 0.0);
  }
  const PairMatrix mixed = tkl::reduced_density_matrix({0.0, 0.0, 0.0}, 0.37).matrix();
  CHECK((mixed - PairMatrix::Identity() / 4.0).cwiseAbs().maxCoeff() < 1e-15);

  // ground doublet psi_5 / psi_6: C = 1/3
  const auto c = tkl::concurrence_xstate(tkl::reduced_density_matrix({1.0, 0.05, 0.0}, 0.001));
  CHECK(std::abs(c.value - 1.0 / 3.0) < 1e-6);
  CHECK(c.route == tkl::ConcurrenceRoute::closed_form);
  CHECK(c.lambda_aa == 1.0);
  CHECK(c.gamma_a == 0.05);

  const tkl::XState x = tkl::reduced_density_matrix({1.0, 0.2, 0.0}, 0.05);
  CHECK(std::abs(tkl::concurrence_xstate(x).value - tkl::concurrence_wootters(x.matrix()).value) < 1e-12);
}

TEST_CASE("closed form agrees with the Wootters eigenvalue route") {
  auto g = oracle::rng(71);
  for (int n = 0; n < 100; ++n) {
    tkl::XState x;
    const PairMatrix rho = random_x_state_matrix(g, &x);
    const auto closed = tkl::concurrence_xstate(x);
    const auto wootters = tkl::concurrence_wootters(rho);
    CHECK(std::abs(closed.value - wootters.value) < 1e-10);
    CHECK(wootters.route == tkl::ConcurrenceRoute::wootters_oracle);

    // a phase on the coherence does not change the entanglement
    PairMatrix phased = rho;
    const std::complex<double> phase = std::polar(1.0, oracle::uniform(g, 0.0, 6.28));
    phased(1, 2) *= phase;
    phased(2, 1) *= std::conj(phase);
    CHECK(std::abs(tkl::concurrence_wootters(phased).value - closed.value) < 1e-10);
  }
  // thermal trimer states across the grid
  for (double lambda : {-1.0, 0.5, 1.0, 2.0}) {
    for (double gamma : {0.0, 0.3, 1.4, 2.5}) {
      for (double t : {0.01, 0.1, 1.0}) {
        const tkl::XState x = tkl::reduced_density_matrix({lambda, gamma, 0.0}, t);
        CHECK(std::abs(tkl::concurrence_xstate(x).value - tkl::concurrence_wootters(x.matrix()).value) < 1e-10);
      }
    }
  }
}

TEST_CASE("Wootters reference states") {
  CHECK(tkl::concurrence_wootters(PairMatrix::Identity() / 4.0).value == doctest::Approx(0.0));

  Eigen::Vector4cd bell = Eigen::Vector4cd::Zero();
  bell(1) = bell(2) = 1.0 / std::sqrt(2.0);
  CHECK(tkl::concurrence_wootters(bell * bell.adjoint()).value == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::Vector4cd product = Eigen::Vector4cd::Zero();
  product(1) = 1.0;
  CHECK(tkl::concurrence_wootters(product * product.adjoint()).value == doctest::Approx(0.0));
}

TEST_CASE("Wootters rejects non-states") {
  PairMatrix rho = PairMatrix::Identity() / 4.0;
  rho(0, 1) = 0.1;
  CHECK_THROWS_AS(tkl::concurrence_wootters(rho), tkl::InvalidDensityMatrix);
  CHECK_THROWS_AS(tkl::concurrence_wootters(PairMatrix::Identity() / 2.0), tkl::InvalidDensityMatrix);
  PairMatrix negative = PairMatrix::Zero();
  negative(0, 0) = 1.2;
  negative(3, 3) = -0.2;
  CHECK_THROWS_AS(tkl::concurrence_wootters(negative), tkl::InvalidDensityMatrix);
}

TEST_CASE("equilibrium concurrence examples") {
  const ModelParams p{1.0, 0.025, 0.0};
  CHECK(tkl::concurrence_at(p, 0.005).value > 0.1);
  CHECK(tkl::concurrence_at(p, 0.02).value == 0.0);
  for (double h : {-2.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
    CHECK(tkl::concurrence_at(ModelParams{-1.0, 0.025, h}, 0.1).value == 0.0);
  }
  const auto c = tkl::concurrence_at(p.with_field(0.4), 0.1);
  CHECK(c.h == 0.4);
  CHECK(c.t == 0.1);
}

TEST_CASE("concurrence is even in the field") {
  auto g = oracle::rng(73);
  for (int n = 0; n < 30; ++n) {
    const double h = oracle::uniform(g, 0.0, 2.5);
    const double t = oracle::uniform(g, 0.01, 0.8);
    const ModelParams p{1.0, 0.025, h};
    CHECK(tkl::concurrence_at(p, t).value ==
          doctest::Approx(tkl::concurrence_at(p.with_field(-h), t).value).epsilon(1e-9));
  }
}

TEST_CASE("zero-field concurrence vanishes exactly at Tc") {
  const ModelParams p{1.0, 0.025, 0.0};
  const double tc = tkl::critical_temperature_linearized(1.0, 0.025).tc;
  for (double r = 0.1; r < 0.995; r += 0.05) CHECK(tkl::concurrence_at(p, r * tc).value > 0.0);
  for (double r : {1.0001, 1.01, 1.5, 3.0, 30.0}) CHECK(tkl::concurrence_at(p, r * tc).value == 0.0);
  // monotone decrease on the approach
  double previous = 1.0;
  for (double r = 0.1; r < 0.995; r += 0.05) {
    const double c = tkl::concurrence_at(p, r * tc).value;
    CHECK(c <= previous + 1e-12);
    previous = c;
  }
}
