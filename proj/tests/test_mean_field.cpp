#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracle.hpp"
#include "tkl/errors.hpp"
#include "tkl/mean_field.hpp"
#include "tkl/phase.hpp"
#include "tkl/trimer.hpp"

using tkl::EffectiveFields;
using tkl::ModelParams;

namespace {

// <S_1^z> of the trimer from the brute-force thermal state.
double trace_m_a(double lambda, double gamma, double t) {
  const oracle::Mat8 rho = oracle::thermal_state(lambda, gamma, t);
  return (rho * oracle::site(oracle::sz(), 0)).trace().real();
}

// f_0 + <H_c - H_c0>_0 per cluster, divided by the 9/2 sites of a cluster. The trimer
// free energy comes from diagonalizing the trial Hamiltonian; the correction keeps
// every term separately: 6 a-b bonds, Zeeman on 3 a and 3/2 b spins, minus the
// trial-field terms.
double assembled_free_energy(double m_a, double m_b, const ModelParams& p, double t) {
  const double gamma_a = 2.0 * p.j_ab * m_b + p.h;
  const double gamma_b = 4.0 * p.j_ab * m_a + p.h;
  Eigen::SelfAdjointEigenSolver<oracle::Mat8> es(oracle::hamiltonian(p.j_aa, gamma_a), Eigen::EigenvaluesOnly);
  const double e0 = es.eigenvalues()(0);
  double shifted = 0.0;
  for (int k = 0; k < 8; ++k) shifted += std::exp(-(es.eigenvalues()(k) - e0) / t);
  const double f_trimer = e0 - t * std::log(shifted);
  const double f_monomer = -t * std::log(2.0 * std::cosh(gamma_b / (2.0 * t)));

  const double bonds = -6.0 * p.j_ab * m_a * m_b;
  const double zeeman = -p.h * (3.0 * m_a + 1.5 * m_b);
  const double trial = gamma_a * 3.0 * m_a + gamma_b * 1.5 * m_b;
  return (f_trimer + 1.5 * f_monomer + bonds + zeeman + trial) / 4.5;
}

}  // namespace

TEST_CASE("effective fields") {
  const ModelParams p{1.0, 0.025, 0.0};
  const auto zero = tkl::effective_fields(0.0, 0.0, p);
  CHECK(zero.lambda_aa == 1.0);
  CHECK(zero.gamma_a == 0.0);
  CHECK(zero.gamma_b == 0.0);
  CHECK(tkl::effective_fields(0.0, 0.5, p.with_field(1.0)).gamma_a == doctest::Approx(1.025));
  CHECK(tkl::effective_fields(1.0 / 6.0, 0.0, p).gamma_b == doctest::Approx(1.0 / 60.0));
}

TEST_CASE("a-site map against the thermal trace") {
  CHECK(tkl::map_m_a({1.0, 0.0, 0.0}, 0.3) == 0.0);
  CHECK(tkl::map_m_a({-2.0, 0.0, 0.0}, 1e-3) == 0.0);
  // the psi_2/psi_3 doublet sits only 10 T above the ground doublet here, so the
  // thermal value is 1/6 - O(e^{-10})
  CHECK(tkl::map_m_a({1.0, 0.05, 0.0}, 0.005) == doctest::Approx(trace_m_a(1.0, 0.05, 0.005)).epsilon(1e-10));
  CHECK(std::abs(tkl::map_m_a({1.0, 0.05, 0.0}, 0.005) - 1.0 / 6.0) < 2e-5);
  CHECK(std::abs(tkl::map_m_a({1.0, 0.05, 0.0}, 0.002) - 1.0 / 6.0) < 1e-6);
  CHECK(std::abs(tkl::map_m_a({1.0, 2.0, 0.0}, 0.005) - 0.5) < 1e-6);

  auto g = oracle::rng(17);
  for (int n = 0; n < 100; ++n) {
    const double lambda = oracle::uniform(g, -2.0, 2.0);
    const double gamma = oracle::uniform(g, -3.0, 3.0);
    const double t = oracle::uniform(g, 0.05, 3.0);
    CHECK(tkl::map_m_a({lambda, gamma, 0.0}, t) == doctest::Approx(trace_m_a(lambda, gamma, t)).epsilon(1e-10));
    // odd in the field
    CHECK(tkl::map_m_a({lambda, -gamma, 0.0}, t) == doctest::Approx(-tkl::map_m_a({lambda, gamma, 0.0}, t)));
  }
  // no overflow far below every energy scale
  for (double gamma : {-3.0, -1.0, 0.2, 1.49, 1.51, 3.0}) {
    const double m = tkl::map_m_a({2.0, gamma, 0.0}, 1e-5);
    CHECK(std::isfinite(m));
    CHECK(std::abs(m) <= 0.5);
  }
}

TEST_CASE("b-site map") {
  CHECK(tkl::map_m_b({1.0, 0.0, 0.0}, 0.1) == 0.0);
  CHECK(std::abs(tkl::map_m_b({1.0, 0.0, 1.0}, 0.001) - 0.5) < 1e-12);
  CHECK(tkl::map_m_b({1.0, 0.0, 0.0167}, 0.01) == doctest::Approx(0.5 * std::tanh(0.835)).epsilon(1e-12));
  CHECK(tkl::map_m_b({1.0, 0.0, 0.0167}, 0.01) == doctest::Approx(0.3412).epsilon(2e-3));
}

TEST_CASE("map slopes match finite differences") {
  auto g = oracle::rng(23);
  for (int n = 0; n < 30; ++n) {
    const EffectiveFields f{oracle::uniform(g, -2.0, 2.0), oracle::uniform(g, -2.0, 2.0),
                            oracle::uniform(g, -2.0, 2.0)};
    const double t = oracle::uniform(g, 0.1, 2.0);
    const double d = 1e-6;
    const double fd_a = (tkl::map_m_a({f.lambda_aa, f.gamma_a + d, 0.0}, t) -
                         tkl::map_m_a({f.lambda_aa, f.gamma_a - d, 0.0}, t)) / (2.0 * d);
    const double fd_b = (tkl::map_m_b({0.0, 0.0, f.gamma_b + d}, t) - tkl::map_m_b({0.0, 0.0, f.gamma_b - d}, t)) /
                        (2.0 * d);
    CHECK(tkl::map_m_a_slope(f, t) == doctest::Approx(fd_a).epsilon(1e-6));
    CHECK(tkl::map_m_b_slope(f, t) == doctest::Approx(fd_b).epsilon(1e-6));
  }
}

TEST_CASE("free energy equals the term-by-term variational assembly") {
  auto g = oracle::rng(31);
  for (int n = 0; n < 100; ++n) {
    const ModelParams p{oracle::uniform(g, -2.0, 2.0), oracle::uniform(g, 0.0, 0.5), oracle::uniform(g, -2.0, 2.0)};
    const double m_a = oracle::uniform(g, -0.5, 0.5);
    const double m_b = oracle::uniform(g, -0.5, 0.5);
    const double t = oracle::uniform(g, 0.05, 3.0);
    const double lib = tkl::free_energy_per_site(m_a, m_b, p, t);
    CHECK(std::abs(lib - assembled_free_energy(m_a, m_b, p, t)) < 1e-12 * std::max(1.0, std::abs(lib)));
  }
}

TEST_CASE("decoupled free energy and infinite-temperature entropy") {
  const ModelParams p{1.0, 0.0, 0.0};
  const double t = 1.0;
  const double ref = (tkl::trimer_free_energy({1.0, 0.0, 0.0}, t) + 1.5 * tkl::monomer_free_energy(0.0, t)) * 2.0 / 9.0;
  CHECK(tkl::free_energy_per_site(0.0, 0.0, p, t) == doctest::Approx(ref).epsilon(1e-14));
  CHECK(tkl::free_energy_per_site(0.0, 0.0, ModelParams{1.0, 0.025, 0.0}, t) == doctest::Approx(ref).epsilon(1e-14));
  // F / T -> -ln 2 per site
  CHECK(tkl::free_energy_per_site(0.0, 0.0, ModelParams{1.0, 0.025, 0.0}, 1e7) / 1e7 ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("solver examples") {
  const ModelParams p{1.0, 0.025, 0.0};

  const auto saturated = tkl::solve_self_consistent(p.with_field(2.0), 0.01);
  CHECK(tkl::converged_branch_count(saturated) == 1);
  CHECK(std::abs(saturated.front().m_a - 0.5) < 1e-6);

  const auto plateau = tkl::equilibrium_state(p.with_field(0.5), 0.01);
  CHECK(std::abs(plateau.m_a - 1.0 / 6.0) < 1e-3);

  // disordered above Tc: every seed lands on the origin
  const auto hot = tkl::solve_self_consistent(p, 0.02);
  REQUIRE(tkl::converged_branch_count(hot) == 1);
  CHECK(hot.front().m_a == 0.0);
  CHECK(hot.front().m_b == 0.0);
}

TEST_CASE("spontaneous order below Tc picks the positive member") {
  const ModelParams p{1.0, 0.025, 0.0};
  const auto states = tkl::solve_self_consistent(p, 0.008);
  CHECK(tkl::converged_branch_count(states) == 3);  // +m, -m and the unstable origin
  const auto eq = tkl::select_equilibrium(states);
  CHECK(eq.m_a > 0.01);
  CHECK(eq.m_b > 0.01);
  for (const auto& s : states) {
    if (s.converged && s.m_a < -0.01) {
      CHECK(s.free_energy_per_site == doctest::Approx(eq.free_energy_per_site).epsilon(1e-13));
    }
  }
}

TEST_CASE("selection rules") {
  tkl::SelfConsistentState a;
  a.converged = true;
  a.m_a = -0.1;
  a.free_energy_per_site = -1.0;
  tkl::SelfConsistentState b = a;
  b.m_a = 0.1;
  tkl::SelfConsistentState c = a;
  c.free_energy_per_site = -0.5;
  c.m_a = 0.3;

  const std::vector<tkl::SelfConsistentState> single{c};
  CHECK(tkl::select_equilibrium(single).m_a == 0.3);
  const std::vector<tkl::SelfConsistentState> tie{a, b, c};
  CHECK(tkl::select_equilibrium(tie).m_a == 0.1);

  tkl::SelfConsistentState failed = a;
  failed.converged = false;
  const std::vector<tkl::SelfConsistentState> none{failed};
  CHECK_THROWS_AS(tkl::select_equilibrium(none), tkl::NoConvergedBranch);
}

TEST_CASE("converged states are fixed points and respect the variational bound") {
  auto g = oracle::rng(41);
  const tkl::SolverConfig config;
  for (int n = 0; n < 60; ++n) {
    const ModelParams p{oracle::uniform(g, -2.0, 2.0), oracle::uniform(g, 0.0, 0.2), oracle::uniform(g, -2.5, 2.5)};
    const double t = oracle::uniform(g, 0.005, 1.0);
    const auto states = tkl::solve_self_consistent(p, t, config);
    for (const auto& s : states) {
      if (!s.converged) continue;
      CHECK(std::abs(s.m_a) <= 0.5 + 1e-12);
      CHECK(std::abs(s.m_b) <= 0.5 + 1e-12);
      CHECK(s.residual <= config.tolerance);
      CHECK(std::abs(s.m_a - tkl::map_m_a(s.fields, t)) < 10.0 * config.tolerance);
      CHECK(std::abs(s.m_b - tkl::map_m_b(s.fields, t)) < 10.0 * config.tolerance);
      const auto f = tkl::effective_fields(s.m_a, s.m_b, p);
      CHECK(f.gamma_a == s.fields.gamma_a);
      CHECK(f.gamma_b == s.fields.gamma_b);
    }
    const auto eq = tkl::select_equilibrium(states);
    CHECK(eq.free_energy_per_site <= tkl::free_energy_per_site(0.0, 0.0, p, t) + 1e-12);
  }
}

TEST_CASE("odd symmetry under field reversal") {
  auto g = oracle::rng(43);
  for (int n = 0; n < 30; ++n) {
    const ModelParams p{oracle::uniform(g, -2.0, 2.0), 0.025, oracle::uniform(g, 0.05, 2.5)};
    const double t = oracle::uniform(g, 0.01, 1.0);
    const auto up = tkl::equilibrium_state(p, t);
    const auto down = tkl::equilibrium_state(p.with_field(-p.h), t);
    CHECK(down.m_a == doctest::Approx(-up.m_a).epsilon(1e-10));
    CHECK(down.m_b == doctest::Approx(-up.m_b).epsilon(1e-10));
    CHECK(down.free_energy_per_site == doctest::Approx(up.free_energy_per_site).epsilon(1e-12));
  }
}

TEST_CASE("decoupled clusters") {
  auto g = oracle::rng(47);
  for (int n = 0; n < 30; ++n) {
    const ModelParams p{oracle::uniform(g, -2.0, 2.0), 0.0, oracle::uniform(g, -2.0, 2.0)};
    const double t = oracle::uniform(g, 0.02, 2.0);
    const double m_a = tkl::map_m_a({p.j_aa, p.h, 0.0}, t);
    const double m_b = 0.5 * std::tanh(p.h / (2.0 * t));
    const auto eq = tkl::equilibrium_state(p, t);
    CHECK(std::abs(eq.m_a - m_a) < 1e-12);
    CHECK(std::abs(eq.m_b - m_b) < 1e-12);

    tkl::SolverConfig exact;
    exact.seeds = {{m_a, m_b}};
    const auto s = tkl::iterate_from({m_a, m_b}, p, t, exact);
    CHECK(s.converged);
    CHECK(s.iterations <= 1);
  }
}

TEST_CASE("low-temperature field sweep rises monotonically through two plateaus") {
  const ModelParams p{1.0, 0.025, 0.0};
  std::vector<tkl::CurvePoint> curve;
  double previous = -1.0;
  for (int i = 0; i < 400; ++i) {
    const double h = 0.05 + i * (2.0 - 0.05) / 399.0;
    const double m = tkl::equilibrium_state(p.with_field(h), 0.01).m_a;
    CHECK(m >= previous - 1e-12);
    previous = m;
    curve.push_back({h, m});
  }
  const auto plateaus = tkl::detect_plateaus(curve, 1e-3);
  REQUIRE(plateaus.size() == 2);
  CHECK(plateaus[0].level == doctest::Approx(1.0 / 6.0));
  CHECK(plateaus[1].level == doctest::Approx(0.5));
}

TEST_CASE("solver configuration is validated") {
  const ModelParams p;
  tkl::SolverConfig bad;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(tkl::solve_self_consistent(p, 0.1, bad), std::invalid_argument);
  bad = {};
  bad.damping = 1.5;
  CHECK_THROWS_AS(tkl::solve_self_consistent(p, 0.1, bad), std::invalid_argument);
  bad = {};
  bad.seeds.clear();
  CHECK_THROWS_AS(tkl::solve_self_consistent(p, 0.1, bad), std::invalid_argument);
  CHECK_THROWS_AS(tkl::solve_self_consistent(p, 0.0), std::invalid_argument);
}

TEST_CASE("exhausted iterations are reported, not thrown") {
  tkl::SolverConfig tight;
  tight.max_iterations = 1;
  tight.seeds = {{0.3, -0.3}};
  const auto states = tkl::solve_self_consistent(ModelParams{1.0, 0.025, 0.3}, 0.05, tight);
  REQUIRE(states.size() == 1);
  CHECK_FALSE(states.front().converged);
  CHECK(states.front().residual > tight.tolerance);
  CHECK_THROWS_AS(tkl::select_equilibrium(states), tkl::NoConvergedBranch);
}
