#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "supercoherence/encoded_logic.hpp"
#include "supercoherence/open_system.hpp"

using namespace supercoherence;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const HalfInt J0 = HalfInt::from_int(0);
const HalfInt J1 = HalfInt::from_int(1);
const HalfInt J2 = HalfInt::from_int(2);

Matrix logical_rho(cplx a, cplx b) {
  const Vector v = encode(a, b).physical;
  return v * v.adjoint();
}

// Leakage rate of a J_4 = 0 state at first order with uniform coupling g:
// sum over 12 channels of g^2 n(beta Delta) <s P_1 s> = 3 g^2 / (exp(beta Delta) - 1),
// using <s_a^2> = 1/4 and P_0 s P_0 = P_2 s P_0 = 0.
double analytic_rate(double g, double beta, double delta) {
  return 3.0 * g * g / (std::exp(beta * delta) - 1.0);
}

Matrix random_density(int seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Matrix a(16, 16);
  for (Eigen::Index r = 0; r < 16; ++r)
    for (Eigen::Index c = 0; c < 16; ++c) a(r, c) = cplx(dist(rng), dist(rng));
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST(Sectors, FourQubitRanksAndAlgebra) {
  const auto proj = sector_projectors(4);
  ASSERT_EQ(proj.sectors.size(), 3u);
  EXPECT_EQ(proj.sectors[0].rank, 2);
  EXPECT_EQ(proj.sectors[1].rank, 9);
  EXPECT_EQ(proj.sectors[2].rank, 5);
  Matrix sum = Matrix::Zero(16, 16);
  for (const auto& a : proj.sectors) {
    const Matrix& p = a.projector.matrix();
    EXPECT_LT(max_abs_diff(p * p, p), 1e-12);
    EXPECT_NEAR(p.trace().real(), a.rank, 1e-12);
    for (const auto& b : proj.sectors)
      if (a.j != b.j) EXPECT_LT(max_abs(p * b.projector.matrix()), 1e-12);
    sum += p;
  }
  EXPECT_LT(max_abs_diff(sum, Matrix::Identity(16, 16)), 1e-12);
  EXPECT_THROW(proj.projector(HalfInt::from_int(3)), std::out_of_range);
}

TEST(Sectors, OtherSizes) {
  for (int n = 1; n <= 6; ++n) {
    const auto proj = sector_projectors(n);
    int total = 0;
    for (const auto& s : proj.sectors) {
      EXPECT_EQ(s.rank, oracle::irrep_multiplicity(n, s.j.twice()) * (s.j.twice() + 1));
      total += s.rank;
    }
    EXPECT_EQ(total, 1 << n);
  }
}

TEST(Transitions, ReconstructAndForbiddenBlocks) {
  for (int i = 1; i <= 4; ++i)
    for (Axis a : kAllAxes) {
      const auto blocks = transition_decomposition(i, a);
      ASSERT_EQ(blocks.size(), 9u);
      Matrix sum = Matrix::Zero(16, 16);
      for (const auto& t : blocks) {
        sum += t.matrix.matrix();
        const int dj = std::abs(t.to_j.twice() - t.from_j.twice());
        const bool forbidden = dj > 2 || (t.from_j == J0 && t.to_j == J0);
        if (forbidden) {
          EXPECT_LT(max_abs(t.matrix.matrix()), 1e-12)
              << t.from_j.to_string() << "->" << t.to_j.to_string();
        }
      }
      EXPECT_LT(max_abs_diff(sum, single_spin_operator(a, i, 4).matrix()), 1e-12);
    }
  EXPECT_THROW(transition_decomposition(1, Axis::x, 3), std::invalid_argument);
}

TEST(Transitions, AllowedSetNonzero) {
  // every pair in the allowed set occurs for some operator
  const auto blocks = transition_decomposition(1, Axis::x);
  for (const auto& [m, n] : allowed_transitions()) {
    double biggest = 0.0;
    for (const auto& t : blocks)
      if (t.from_j == HalfInt::from_int(m) && t.to_j == HalfInt::from_int(n))
        biggest = std::max(biggest, max_abs(t.matrix.matrix()));
    EXPECT_GT(biggest, 1e-3) << m << "," << n;
  }
}

TEST(Thermal, Occupation) {
  EXPECT_NEAR(thermal_occupation(std::log(2.0), 1.0), 1.0, 1e-14);
  EXPECT_NEAR(thermal_occupation(1.0, 1.0), 0.58197670686932642, 1e-12);
  EXPECT_NEAR(thermal_occupation(1.0, 1.0), 1.0 / (std::exp(1.0) - 1.0), 1e-14);
  EXPECT_LT(thermal_occupation(800.0, 1.0), 1e-300);
  EXPECT_EQ(thermal_occupation(kInf, 1.0), 0.0);
  EXPECT_THROW(thermal_occupation(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(thermal_occupation(0.0, 1.0), std::invalid_argument);
}

TEST(Model, GapsRatesAndDetailedBalance) {
  const double delta = 1.0, beta = 2.0, g = 0.2;
  const auto model = build_model(SystemSpec{4, delta}, beta, uniform_couplings(g));
  EXPECT_EQ(model.jumps.size(), 72u);
  EXPECT_DOUBLE_EQ(transition_gap(delta, 0, 1), delta);
  EXPECT_DOUBLE_EQ(transition_gap(delta, 1, 2), 2.0 * delta);

  for (const auto& jump : model.jumps) {
    EXPECT_GE(jump.rate, 0.0);
    if (jump.kind == JumpKind::zero_frequency) {
      EXPECT_DOUBLE_EQ(jump.rate, g * g);
      continue;
    }
    const int lo = std::min(jump.op.from_j.twice(), jump.op.to_j.twice()) / 2;
    const int hi = std::max(jump.op.from_j.twice(), jump.op.to_j.twice()) / 2;
    const double gap = transition_gap(delta, lo, hi);
    const double n = 1.0 / std::expm1(beta * gap);
    if (jump.kind == JumpKind::absorption) {
      EXPECT_NEAR(jump.rate, g * g * n, 1e-15);
      EXPECT_LT(jump.op.from_j, jump.op.to_j);
    } else {
      EXPECT_NEAR(jump.rate, g * g * (n + 1.0), 1e-15);
      EXPECT_GT(jump.op.from_j, jump.op.to_j);
    }
  }
  // pair up absorption/emission on the same channel and check exp(beta dE)
  for (std::size_t k = 0; k + 1 < model.jumps.size(); ++k) {
    const auto& up = model.jumps[k];
    const auto& down = model.jumps[k + 1];
    if (up.kind != JumpKind::absorption) continue;
    ASSERT_EQ(down.kind, JumpKind::emission);
    EXPECT_NEAR(down.rate / up.rate, std::exp(beta * up.energy), 1e-12 * std::exp(beta * up.energy));
  }
}

TEST(Model, LowTemperatureAndValidation) {
  const auto cold = build_model(SystemSpec{4, 1.0}, kInf, uniform_couplings(0.1), 0.0);
  for (const auto& jump : cold.jumps) {
    if (jump.kind != JumpKind::emission) EXPECT_EQ(jump.rate, 0.0);
  }
  EXPECT_THROW(build_model(SystemSpec{4, 1.0}, 0.0, uniform_couplings(0.1)), std::invalid_argument);
  EXPECT_THROW(build_model(SystemSpec{4, 1.0}, 1.0, uniform_couplings(-0.1)), std::invalid_argument);
  EXPECT_THROW(build_model(SystemSpec{3, 1.0}, 1.0, uniform_couplings(0.1)), std::invalid_argument);
  EXPECT_THROW(build_model(SystemSpec{4, 1.0}, 1.0, uniform_couplings(0.1), -1.0),
               std::invalid_argument);
}

TEST(Generator, VectorizedMatchesMatrixForm) {
  const auto model = build_model(SystemSpec{4, 1.0}, 1.5, uniform_couplings(0.3), 0.05);
  const Matrix l = liouvillian(model);
  const Matrix rho = random_density(7);
  const Vector v = l * Eigen::Map<const Vector>(rho.data(), rho.size());
  const Matrix direct = apply_generator(model, rho);
  EXPECT_LT(max_abs_diff(Eigen::Map<const Matrix>(v.data(), 16, 16), direct), 1e-12);
  // trace preserving: d/dt tr(rho) = 0
  EXPECT_LT(std::abs(direct.trace()), 1e-12);
}

TEST(Generator, GroundBlockFixedPointAtZeroTemperature) {
  const auto model = build_model(SystemSpec{4, 1.0}, kInf, uniform_couplings(0.2), 0.0);
  for (const auto& rho : {logical_rho(1.0, 0.0), logical_rho(cplx(0.6, 0.0), cplx(0.0, 0.8))}) {
    EXPECT_LT(max_abs(apply_generator(model, rho)), 1e-12);
  }
}

TEST(Generator, DiagonalJumpsDoNotTouchGroundBlock) {
  auto model = build_model(SystemSpec{4, 1.0}, 1.0, uniform_couplings(0.3), 0.7);
  std::erase_if(model.jumps, [](const JumpTerm& j) { return j.kind != JumpKind::zero_frequency; });
  ASSERT_EQ(model.jumps.size(), 24u);
  const Matrix rho = logical_rho(cplx(0.6, 0.0), cplx(0.0, 0.8));
  EXPECT_LT(max_abs(apply_generator(model, rho)), 1e-12);
}

TEST(Evolve, ZeroTemperatureLogicalStateIsStatic) {
  const auto model = build_model(SystemSpec{4, 1.0}, kInf, uniform_couplings(0.2), 0.0);
  const Matrix rho0 = logical_rho(1.0 / std::sqrt(2.0), cplx(0.0, 1.0 / std::sqrt(2.0)));
  const auto traj = evolve(model, rho0, 5.0, 0.01, 50);
  for (const auto& rho : traj.states) EXPECT_LT(max_abs_diff(rho, rho0), 1e-12);
  for (double l : traj.leakage) EXPECT_LT(std::abs(l), 1e-12);
}

TEST(Evolve, TrajectoryInvariants) {
  const auto model = build_model(SystemSpec{4, 1.0}, 0.8, uniform_couplings(0.4));
  const auto traj = evolve(model, random_density(3), 3.0, default_time_step(model), 10);
  EXPECT_LT(traj.worst_trace_error(), 1e-8);
  EXPECT_LT(traj.worst_hermiticity(), 1e-10);
  EXPECT_GT(traj.min_eigenvalue(), -1e-8);
  EXPECT_NEAR(traj.times.back(), 3.0, 1e-12);
  EXPECT_EQ(traj.states.size(), traj.leakage.size());
}

TEST(Evolve, LeakageSlopeMatchesFirstOrderOracle) {
  const double g = 0.1, beta = 2.0;
  const auto model = build_model(SystemSpec{4, 1.0}, beta, uniform_couplings(g));
  const Matrix rho0 = logical_rho(cplx(0.6, 0.0), cplx(0.8, 0.0));
  const double expected = analytic_rate(g, beta, 1.0);
  EXPECT_NEAR(first_order_leakage_rate(model, rho0), expected, 1e-14);

  const double t = 0.05;
  const auto traj = evolve(model, rho0, t, 0.005);
  EXPECT_NEAR(traj.leakage.back() / t, expected, 1e-3 * expected);
  // the decoded logical state keeps its coherence to first order
  EXPECT_GT(traj.initial_overlap.back(), 1.0 - 2.0 * expected * t);
}

TEST(Evolve, RejectsBadInputsAndUnstableSteps) {
  const auto model = build_model(SystemSpec{4, 1.0}, 1.0, uniform_couplings(0.1));
  Matrix not_density = Matrix::Identity(16, 16);
  EXPECT_THROW(evolve(model, not_density, 1.0, 0.01), std::invalid_argument);
  EXPECT_THROW(evolve(model, logical_rho(1.0, 0.0), 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(evolve(model, random_density(1), 200.0, 5.0), IntegrationError);
}

TEST(Leakage, MatchesAnalyticRate) {
  const double g = 0.1;
  const Matrix rho0 = logical_rho(1.0, 0.0);
  for (double beta : {1.0, 2.0, 4.0, 6.0}) {
    const auto model = build_model(SystemSpec{4, 1.0}, beta, uniform_couplings(g));
    const auto fit = leakage_rate(model, rho0);
    EXPECT_NEAR(fit.rate, analytic_rate(g, beta, 1.0), 0.01 * analytic_rate(g, beta, 1.0))
        << "beta=" << beta;
    EXPECT_GE(fit.samples, 16u);
  }
}

TEST(Leakage, RatioFollowsOccupation) {
  const auto rate = [](double beta) {
    const auto model = build_model(SystemSpec{4, 1.0}, beta, uniform_couplings(0.1));
    return leakage_rate(model, logical_rho(1.0, 0.0)).rate;
  };
  const double ratio = rate(4.0) / rate(2.0);
  const double expected = thermal_occupation(4.0, 1.0) / thermal_occupation(2.0, 1.0);
  EXPECT_NEAR(ratio / expected, 1.0, 0.05);
}

TEST(Leakage, CouplingScaling) {
  const Matrix rho0 = logical_rho(1.0, 0.0);
  const auto zero = build_model(SystemSpec{4, 1.0}, 2.0, uniform_couplings(0.0));
  EXPECT_NEAR(leakage_rate(zero, rho0).rate, 0.0, 1e-12);

  // fixed window so both fits see the same times
  LeakageOptions opts;
  opts.window = 0.2;
  const double r1 = leakage_rate(build_model(SystemSpec{4, 1.0}, 2.0, uniform_couplings(0.1)), rho0, opts).rate;
  const double r2 = leakage_rate(build_model(SystemSpec{4, 1.0}, 2.0, uniform_couplings(0.2)), rho0, opts).rate;
  EXPECT_NEAR(r2 / r1, 4.0, 0.02);
}

TEST(Leakage, RequiresGroundState) {
  const auto model = build_model(SystemSpec{4, 1.0}, 2.0, uniform_couplings(0.1));
  EXPECT_THROW(leakage_rate(model, random_density(5)), std::invalid_argument);
}

TEST(Sweep, SlopeMonotoneAndDeterministic) {
  const Matrix rho0 = logical_rho(1.0, 0.0);
  const std::vector<double> betas{3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0};
  const auto rows = temperature_sweep(SystemSpec{4, 1.0}, uniform_couplings(0.1), std::nullopt, rho0, betas);
  ASSERT_EQ(rows.size(), betas.size());
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_LT(rows[k].gamma_fit, rows[k - 1].gamma_fit);
  EXPECT_NEAR(log_rate_slope(rows, 1.0, 3.0, 6.0), -1.0, 0.1);
  for (const auto& r : rows) EXPECT_NEAR(r.slope, -1.0, 0.1);

  const auto again = temperature_sweep(SystemSpec{4, 1.0}, uniform_couplings(0.1), std::nullopt, rho0,
                                       {4.0, 4.0});
  EXPECT_EQ(again[0].gamma_fit, again[1].gamma_fit);
  EXPECT_THROW(temperature_sweep(SystemSpec{4, 1.0}, uniform_couplings(0.1), std::nullopt, rho0, {}),
               std::invalid_argument);
}
