#pragma once

#include <array>
#include <utility>
#include <vector>

#include "supercoherence/open_system.hpp"

namespace supercoherence {

using Matrix2 = Eigen::Matrix2cd;

/// The two J_4 = 0 states, paths (1/2,0,1/2,0) then (1/2,1,1/2,0).
std::array<LabeledState, 2> logical_basis();

/// 16 x 2 isometry whose columns are the logical basis vectors.
Matrix logical_isometry();

struct LogicalState {
  cplx a;
  cplx b;
  Vector physical;  // a |lambda=0> + b |lambda=1>
};

/// Throws std::invalid_argument unless |a|^2 + |b|^2 = 1 within 1e-10.
LogicalState encode(cplx a, cplx b);

struct DecodedState {
  Matrix2 logical;  // normalized J_4 = 0 block in the logical basis
  double leakage = 0.0;  // 1 - Tr(P_0 rho)
};

/// Throws std::invalid_argument for a non-density matrix or one with no
/// weight in the code space.
DecodedState decode(const Matrix& rho);

/// P_0 E_ij P_0 in the logical basis, 1 <= i < j <= 4.
Matrix2 projected_generator(int i, int j);

/// Real coefficients (c_x, c_y, c_z) of the traceless part of a Hermitian 2x2
/// matrix in the Pauli basis.
Eigen::Vector3d pauli_coefficients(const Matrix2& m);

/// Rank of the real span of the traceless parts of `generators`.
int real_algebra_rank(const std::vector<Matrix2>& generators, double tol = 1e-10);

struct FidelityValue {
  double value = 0.0;
  /// False when the inputs leave 0 < delta < Delta.
  bool in_regime = true;
};

/// delta * exp(beta * (Delta - delta)), proportionality constant 1.
FidelityValue gate_fidelity(double delta, double big_delta, double beta);

/// argmax of gate_fidelity over delta: 1 / beta.
double optimal_delta(double beta);

struct GridOptimum {
  double delta = 0.0;
  double fidelity = 0.0;
};

/// Maximizes gate_fidelity over the grid step, 2 step, ... < Delta.
GridOptimum grid_optimal_delta(double big_delta, double beta, double step);

struct ExchangeCoupling {
  int i = 1;
  int j = 2;
  double strength = 0.0;  // delta_ij
};

struct EncodedGateSpec {
  std::vector<ExchangeCoupling> couplings;
  double duration = 0.0;

  /// True when some |delta_ij| exceeds 0.1 * Delta.
  bool strength_warning(double big_delta) const;
};

/// exp(-i t sum_ij delta_ij P_0 E_ij P_0) on the logical block.
Matrix2 ideal_logical_unitary(const EncodedGateSpec& spec);

struct GateResult {
  /// Unitary part extracted from the evolved logical block, global phase
  /// aligned to the ideal gate.
  Matrix2 achieved;
  Matrix2 ideal;
  /// Logical channel as a 4 x 4 matrix on column-major vec of 2 x 2 blocks.
  Eigen::Matrix4cd channel;
  /// Mean over the six logical axis states of <psi_ideal| C^dagger rho C |psi_ideal>.
  double fidelity = 0.0;
  double max_leakage = 0.0;
  bool strength_warning = false;
};

/// Evolves under H_0^(4) + sum delta_ij E_ij and the model's jumps for
/// `spec.duration` and compares the logical map to the ideal gate.
GateResult gate_under_noise(const EncodedGateSpec& spec, const LindbladModel& model,
                            std::optional<double> dt = std::nullopt);

struct GroundSpaceReport {
  int dimension = 0;
  Matrix basis;  // 256 x dimension, orthonormal columns
  /// max over the four products |g_a> (x) |g_b> of ||(I - P) v||.
  double product_residual = 0.0;
  /// max over all 28 pairs of the Frobenius norm of (I - P) E_ij B, with B
  /// the ground-space basis (an upper bound on the operator norm).
  double exchange_leakage = 0.0;
};

/// Zero-energy eigenspace of H_0^(8).
GroundSpaceReport h8_ground_space();

}  // namespace supercoherence
