#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "supercoherence/irrep_basis.hpp"

namespace supercoherence {

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SectorProjector {
  HalfInt j;
  DenseOperator projector;
  int rank = 0;
};

struct SectorProjectors {
  int n = 0;
  std::vector<SectorProjector> sectors;  // ascending J

  /// Throws std::out_of_range if J is not a sector of this system.
  const DenseOperator& projector(HalfInt j) const;
};

/// Projectors onto the J_n sectors of (S^(n))^2, built from the labeled
/// basis. Requires 1 <= n <= 8.
SectorProjectors sector_projectors(int n);

/// P_to s_axis^(i) P_from.
struct TransitionOperator {
  int qubit = 0;
  Axis axis = Axis::z;
  HalfInt from_j;
  HalfInt to_j;
  DenseOperator matrix;
};

/// Unordered sector pairs (m, n), m <= n, through which a single-qubit operator
/// can act on four qubits: (0,1), (1,2), (1,1), (2,2).
const std::vector<std::pair<int, int>>& allowed_transitions();

/// All nine sector blocks P_to s_axis^(i) P_from for n = 4, ordered by
/// (from_j, to_j).
std::vector<TransitionOperator> transition_decomposition(int i, Axis axis, int n = 4);

/// Bose-Einstein occupation 1 / (exp(beta * gap) - 1). beta may be +inf.
double thermal_occupation(double beta, double energy_gap);

/// Coupling magnitudes g_{i,axis} for the four qubits.
using Couplings = std::array<std::array<double, 3>, 4>;
Couplings uniform_couplings(double g);

enum class JumpKind { absorption, emission, zero_frequency };

struct JumpTerm {
  TransitionOperator op;
  double rate = 0.0;
  /// Energy taken from the bath: +gap for absorption, -gap for emission.
  double energy = 0.0;
  JumpKind kind = JumpKind::zero_frequency;
};

struct LindbladModel {
  int n = 4;
  double delta = 1.0;
  double beta = 1.0;
  Couplings g{};
  /// Rate of the (1,1) and (2,2) jumps; unset means g_{i,axis}^2 per channel.
  std::optional<double> gamma0;
  DenseOperator hamiltonian = DenseOperator::zero(4);
  std::vector<JumpTerm> jumps;
};

/// Four-qubit thermal model. For each (i, axis) and each pair (m, n) with m < n
/// in the allowed set: absorption P_n s P_m with rate g^2 n(T) and emission
/// P_m s P_n with rate g^2 (n(T) + 1), at gap (delta / 2)(n(n+1) - m(m+1)).
/// Diagonal blocks (1,1) and (2,2) get gamma0. The Hamiltonian is H_0^(4).
LindbladModel build_model(const SystemSpec& spec, double beta, const Couplings& g,
                          std::optional<double> gamma0 = std::nullopt);

/// Energy (delta / 2)(n(n+1) - m(m+1)) of the J = m -> J = n transition.
double transition_gap(double delta, int m, int n);

/// d rho / dt evaluated directly in matrix form.
Matrix apply_generator(const LindbladModel& model, const Matrix& rho);

/// Vectorized generator (column-major vec), dimension d^2 x d^2.
Matrix liouvillian(const LindbladModel& model);

/// 0.01 * min(1 / delta, 1 / largest rate).
double default_time_step(const LindbladModel& model);

struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> states;
  std::vector<double> traces;
  /// Tr(P_J rho) per sector, ascending J.
  std::vector<std::vector<double>> sector_populations;
  /// 1 - Tr(P_0 rho); zero-filled when the system has no J = 0 sector.
  std::vector<double> leakage;
  /// Tr(rho_0 rho(t)), the fidelity with a pure initial state.
  std::vector<double> initial_overlap;

  /// Largest violation of Hermiticity, unit trace and positivity over all
  /// recorded states.
  double worst_hermiticity() const;
  double worst_trace_error() const;
  double min_eigenvalue() const;
};

/// Fixed-step fourth-order Runge-Kutta on the vectorized generator. States are
/// recorded every `record_every` steps plus the final one. Throws
/// IntegrationError when the trace drifts by more than 1e-6 or a recorded
/// state loses Hermiticity or positivity beyond 1e-6.
Trajectory evolve(const LindbladModel& model, const Matrix& rho0, double t_final, double dt,
                  int record_every = 1);

/// One RK4 step for the linear generator L, as a matrix: sum_k (dt L)^k / k!, k <= 4.
Matrix rk4_step_matrix(const Matrix& generator, double dt);

/// Sum over jumps leaving the J = 0 block of rate * Tr(A^dagger A rho0).
double first_order_leakage_rate(const LindbladModel& model, const Matrix& rho0);

struct LeakageFit {
  double rate = 0.0;
  double window = 0.0;
  double dt = 0.0;
  double first_order_guess = 0.0;
  std::size_t samples = 0;
};

struct LeakageOptions {
  /// Fit window; default 0.01 / max(guess, ||sum_j rate_j A_j^dagger A_j||).
  std::optional<double> window;
  std::optional<double> dt;
};

/// Evolves rho0 (in the J = 0 block) and fits -log(1 - leakage) = rate * t
/// through the origin over the window. Throws EstimationError when the
/// leakage is not monotone.
LeakageFit leakage_rate(const LindbladModel& model, const Matrix& rho0,
                        const LeakageOptions& options = {});

struct SweepRow {
  double beta = 0.0;
  double gamma_fit = 0.0;
  double n_thermal = 0.0;
  /// d log(gamma) / d(beta delta) from neighbouring rows.
  double slope = 0.0;
};

/// Leakage rate for each beta with all other parameters taken from the template.
std::vector<SweepRow> temperature_sweep(const SystemSpec& spec, const Couplings& g,
                                        std::optional<double> gamma0, const Matrix& rho0,
                                        const std::vector<double>& betas,
                                        const LeakageOptions& options = {});

/// Least-squares slope of log(gamma) against beta * delta over rows with
/// beta * delta in [lo, hi].
double log_rate_slope(const std::vector<SweepRow>& rows, double delta, double lo, double hi);

}  // namespace supercoherence
