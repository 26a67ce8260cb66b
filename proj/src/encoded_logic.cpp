#include "supercoherence/encoded_logic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace supercoherence {

namespace {

constexpr int kCodeQubits = 4;

Matrix power(Matrix base, long exponent) {
  Matrix result = Matrix::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) result = (result * base).eval();
    exponent >>= 1;
    if (exponent > 0) base = (base * base).eval();
  }
  return result;
}

std::array<Eigen::Vector2cd, 6> logical_axis_states() {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  return {Eigen::Vector2cd(1.0, 0.0), Eigen::Vector2cd(0.0, 1.0),
          Eigen::Vector2cd(r, r),     Eigen::Vector2cd(r, -r),
          Eigen::Vector2cd(r, r * i), Eigen::Vector2cd(r, -r * i)};
}

}  // namespace

std::array<LabeledState, 2> logical_basis() {
  const auto paths = enumerate_paths(kCodeQubits, HalfInt{});
  return {build_basis_state(paths[0], HalfInt{}), build_basis_state(paths[1], HalfInt{})};
}

Matrix logical_isometry() {
  const auto basis = logical_basis();
  Matrix c(16, 2);
  c.col(0) = basis[0].vector;
  c.col(1) = basis[1].vector;
  return c;
}

LogicalState encode(cplx a, cplx b) {
  const double norm = std::norm(a) + std::norm(b);
  if (std::abs(norm - 1.0) > 1e-10) {
    throw std::invalid_argument("logical amplitudes must satisfy |a|^2 + |b|^2 = 1 (got " +
                                std::to_string(norm) + ")");
  }
  const Matrix c = logical_isometry();
  return LogicalState{a, b, a * c.col(0) + b * c.col(1)};
}

DecodedState decode(const Matrix& rho) {
  if (rho.rows() != 16 || rho.cols() != 16) {
    throw std::invalid_argument("decode expects a 16 x 16 density matrix");
  }
  if (max_abs_diff(rho, rho.adjoint()) > 1e-8 || std::abs(rho.trace() - cplx(1.0)) > 1e-8) {
    throw std::invalid_argument("decode expects a Hermitian, unit-trace density matrix");
  }
  const Matrix c = logical_isometry();
  const Matrix2 block = c.adjoint() * rho * c;
  const double weight = block.trace().real();
  if (!(weight > 0.0)) throw std::invalid_argument("state has no weight in the code space");
  return DecodedState{block / weight, 1.0 - weight};
}

Matrix2 projected_generator(int i, int j) {
  if (i < 1 || j > kCodeQubits || i >= j) {
    throw std::invalid_argument("projected_generator needs 1 <= i < j <= 4");
  }
  const Matrix c = logical_isometry();
  return c.adjoint() * exchange_operator(i, j, kCodeQubits).matrix() * c;
}

Eigen::Vector3d pauli_coefficients(const Matrix2& m) {
  // m - tr(m)/2 = c_x X + c_y Y + c_z Z with c_a = tr(m sigma_a) / 2
  const cplx cx = 0.5 * (m(0, 1) + m(1, 0));
  const cplx cy = 0.5 * cplx(0.0, 1.0) * (m(0, 1) - m(1, 0));
  const cplx cz = 0.5 * (m(0, 0) - m(1, 1));
  return {cx.real(), cy.real(), cz.real()};
}

int real_algebra_rank(const std::vector<Matrix2>& generators, double tol) {
  Eigen::MatrixXd coeffs(3, static_cast<Eigen::Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) {
    coeffs.col(static_cast<Eigen::Index>(k)) = pauli_coefficients(generators[k]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(coeffs);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

FidelityValue gate_fidelity(double delta, double big_delta, double beta) {
  const bool regime = delta > 0.0 && big_delta > delta && beta > 0.0;
  return FidelityValue{delta * std::exp(beta * (big_delta - delta)), regime};
}

double optimal_delta(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  return 1.0 / beta;
}

GridOptimum grid_optimal_delta(double big_delta, double beta, double step) {
  if (!(step > 0.0) || !(big_delta > step)) {
    throw std::invalid_argument("grid step must lie in (0, Delta)");
  }
  GridOptimum best;
  const long points = static_cast<long>(std::floor(big_delta / step - 1e-9));
  for (long k = 1; k <= points; ++k) {
    const double delta = step * static_cast<double>(k);
    const double f = gate_fidelity(delta, big_delta, beta).value;
    if (f > best.fidelity) best = GridOptimum{delta, f};
  }
  return best;
}

bool EncodedGateSpec::strength_warning(double big_delta) const {
  for (const auto& c : couplings) {
    if (std::abs(c.strength) > 0.1 * big_delta) return true;
  }
  return false;
}

Matrix2 ideal_logical_unitary(const EncodedGateSpec& spec) {
  Matrix2 h = Matrix2::Zero();
  for (const auto& c : spec.couplings) h += c.strength * projected_generator(c.i, c.j);
  const Matrix2 exponent = cplx(0.0, -spec.duration) * h;
  return exponent.exp();
}

GateResult gate_under_noise(const EncodedGateSpec& spec, const LindbladModel& model,
                            std::optional<double> dt) {
  if (model.n != kCodeQubits) throw std::invalid_argument("gate_under_noise needs n = 4");
  if (!(spec.duration >= 0.0)) throw std::invalid_argument("gate duration must be >= 0");

  LindbladModel driven = model;
  for (const auto& c : spec.couplings) {
    driven.hamiltonian = driven.hamiltonian + exchange_operator(c.i, c.j, kCodeQubits) * c.strength;
  }

  GateResult result;
  result.ideal = ideal_logical_unitary(spec);
  result.strength_warning = spec.strength_warning(model.delta);

  const double step_hint = dt.value_or(default_time_step(model));
  if (!(step_hint > 0.0)) throw std::invalid_argument("time step must be positive");
  const long steps = std::max<long>(1, std::lround(std::ceil(spec.duration / step_hint - 1e-9)));
  const double h = spec.duration / static_cast<double>(steps);
  const Matrix propagator = power(rk4_step_matrix(liouvillian(driven), h), steps);

  const Matrix c = logical_isometry();
  const Eigen::Index d = 16;
  // evolved |a><b| for the logical basis, full 16 x 16
  std::array<std::array<Matrix, 2>, 2> evolved;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Matrix x = c.col(a) * c.col(b).adjoint();
      const Vector v = propagator * Eigen::Map<const Vector>(x.data(), x.size());
      evolved[a][b] = Eigen::Map<const Matrix>(v.data(), d, d);
      const Matrix2 block = c.adjoint() * evolved[a][b] * c;
      result.channel.col(a + 2 * b) = Eigen::Map<const Eigen::Vector4cd>(block.data());
    }
  }

  // unitary part: |u0><u0| from the |0><0| image, u1 = (|1><0| image) u0
  const Matrix2 b00 = c.adjoint() * evolved[0][0] * c;
  const Matrix2 b10 = c.adjoint() * evolved[1][0] * c;
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(0.5 * (b00 + b00.adjoint()));
  const Eigen::Vector2cd u0 = eig.eigenvectors().col(1);
  Matrix2 raw;
  raw.col(0) = u0;
  raw.col(1) = b10 * u0;
  Eigen::JacobiSVD<Matrix2> svd(raw, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix2 achieved = svd.matrixU() * svd.matrixV().adjoint();
  const cplx overlap = (result.ideal.adjoint() * achieved).trace();
  if (std::abs(overlap) > 0.0) achieved *= std::conj(overlap) / std::abs(overlap);
  result.achieved = achieved;

  double total = 0.0;
  for (const auto& psi : logical_axis_states()) {
    Matrix out = Matrix::Zero(d, d);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) out += psi(a) * std::conj(psi(b)) * evolved[a][b];
    }
    if (std::abs(out.trace() - cplx(1.0)) > 1e-6) {
      throw IntegrationError("gate evolution lost trace; try a smaller dt");
    }
    const Matrix2 block = c.adjoint() * out * c;
    const Eigen::Vector2cd target = result.ideal * psi;
    total += (target.adjoint() * block * target)(0, 0).real();
    result.max_leakage = std::max(result.max_leakage, 1.0 - block.trace().real());
  }
  result.fidelity = total / 6.0;
  return result;
}

GroundSpaceReport h8_ground_space() {
  constexpr int n = 8;
  const DenseOperator h = collective_hamiltonian(SystemSpec{n, 1.0}, HamiltonianForm::spin_squared);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());

  GroundSpaceReport report;
  const Eigen::VectorXd& ev = solver.eigenvalues();
  while (report.dimension < ev.size() && std::abs(ev(report.dimension)) < kLabelTol) {
    ++report.dimension;
  }
  report.basis = solver.eigenvectors().leftCols(report.dimension);
  const Matrix projector = report.basis * report.basis.adjoint();
  const Matrix complement = Matrix::Identity(256, 256) - projector;

  const Matrix c = logical_isometry();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Vector v = Eigen::kroneckerProduct(c.col(a), c.col(b)).eval();
      report.product_residual = std::max(report.product_residual, (complement * v).norm());
    }
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const Matrix moved = complement * exchange_operator(i, j, n).matrix() * report.basis;
      report.exchange_leakage = std::max(report.exchange_leakage, moved.norm());
    }
  }
  return report;
}

}  // namespace supercoherence
