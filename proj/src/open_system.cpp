#include "supercoherence/open_system.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace supercoherence {

namespace {

constexpr double kTraceDriftLimit = 1e-6;
constexpr double kPhysicalityLimit = 1e-6;
// Leakage may fall by roundoff between samples without counting as a reversal.
constexpr double kMonotoneSlack = 1e-13;

void check_four_qubits(int n, const char* what) {
  if (n != 4) {
    throw std::invalid_argument(std::string(what) + " is defined for n = 4 only, got n = " +
                                std::to_string(n));
  }
}

Matrix vec_to_matrix(const Vector& v, Eigen::Index d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

Vector matrix_to_vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

double min_eigenvalue_of(const Matrix& rho) {
  const Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace

const DenseOperator& SectorProjectors::projector(HalfInt j) const {
  for (const auto& s : sectors) {
    if (s.j == j) return s.projector;
  }
  throw std::out_of_range("no J = " + j.to_string() + " sector on " + std::to_string(n) +
                          " qubits");
}

SectorProjectors sector_projectors(int n) {
  if (n < 1 || n > 8) throw std::invalid_argument("sector_projectors supports 1 <= n <= 8");
  SectorProjectors out;
  out.n = n;
  const Eigen::Index d = Eigen::Index{1} << n;
  for (const auto& row : irrep_table(n).rows) {
    Matrix p = Matrix::Zero(d, d);
    int rank = 0;
    for (const auto& path : enumerate_paths(n, row.j)) {
      for (int tm = row.j.twice(); tm >= -row.j.twice(); tm -= 2) {
        const Vector v = build_basis_state(path, HalfInt::from_twice(tm)).vector;
        p += v * v.adjoint();
        ++rank;
      }
    }
    p = 0.5 * (p + p.adjoint()).eval();
    out.sectors.push_back(SectorProjector{row.j, DenseOperator(n, std::move(p), true), rank});
  }
  return out;
}

const std::vector<std::pair<int, int>>& allowed_transitions() {
  static const std::vector<std::pair<int, int>> set{{0, 1}, {1, 2}, {1, 1}, {2, 2}};
  return set;
}

std::vector<TransitionOperator> transition_decomposition(int i, Axis axis, int n) {
  check_four_qubits(n, "transition_decomposition");
  const SectorProjectors proj = sector_projectors(n);
  const DenseOperator s = single_spin_operator(axis, i, n);
  std::vector<TransitionOperator> out;
  for (const auto& from : proj.sectors) {
    for (const auto& to : proj.sectors) {
      out.push_back(
          TransitionOperator{i, axis, from.j, to.j, to.projector * s * from.projector});
    }
  }
  return out;
}

double thermal_occupation(double beta, double energy_gap) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(energy_gap > 0.0)) throw std::invalid_argument("energy gap must be positive");
  const double x = beta * energy_gap;
  if (std::isinf(x)) return 0.0;
  return 1.0 / std::expm1(x);
}

Couplings uniform_couplings(double g) {
  Couplings c;
  for (auto& row : c) row.fill(g);
  return c;
}

double transition_gap(double delta, int m, int n) {
  return 0.5 * delta * static_cast<double>(n * (n + 1) - m * (m + 1));
}

LindbladModel build_model(const SystemSpec& spec, double beta, const Couplings& g,
                          std::optional<double> gamma0) {
  spec.validate();
  check_four_qubits(spec.n, "build_model");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  for (const auto& row : g) {
    for (double v : row) {
      if (!(v >= 0.0) || std::isinf(v)) {
        throw std::invalid_argument("coupling magnitudes must be finite and >= 0");
      }
    }
  }
  if (gamma0 && !(*gamma0 >= 0.0)) throw std::invalid_argument("gamma0 must be >= 0");

  LindbladModel model;
  model.n = spec.n;
  model.delta = spec.delta;
  model.beta = beta;
  model.g = g;
  model.gamma0 = gamma0;
  model.hamiltonian = collective_hamiltonian(spec, HamiltonianForm::spin_squared);

  const SectorProjectors proj = sector_projectors(spec.n);
  for (int i = 1; i <= spec.n; ++i) {
    for (Axis axis : kAllAxes) {
      const double g2 = std::pow(g[i - 1][static_cast<int>(axis)], 2);
      const DenseOperator s = single_spin_operator(axis, i, spec.n);
      for (const auto& [lo, hi] : allowed_transitions()) {
        const HalfInt j_lo = HalfInt::from_int(lo), j_hi = HalfInt::from_int(hi);
        const DenseOperator& p_lo = proj.projector(j_lo);
        const DenseOperator& p_hi = proj.projector(j_hi);
        if (lo == hi) {
          model.jumps.push_back(JumpTerm{TransitionOperator{i, axis, j_lo, j_lo, p_lo * s * p_lo},
                                         gamma0.value_or(g2), 0.0, JumpKind::zero_frequency});
          continue;
        }
        const double gap = transition_gap(spec.delta, lo, hi);
        const double occ = thermal_occupation(beta, gap);
        model.jumps.push_back(JumpTerm{TransitionOperator{i, axis, j_lo, j_hi, p_hi * s * p_lo},
                                       g2 * occ, gap, JumpKind::absorption});
        model.jumps.push_back(JumpTerm{TransitionOperator{i, axis, j_hi, j_lo, p_lo * s * p_hi},
                                       g2 * (occ + 1.0), -gap, JumpKind::emission});
      }
    }
  }
  return model;
}

Matrix apply_generator(const LindbladModel& model, const Matrix& rho) {
  const Matrix& h = model.hamiltonian.matrix();
  Matrix out = cplx(0.0, -1.0) * (h * rho - rho * h);
  for (const auto& jump : model.jumps) {
    if (jump.rate == 0.0) continue;
    const Matrix& a = jump.op.matrix.matrix();
    const Matrix ada = a.adjoint() * a;
    out += jump.rate * (a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada));
  }
  return out;
}

Matrix liouvillian(const LindbladModel& model) {
  const Matrix& h = model.hamiltonian.matrix();
  const Eigen::Index d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  // vec(A X B) = (B^T kron A) vec(X)
  Matrix l = cplx(0.0, -1.0) *
             (Matrix(Eigen::kroneckerProduct(id, h)) -
              Matrix(Eigen::kroneckerProduct(h.transpose(), id)));
  for (const auto& jump : model.jumps) {
    if (jump.rate == 0.0) continue;
    const Matrix& a = jump.op.matrix.matrix();
    const Matrix ada = a.adjoint() * a;
    l += jump.rate * (Matrix(Eigen::kroneckerProduct(a.conjugate(), a)) -
                      0.5 * Matrix(Eigen::kroneckerProduct(id, ada)) -
                      0.5 * Matrix(Eigen::kroneckerProduct(ada.transpose(), id)));
  }
  return l;
}

double default_time_step(const LindbladModel& model) {
  double rate_max = 0.0;
  for (const auto& jump : model.jumps) rate_max = std::max(rate_max, jump.rate);
  double scale = 1.0 / model.delta;
  if (rate_max > 0.0) scale = std::min(scale, 1.0 / rate_max);
  return 0.01 * scale;
}

Matrix rk4_step_matrix(const Matrix& generator, double dt) {
  const Eigen::Index d = generator.rows();
  const Matrix hl = dt * generator;
  Matrix term = Matrix::Identity(d, d);
  Matrix step = term;
  for (int k = 1; k <= 4; ++k) {
    term = (hl * term / static_cast<double>(k)).eval();
    step += term;
  }
  return step;
}

double Trajectory::worst_hermiticity() const {
  double worst = 0.0;
  for (const auto& s : states) worst = std::max(worst, max_abs_diff(s, s.adjoint()));
  return worst;
}

double Trajectory::worst_trace_error() const {
  double worst = 0.0;
  for (double t : traces) worst = std::max(worst, std::abs(t - 1.0));
  return worst;
}

double Trajectory::min_eigenvalue() const {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& s : states) lowest = std::min(lowest, min_eigenvalue_of(s));
  return lowest;
}

Trajectory evolve(const LindbladModel& model, const Matrix& rho0, double t_final, double dt,
                  int record_every) {
  const Eigen::Index d = model.hamiltonian.dim();
  if (rho0.rows() != d || rho0.cols() != d) {
    throw std::invalid_argument("initial density matrix has the wrong dimension");
  }
  if (max_abs_diff(rho0, rho0.adjoint()) > 1e-10 ||
      std::abs(rho0.trace() - cplx(1.0)) > 1e-10 || min_eigenvalue_of(rho0) < -1e-10) {
    throw std::invalid_argument("initial state is not a valid density matrix");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(t_final >= 0.0)) throw std::invalid_argument("final time must be non-negative");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");

  const long steps = std::lround(std::ceil(t_final / dt - 1e-9));
  const double h = steps > 0 ? t_final / static_cast<double>(steps) : dt;
  const Matrix step = rk4_step_matrix(liouvillian(model), h);

  std::vector<Matrix> projectors;
  int ground_index = -1;
  if (model.n <= 8) {
    const SectorProjectors proj = sector_projectors(model.n);
    for (std::size_t k = 0; k < proj.sectors.size(); ++k) {
      if (proj.sectors[k].j == HalfInt{}) ground_index = static_cast<int>(k);
      projectors.push_back(proj.sectors[k].projector.matrix());
    }
  }

  Trajectory traj;
  auto record = [&](double t, const Matrix& rho) {
    traj.times.push_back(t);
    traj.states.push_back(rho);
    traj.traces.push_back(rho.trace().real());
    std::vector<double> pops;
    for (const auto& p : projectors) pops.push_back((p * rho).trace().real());
    traj.leakage.push_back(ground_index >= 0 ? 1.0 - pops[ground_index] : 0.0);
    traj.sector_populations.push_back(std::move(pops));
    traj.initial_overlap.push_back((rho0 * rho).trace().real());
  };

  Vector v = matrix_to_vec(rho0);
  record(0.0, rho0);
  for (long k = 1; k <= steps; ++k) {
    v = (step * v).eval();
    const double t = h * static_cast<double>(k);
    cplx trace = 0.0;
    for (Eigen::Index r = 0; r < d; ++r) trace += v(r * d + r);
    if (std::abs(trace - cplx(1.0)) > kTraceDriftLimit) {
      throw IntegrationError("trace drifted to " + std::to_string(trace.real()) + " at t = " +
                             std::to_string(t) + "; try a smaller dt");
    }
    if (k % record_every == 0 || k == steps) {
      const Matrix rho = vec_to_matrix(v, d);
      if (max_abs_diff(rho, rho.adjoint()) > kPhysicalityLimit ||
          min_eigenvalue_of(rho) < -kPhysicalityLimit) {
        throw IntegrationError("density matrix lost Hermiticity or positivity at t = " +
                               std::to_string(t) + "; try a smaller dt");
      }
      record(t, rho);
    }
  }
  return traj;
}

double first_order_leakage_rate(const LindbladModel& model, const Matrix& rho0) {
  double rate = 0.0;
  for (const auto& jump : model.jumps) {
    if (jump.op.from_j != HalfInt{} || jump.op.to_j == HalfInt{}) continue;
    const Matrix& a = jump.op.matrix.matrix();
    rate += jump.rate * (a.adjoint() * a * rho0).trace().real();
  }
  return rate;
}

LeakageFit leakage_rate(const LindbladModel& model, const Matrix& rho0,
                        const LeakageOptions& options) {
  check_four_qubits(model.n, "leakage_rate");
  const SectorProjectors proj = sector_projectors(model.n);
  const Matrix& p0 = proj.projector(HalfInt{}).matrix();
  if (max_abs_diff(p0 * rho0 * p0, rho0) > 1e-10) {
    throw std::invalid_argument("leakage_rate needs an initial state inside the J = 0 block");
  }

  LeakageFit fit;
  fit.first_order_guess = first_order_leakage_rate(model, rho0);

  const Eigen::Index d = model.hamiltonian.dim();
  Matrix escape = Matrix::Zero(d, d);
  for (const auto& jump : model.jumps) {
    const Matrix& a = jump.op.matrix.matrix();
    escape += jump.rate * (a.adjoint() * a);
  }
  const double escape_norm = escape.operatorNorm();

  fit.dt = options.dt.value_or(default_time_step(model));
  const double rate_scale = std::max(fit.first_order_guess, escape_norm);
  fit.window = options.window.value_or(rate_scale > 0.0 ? 0.01 / rate_scale : 1.0 / model.delta);
  // at least a handful of samples inside the window
  fit.dt = std::min(fit.dt, fit.window / 16.0);

  const Trajectory traj = evolve(model, rho0, fit.window, fit.dt);
  fit.samples = traj.times.size();

  double num = 0.0, den = 0.0;
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    if (traj.leakage[k] < traj.leakage[k - 1] - kMonotoneSlack) {
      throw EstimationError("leakage is not monotone at t = " + std::to_string(traj.times[k]));
    }
    const double survival = 1.0 - traj.leakage[k];
    if (!(survival > 0.0)) throw EstimationError("ground population vanished inside the window");
    num += traj.times[k] * -std::log(survival);
    den += traj.times[k] * traj.times[k];
  }
  fit.rate = den > 0.0 ? num / den : 0.0;
  return fit;
}

std::vector<SweepRow> temperature_sweep(const SystemSpec& spec, const Couplings& g,
                                        std::optional<double> gamma0, const Matrix& rho0,
                                        const std::vector<double>& betas,
                                        const LeakageOptions& options) {
  if (betas.empty()) throw std::invalid_argument("temperature sweep needs at least one beta");
  std::vector<SweepRow> rows;
  for (double beta : betas) {
    const LindbladModel model = build_model(spec, beta, g, gamma0);
    const LeakageFit fit = leakage_rate(model, rho0, options);
    rows.push_back(SweepRow{beta, fit.rate, thermal_occupation(beta, spec.delta), 0.0});
  }

  auto log_slope = [&](std::size_t a, std::size_t b) {
    const double dx = (rows[b].beta - rows[a].beta) * spec.delta;
    if (dx == 0.0 || rows[a].gamma_fit <= 0.0 || rows[b].gamma_fit <= 0.0) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    return (std::log(rows[b].gamma_fit) - std::log(rows[a].gamma_fit)) / dx;
  };
  const std::size_t count = rows.size();
  for (std::size_t k = 0; k < count; ++k) {
    if (count < 2) {
      rows[k].slope = std::numeric_limits<double>::quiet_NaN();
    } else if (k == 0) {
      rows[k].slope = log_slope(0, 1);
    } else if (k + 1 == count) {
      rows[k].slope = log_slope(k - 1, k);
    } else {
      rows[k].slope = log_slope(k - 1, k + 1);
    }
  }
  return rows;
}

double log_rate_slope(const std::vector<SweepRow>& rows, double delta, double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& r : rows) {
    const double x = r.beta * delta;
    if (x < lo - 1e-12 || x > hi + 1e-12) continue;
    if (!(r.gamma_fit > 0.0)) throw EstimationError("non-positive rate in slope fit");
    const double y = std::log(r.gamma_fit);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw EstimationError("slope fit needs at least two points in range");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace supercoherence
