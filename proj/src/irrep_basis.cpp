#include "supercoherence/irrep_basis.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace supercoherence {

namespace {

constexpr double kLabelResidualTol = 1e-10;

void extend_paths(std::vector<HalfInt>& prefix, int n, std::vector<SpinPath>& out) {
  if (static_cast<int>(prefix.size()) == n) {
    out.push_back(SpinPath{prefix});
    return;
  }
  const HalfInt last = prefix.back();
  // J - 1/2 first keeps the output lexicographic
  if (last.twice() > 0) {
    prefix.push_back(last - kHalf);
    extend_paths(prefix, n, out);
    prefix.pop_back();
  }
  prefix.push_back(last + kHalf);
  extend_paths(prefix, n, out);
  prefix.pop_back();
}

// State |J_1..J_k, M> for the first k steps of `steps`, on k qubits.
Vector couple(const std::vector<HalfInt>& steps, int k, HalfInt m) {
  if (k == 1) {
    Vector v = Vector::Zero(2);
    v(m.twice() > 0 ? 0 : 1) = 1.0;
    return v;
  }
  const HalfInt j = steps[k - 1];
  const HalfInt j1 = steps[k - 2];
  const double jd = j1.value();
  const double md = m.value();
  const double norm = 2.0 * jd + 1.0;

  // Condon-Shortley coefficients for j1 (x) 1/2:
  //   J = j1 + 1/2: up  sqrt((j1+M+1/2)/(2j1+1)), down  sqrt((j1-M+1/2)/(2j1+1))
  //   J = j1 - 1/2: up -sqrt((j1-M+1/2)/(2j1+1)), down  sqrt((j1+M+1/2)/(2j1+1))
  double c_up = 0.0, c_down = 0.0;
  if (j > j1) {
    c_up = std::sqrt((jd + md + 0.5) / norm);
    c_down = std::sqrt((jd - md + 0.5) / norm);
  } else {
    c_up = -std::sqrt((jd - md + 0.5) / norm);
    c_down = std::sqrt((jd + md + 0.5) / norm);
  }

  const Eigen::Index d = Eigen::Index{1} << k;
  Vector v = Vector::Zero(d);
  const HalfInt m_up = m - kHalf;    // parent projection when new spin is up
  const HalfInt m_down = m + kHalf;  // parent projection when new spin is down
  if (c_up != 0.0 && m_up.twice() >= -j1.twice() && m_up.twice() <= j1.twice()) {
    const Vector parent = couple(steps, k - 1, m_up);
    for (Eigen::Index b = 0; b < parent.size(); ++b) v(2 * b) += c_up * parent(b);
  }
  if (c_down != 0.0 && m_down.twice() >= -j1.twice() && m_down.twice() <= j1.twice()) {
    const Vector parent = couple(steps, k - 1, m_down);
    for (Eigen::Index b = 0; b < parent.size(); ++b) v(2 * b + 1) += c_down * parent(b);
  }
  return v;
}

struct LabelOperators {
  std::vector<Matrix> spin_squared;  // index k-1
  Matrix projection;                 // S_axis^(n)
};

LabelOperators label_operators(int n, Axis axis) {
  LabelOperators ops;
  for (int k = 1; k <= n; ++k) ops.spin_squared.push_back(total_spin_squared(k, n).matrix());
  ops.projection = partial_collective_spin(axis, n, n).matrix();
  return ops;
}

double residual_with(const LabeledState& s, const LabelOperators& ops) {
  double worst = 0.0;
  for (int k = 1; k <= s.qubits(); ++k) {
    const double jk = s.path.steps[k - 1].value();
    const Vector r = ops.spin_squared[k - 1] * s.vector - (jk * (jk + 1.0)) * s.vector;
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  const Vector r = ops.projection * s.vector - s.m.value() * s.vector;
  return std::max(worst, r.cwiseAbs().maxCoeff());
}

}  // namespace

bool SpinPath::is_valid() const {
  if (steps.empty() || qubits() > kMaxQubits) return false;
  if (steps.front() != kHalf) return false;
  for (std::size_t k = 1; k < steps.size(); ++k) {
    if (steps[k].twice() < 0) return false;
    if (std::abs(steps[k].twice() - steps[k - 1].twice()) != 1) return false;
  }
  return true;
}

std::string SpinPath::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (k) out += ';';
    out += steps[k].to_string();
  }
  return out;
}

int IrrepTable::total_dimension() const {
  int total = 0;
  for (const auto& row : rows) total += row.multiplicity * row.dimension;
  return total;
}

std::vector<SpinPath> enumerate_all_paths(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, 10]");
  }
  std::vector<SpinPath> out;
  std::vector<HalfInt> prefix{kHalf};
  extend_paths(prefix, n, out);
  return out;
}

std::vector<SpinPath> enumerate_paths(int n, HalfInt j) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, 10]");
  }
  if (j.twice() < 0 || j.twice() > n || (j.twice() - n) % 2 != 0) return {};
  std::vector<SpinPath> out;
  for (auto& p : enumerate_all_paths(n)) {
    if (p.final_j() == j) out.push_back(std::move(p));
  }
  return out;
}

IrrepTable irrep_table(int n) {
  std::map<HalfInt, int> counts;
  for (const auto& p : enumerate_all_paths(n)) ++counts[p.final_j()];
  IrrepTable table{n, {}};
  for (const auto& [j, count] : counts) {
    table.rows.push_back(IrrepRow{j, count, j.twice() + 1});
  }
  return table;
}

DenseOperator global_rotation(Axis axis, int n) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd u;
  switch (axis) {
    case Axis::z:
      u = Eigen::Matrix2cd::Identity();
      break;
    case Axis::x:  // exp(-i pi/4 sigma_y)
      u << r, -r, r, r;
      break;
    case Axis::y:  // exp(+i pi/4 sigma_x)
      u << cplx(r, 0), cplx(0, r), cplx(0, r), cplx(r, 0);
      break;
  }
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix full(d, d);
  for (Eigen::Index row = 0; row < d; ++row) {
    for (Eigen::Index col = 0; col < d; ++col) {
      cplx amp = 1.0;
      for (int q = 0; q < n; ++q) amp *= u((row >> q) & 1, (col >> q) & 1);
      full(row, col) = amp;
    }
  }
  return DenseOperator(n, std::move(full));
}

LabeledState build_basis_state(const SpinPath& path, HalfInt m, Axis axis) {
  if (!path.is_valid()) {
    throw std::invalid_argument("invalid spin path " + path.to_string());
  }
  const HalfInt j = path.final_j();
  if (std::abs(m.twice()) > j.twice() || (j.twice() - m.twice()) % 2 != 0) {
    throw std::invalid_argument("projection m = " + m.to_string() +
                                " not allowed for J = " + j.to_string());
  }
  Vector v = couple(path.steps, path.qubits(), m);
  if (axis != Axis::z) v = global_rotation(axis, path.qubits()) * v;
  return LabeledState{path, m, axis, std::move(v)};
}

double label_residual(const LabeledState& state) {
  return residual_with(state, label_operators(state.qubits(), state.axis));
}

std::vector<LabeledState> full_labeled_basis(int n, Axis axis) {
  const LabelOperators ops = label_operators(n, axis);
  std::vector<LabeledState> states;
  states.reserve(std::size_t{1} << n);
  for (const auto& path : enumerate_all_paths(n)) {
    const int twice_j = path.final_j().twice();
    for (int twice_m = twice_j; twice_m >= -twice_j; twice_m -= 2) {
      LabeledState s = build_basis_state(path, HalfInt::from_twice(twice_m), axis);
      const double res = residual_with(s, ops);
      if (res > kLabelResidualTol) {
        throw std::logic_error("labeled state " + path.to_string() + ", m=" +
                               s.m.to_string() + " fails its eigen-equations (residual " +
                               std::to_string(res) + ")");
      }
      states.push_back(std::move(s));
    }
  }
  return states;
}

Matrix basis_matrix(const std::vector<LabeledState>& states) {
  if (states.empty()) return Matrix();
  const Eigen::Index d = states.front().vector.size();
  Matrix b(d, static_cast<Eigen::Index>(states.size()));
  for (std::size_t c = 0; c < states.size(); ++c) {
    b.col(static_cast<Eigen::Index>(c)) = states[c].vector;
  }
  return b;
}

}  // namespace supercoherence
