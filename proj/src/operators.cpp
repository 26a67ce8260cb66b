#include "supercoherence/operators.hpp"

#include <stdexcept>
#include <string>

namespace supercoherence {

namespace {

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, " + std::to_string(kMaxQubits) +
                                "], got " + std::to_string(n));
  }
}

void check_index(const char* what, int i, int n) {
  check_qubit_count(n);
  if (i < 1 || i > n) {
    throw std::invalid_argument(std::string(what) + " must be in [1, " + std::to_string(n) +
                                "], got " + std::to_string(i));
  }
}

void check_same_space(const DenseOperator& a, const DenseOperator& b) {
  if (a.qubits() != b.qubits()) {
    throw std::invalid_argument("operators act on different qubit counts (" +
                                std::to_string(a.qubits()) + " vs " +
                                std::to_string(b.qubits()) + ")");
  }
}

}  // namespace

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::x:
      return "x";
    case Axis::y:
      return "y";
    case Axis::z:
      return "z";
  }
  return "?";
}

Axis parse_axis(const std::string& name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  throw std::invalid_argument("unknown axis '" + name + "' (expected x, y or z)");
}

int levi_civita(Axis a, Axis b, Axis c) {
  const int i = static_cast<int>(a), j = static_cast<int>(b), k = static_cast<int>(c);
  if (i == j || j == k || i == k) return 0;
  // even permutations of (0,1,2) are its cyclic shifts
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

DenseOperator::DenseOperator(int qubits, Matrix entries, bool hermitian)
    : qubits_(qubits), entries_(std::move(entries)), hermitian_(hermitian) {
  check_qubit_count(qubits_);
  const Eigen::Index expected = Eigen::Index{1} << qubits_;
  if (entries_.rows() != expected || entries_.cols() != expected) {
    throw std::invalid_argument("operator on " + std::to_string(qubits_) +
                                " qubits must be " + std::to_string(expected) + "x" +
                                std::to_string(expected));
  }
  if (hermitian_ && !is_hermitian()) {
    throw std::invalid_argument("operator flagged Hermitian is not Hermitian");
  }
}

DenseOperator DenseOperator::identity(int qubits) {
  check_qubit_count(qubits);
  const Eigen::Index d = Eigen::Index{1} << qubits;
  return DenseOperator(qubits, Matrix::Identity(d, d), true);
}

DenseOperator DenseOperator::zero(int qubits) {
  check_qubit_count(qubits);
  const Eigen::Index d = Eigen::Index{1} << qubits;
  return DenseOperator(qubits, Matrix::Zero(d, d), true);
}

bool DenseOperator::is_hermitian(double tol) const {
  return max_abs_diff(entries_, entries_.adjoint()) < tol;
}

DenseOperator DenseOperator::adjoint() const {
  return DenseOperator(qubits_, entries_.adjoint(), hermitian_);
}

DenseOperator DenseOperator::operator+(const DenseOperator& o) const {
  check_same_space(*this, o);
  return DenseOperator(qubits_, entries_ + o.entries_, hermitian_ && o.hermitian_);
}

DenseOperator DenseOperator::operator-(const DenseOperator& o) const {
  check_same_space(*this, o);
  return DenseOperator(qubits_, entries_ - o.entries_, hermitian_ && o.hermitian_);
}

DenseOperator DenseOperator::operator*(const DenseOperator& o) const {
  check_same_space(*this, o);
  return DenseOperator(qubits_, entries_ * o.entries_);
}

DenseOperator DenseOperator::operator*(cplx s) const {
  return DenseOperator(qubits_, entries_ * s, hermitian_ && s.imag() == 0.0);
}

DenseOperator DenseOperator::operator*(double s) const {
  return DenseOperator(qubits_, entries_ * s, hermitian_);
}

Vector DenseOperator::operator*(const Vector& v) const {
  if (v.size() != dim()) throw std::invalid_argument("vector dimension mismatch");
  return entries_ * v;
}

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b) {
  check_same_space(a, b);
  return DenseOperator(a.qubits(), a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

DenseOperator anticommutator(const DenseOperator& a, const DenseOperator& b) {
  check_same_space(a, b);
  return DenseOperator(a.qubits(), a.matrix() * b.matrix() + b.matrix() * a.matrix());
}

double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("matrix shapes differ");
  }
  return max_abs(a - b);
}

double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
  check_same_space(a, b);
  return max_abs_diff(a.matrix(), b.matrix());
}

void SystemSpec::validate() const {
  check_qubit_count(n);
  if (!(delta > 0.0)) {
    throw std::invalid_argument("energy scale delta must be positive");
  }
}

DenseOperator single_spin_operator(Axis axis, int i, int n) {
  check_index("qubit index", i, n);
  const Eigen::Index d = Eigen::Index{1} << n;
  const Eigen::Index mask = Eigen::Index{1} << (n - i);
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    const bool down = (b & mask) != 0;
    switch (axis) {
      case Axis::x:
        m(b ^ mask, b) = 0.5;
        break;
      case Axis::y:
        // sigma_y |up> = i |down>, sigma_y |down> = -i |up>
        m(b ^ mask, b) = down ? cplx(0.0, -0.5) : cplx(0.0, 0.5);
        break;
      case Axis::z:
        m(b, b) = down ? -0.5 : 0.5;
        break;
    }
  }
  return DenseOperator(n, std::move(m), true);
}

DenseOperator partial_collective_spin(Axis axis, int k, int n) {
  check_index("partial spin index k", k, n);
  DenseOperator sum = DenseOperator::zero(n);
  for (int i = 1; i <= k; ++i) sum = sum + single_spin_operator(axis, i, n);
  return sum;
}

DenseOperator total_spin_squared(int k, int n) {
  check_index("partial spin index k", k, n);
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix m = Matrix::Zero(d, d);
  for (Axis a : kAllAxes) {
    const Matrix s = partial_collective_spin(a, k, n).matrix();
    m += s * s;
  }
  // squares of Hermitian matrices pick up roundoff asymmetry; restore it exactly
  m = 0.5 * (m + m.adjoint()).eval();
  return DenseOperator(n, std::move(m), true);
}

DenseOperator spin_dot(int i, int j, int n) {
  check_index("qubit index i", i, n);
  check_index("qubit index j", j, n);
  if (i == j) return DenseOperator::identity(n) * 0.75;
  const Eigen::Index d = Eigen::Index{1} << n;
  const Eigen::Index mi = Eigen::Index{1} << (n - i);
  const Eigen::Index mj = Eigen::Index{1} << (n - j);
  // aligned pair: 1/4; anti-aligned: -1/4 on the diagonal plus 1/2 onto the flipped pair
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    if (((b & mi) != 0) == ((b & mj) != 0)) {
      m(b, b) = 0.25;
    } else {
      m(b, b) = -0.25;
      m(b ^ mi ^ mj, b) = 0.5;
    }
  }
  return DenseOperator(n, std::move(m), true);
}

DenseOperator exchange_operator(int i, int j, int n) {
  check_index("qubit index i", i, n);
  check_index("qubit index j", j, n);
  if (i >= j) {
    throw std::invalid_argument("exchange requires i < j, got (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
  }
  return DenseOperator::identity(n) * 0.5 + spin_dot(i, j, n) * 2.0;
}

DenseOperator collective_hamiltonian(const SystemSpec& spec, HamiltonianForm form) {
  spec.validate();
  const int n = spec.n;
  if (form == HamiltonianForm::spin_squared) {
    return total_spin_squared(n, n) * (spec.delta / 2.0);
  }
  DenseOperator sum = DenseOperator::identity(n) * (3.0 * n / 4.0);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i != j) sum = sum + spin_dot(i, j, n);
    }
  }
  return sum * (spec.delta / 2.0);
}

DenseOperator o_n_operator(int n) {
  check_qubit_count(n);
  if (n <= 1) throw std::invalid_argument("O_n is defined only for n > 1");
  return DenseOperator::identity(n) * -0.25 + total_spin_squared(n, n) -
         total_spin_squared(n - 1, n);
}

std::vector<double> eigenvalues(const DenseOperator& op) {
  if (!op.is_hermitian(1e-10)) {
    throw std::invalid_argument("eigenvalues() requires a Hermitian operator");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<std::pair<double, int>> cluster_eigenvalues(const std::vector<double>& sorted,
                                                        double tol) {
  std::vector<std::pair<double, int>> out;
  for (double v : sorted) {
    if (!out.empty() && std::abs(v - out.back().first) < tol) {
      auto& [value, count] = out.back();
      value = (value * count + v) / (count + 1);
      ++count;
    } else {
      out.emplace_back(v, 1);
    }
  }
  return out;
}

}  // namespace supercoherence
