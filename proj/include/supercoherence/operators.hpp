#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace supercoherence {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxQubits = 10;
/// Absolute tolerance for Hermiticity and entrywise operator identities.
inline constexpr double kMatrixTol = 1e-12;
/// Tolerance used when rounding an eigenvalue to a J(J+1) label.
inline constexpr double kLabelTol = 1e-8;

enum class Axis { x, y, z };

inline constexpr Axis kAllAxes[] = {Axis::x, Axis::y, Axis::z};

const char* axis_name(Axis axis);
/// Accepts "x", "y" or "z"; throws std::invalid_argument otherwise.
Axis parse_axis(const std::string& name);

/// Levi-Civita symbol on (x, y, z) = (0, 1, 2).
int levi_civita(Axis a, Axis b, Axis c);

/// Complex square matrix on the 2^n dimensional space of n qubits.
///
/// Qubit 1 is the leftmost (most significant) tensor factor: in the
/// computational basis index b, qubit i is the bit (b >> (n - i)) & 1, and
/// bit value 0 is spin up along z.
class DenseOperator {
 public:
  DenseOperator(int qubits, Matrix entries, bool hermitian = false);

  static DenseOperator identity(int qubits);
  static DenseOperator zero(int qubits);

  int qubits() const { return qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  /// True when the operator was constructed as Hermitian (and checked).
  bool hermitian() const { return hermitian_; }
  bool is_hermitian(double tol = kMatrixTol) const;

  DenseOperator adjoint() const;

  DenseOperator operator+(const DenseOperator& o) const;
  DenseOperator operator-(const DenseOperator& o) const;
  DenseOperator operator*(const DenseOperator& o) const;
  DenseOperator operator*(cplx s) const;
  DenseOperator operator*(double s) const;
  Vector operator*(const Vector& v) const;

 private:
  int qubits_;
  Matrix entries_;
  bool hermitian_;
};

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b);
DenseOperator anticommutator(const DenseOperator& a, const DenseOperator& b);
/// max_ij |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(const DenseOperator& a, const DenseOperator& b);
double max_abs(const Matrix& a);

struct SystemSpec {
  int n = 4;
  double delta = 1.0;

  /// Throws std::invalid_argument unless 1 <= n <= 10 and delta > 0.
  void validate() const;
};

enum class HamiltonianForm { spin_squared, pairwise_heisenberg };

/// s_axis^(i) = sigma_axis / 2 on qubit i (1-based), identity elsewhere.
DenseOperator single_spin_operator(Axis axis, int i, int n);

/// S_axis^(k) = sum_{i<=k} s_axis^(i).
DenseOperator partial_collective_spin(Axis axis, int k, int n);

/// (S^(k))^2 = sum over axes of (S_axis^(k))^2.
DenseOperator total_spin_squared(int k, int n);

/// s^(i) . s^(j)
DenseOperator spin_dot(int i, int j, int n);

/// E_ij = I/2 + 2 s^(i).s^(j), the swap of qubits i < j.
DenseOperator exchange_operator(int i, int j, int n);

DenseOperator collective_hamiltonian(const SystemSpec& spec, HamiltonianForm form);

/// O_n = -I/4 + (S^(n))^2 - (S^(n-1))^2, defined for n > 1.
DenseOperator o_n_operator(int n);

/// Ascending eigenvalues of a Hermitian operator.
std::vector<double> eigenvalues(const DenseOperator& op);

/// Groups sorted eigenvalues into (value, multiplicity) clusters within tol.
std::vector<std::pair<double, int>> cluster_eigenvalues(const std::vector<double>& sorted,
                                                        double tol = kLabelTol);

}  // namespace supercoherence
