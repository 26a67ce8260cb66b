#pragma once

#include <string>
#include <vector>

#include "supercoherence/half_int.hpp"
#include "supercoherence/operators.hpp"

namespace supercoherence {

/// Sequence (J_1, ..., J_n) of partial total spins built by adding one
/// spin-1/2 at a time. The prefix (J_1, ..., J_{n-1}) is the degeneracy
/// index lambda; the last entry labels the irrep.
struct SpinPath {
  std::vector<HalfInt> steps;

  int qubits() const { return static_cast<int>(steps.size()); }
  HalfInt final_j() const { return steps.back(); }
  std::vector<HalfInt> lambda() const { return {steps.begin(), steps.end() - 1}; }

  /// J_1 = 1/2, |J_k - J_{k-1}| = 1/2, J_k >= 0, 1 <= n <= 10.
  bool is_valid() const;

  /// Semicolon separated, e.g. "1/2;0;1/2;0".
  std::string to_string() const;

  auto operator<=>(const SpinPath&) const = default;
};

struct LabeledState {
  SpinPath path;
  HalfInt m;
  Axis axis = Axis::z;
  Vector vector;

  int qubits() const { return path.qubits(); }
};

struct IrrepRow {
  HalfInt j;
  int multiplicity = 0;  // n_J
  int dimension = 0;     // 2J + 1
};

struct IrrepTable {
  int n = 0;
  std::vector<IrrepRow> rows;  // ascending J

  int total_dimension() const;
};

/// All paths on n qubits ending at J, in lexicographic order. Returns an empty
/// list when J does not match the parity of n or lies outside [0, n/2].
std::vector<SpinPath> enumerate_paths(int n, HalfInt j);

/// Every path on n qubits, lexicographic.
std::vector<SpinPath> enumerate_all_paths(int n);

IrrepTable irrep_table(int n);

/// |J_1..J_n, m> along `axis`, built by recursive spin-1/2 coupling with
/// Condon-Shortley phases; non-z axes are obtained by a global rotation of
/// the z state.
LabeledState build_basis_state(const SpinPath& path, HalfInt m, Axis axis = Axis::z);

/// Largest eigen-equation residual of the state's labels against
/// (S^(k))^2 for every k and S_axis^(n).
double label_residual(const LabeledState& state);

/// All 2^n labeled states: paths in lexicographic order, m descending within
/// each path. Every label is checked against the operator matrices and a
/// std::logic_error is thrown if any residual exceeds 1e-10.
std::vector<LabeledState> full_labeled_basis(int n, Axis axis = Axis::z);

/// Columns are the state vectors, in order.
Matrix basis_matrix(const std::vector<LabeledState>& states);

/// Product of single-qubit rotations U with U S_z U^dagger = S_axis.
DenseOperator global_rotation(Axis axis, int n);

}  // namespace supercoherence
