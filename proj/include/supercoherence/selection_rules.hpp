#pragma once

#include <map>
#include <utility>
#include <vector>

#include "supercoherence/irrep_basis.hpp"

namespace supercoherence {

/// Elements at or below this magnitude count as vanishing.
inline constexpr double kZeroTol = 1e-12;
/// Bound on residuals of exact identities evaluated over a whole basis.
inline constexpr double kIdentityTol = 1e-10;

/// <bra| op |ket>; throws std::invalid_argument on a dimension mismatch.
cplx matrix_element(const LabeledState& bra, const DenseOperator& op, const LabeledState& ket);

/// Eigenvalue of O_n for a path: +(J_{n-1} + 1/2) if the last step added 1/2,
/// otherwise -(J_{n-1} + 1/2).
HalfInt o_n_label(const SpinPath& path);

/// max over basis pairs of
///   |(O' + O) <lambda,O,m| s_axis^(n) |lambda',O',m'> - m d_{lambda lambda'} d_{O O'} d_{m m'}|
/// in the basis quantized along `axis`. Requires 2 <= n <= 8.
double verify_on_identity(int n, Axis axis);

/// Largest |<lambda,O,m| s_axis^(n) |lambda',O',m'>| with O' != +-O.
double max_element_outside_sign_rule(int n, Axis axis);

struct ElementEntry {
  SpinPath bra_path;
  HalfInt bra_m;
  SpinPath ket_path;
  HalfInt ket_m;
  cplx value;
};

struct MatrixElementReport {
  int n = 0;
  int qubit = 0;
  Axis axis = Axis::z;
  Axis basis_axis = Axis::z;
  double threshold = kZeroTol;

  std::size_t pairs_checked = 0;
  std::vector<ElementEntry> nonzero;  // |value| > threshold
  /// (J_n of bra, J_n of ket) -> number of nonzero elements.
  std::map<std::pair<HalfInt, HalfInt>, int> sector_counts;
  /// Nonzero elements with bra m != ket m (reported, not asserted).
  int m_mixing_count = 0;

  /// Largest |element| with |Delta J_n| > 1.
  double worst_delta_j = 0.0;
  /// Largest |element| between two J_n = 0 states.
  double worst_ground_block = 0.0;
  /// Largest |element| connecting a J_n = 0 state to anything but J_n = 1.
  double worst_ground_exit = 0.0;

  bool delta_j_rule_holds() const { return worst_delta_j <= threshold; }
  bool ground_block_vanishes() const { return worst_ground_block <= threshold; }
  bool ground_exits_to_j1_only() const { return worst_ground_exit <= threshold; }
  bool all_pass() const {
    return delta_j_rule_holds() && ground_block_vanishes() && ground_exits_to_j1_only();
  }
};

/// Classifies every labeled-basis matrix element of s_axis^(i). The basis is
/// quantized along `basis_axis`. Requires 1 <= i <= n <= 8.
MatrixElementReport selection_rule_scan(int n, int i, Axis axis, Axis basis_axis = Axis::z);

/// Matrix of `op` restricted to the J_n = 0 labeled states (lexicographic path
/// order). For n = 4 this is the 2x2 block over the two code words.
Matrix ground_block(const DenseOperator& op);

/// True when `block` equals c * I for some complex c, within tol.
bool is_scalar_block(const Matrix& block, double tol = kZeroTol);

struct ErrorDetectionResult {
  bool passed = false;
  double worst_block_norm = 0.0;  // max over the 12 operators of max|block entry|
  std::vector<double> block_norms;  // ordered (i = 1..4) x (x, y, z)
};

/// Checks <c_a| s_axis^(i) |c_b> = 0 on the two-dimensional J_4 = 0 code for
/// all 12 single-qubit spin operators.
ErrorDetectionResult error_detection_check();

/// max |s_axis^(i) - E_in s_axis^(n) E_in|; requires 1 <= i < n.
double exchange_conjugation_check(int i, int n, Axis axis);

}  // namespace supercoherence
