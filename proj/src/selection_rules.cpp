#include "supercoherence/selection_rules.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace supercoherence {

namespace {

void check_scan_size(int n) {
  if (n < 1 || n > 8) throw std::invalid_argument("selection scans support 1 <= n <= 8");
}

// Operator expressed in the labeled basis: B^dagger op B.
Matrix in_basis(const std::vector<LabeledState>& basis, const DenseOperator& op) {
  const Matrix b = basis_matrix(basis);
  return b.adjoint() * op.matrix() * b;
}

}  // namespace

cplx matrix_element(const LabeledState& bra, const DenseOperator& op, const LabeledState& ket) {
  if (bra.vector.size() != op.dim() || ket.vector.size() != op.dim()) {
    throw std::invalid_argument("matrix_element: dimension mismatch (bra " +
                                std::to_string(bra.vector.size()) + ", op " +
                                std::to_string(op.dim()) + ", ket " +
                                std::to_string(ket.vector.size()) + ")");
  }
  return bra.vector.dot(op.matrix() * ket.vector);
}

HalfInt o_n_label(const SpinPath& path) {
  if (path.qubits() < 2) throw std::invalid_argument("O_n label needs n > 1");
  const HalfInt prev = path.steps[path.steps.size() - 2];
  const HalfInt magnitude = prev + kHalf;
  return path.final_j() > prev ? magnitude : -magnitude;
}

double verify_on_identity(int n, Axis axis) {
  if (n < 2 || n > 8) throw std::invalid_argument("verify_on_identity requires 2 <= n <= 8");
  const auto basis = full_labeled_basis(n, axis);
  const Matrix elems = in_basis(basis, single_spin_operator(axis, n, n));
  double worst = 0.0;
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const HalfInt o_bra = o_n_label(basis[r].path);
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const HalfInt o_ket = o_n_label(basis[c].path);
      const bool same_label = basis[r].path.lambda() == basis[c].path.lambda() &&
                              o_bra == o_ket && basis[r].m == basis[c].m;
      const cplx rhs = same_label ? cplx(basis[r].m.value()) : cplx(0.0);
      const cplx lhs = (o_ket + o_bra).value() *
                       elems(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

double max_element_outside_sign_rule(int n, Axis axis) {
  if (n < 2 || n > 8) throw std::invalid_argument("requires 2 <= n <= 8");
  const auto basis = full_labeled_basis(n, axis);
  const Matrix elems = in_basis(basis, single_spin_operator(axis, n, n));
  double worst = 0.0;
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const HalfInt o_bra = o_n_label(basis[r].path);
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const HalfInt o_ket = o_n_label(basis[c].path);
      if (o_ket == o_bra || o_ket == -o_bra) continue;
      worst = std::max(worst, std::abs(elems(static_cast<Eigen::Index>(r),
                                             static_cast<Eigen::Index>(c))));
    }
  }
  return worst;
}

MatrixElementReport selection_rule_scan(int n, int i, Axis axis, Axis basis_axis) {
  check_scan_size(n);
  if (i < 1 || i > n) throw std::invalid_argument("qubit index out of range");

  MatrixElementReport report;
  report.n = n;
  report.qubit = i;
  report.axis = axis;
  report.basis_axis = basis_axis;

  const auto basis = full_labeled_basis(n, basis_axis);
  const Matrix elems = in_basis(basis, single_spin_operator(axis, i, n));
  const HalfInt zero;
  const HalfInt one = HalfInt::from_int(1);

  for (std::size_t r = 0; r < basis.size(); ++r) {
    const HalfInt j_bra = basis[r].path.final_j();
    for (std::size_t c = 0; c < basis.size(); ++c) {
      ++report.pairs_checked;
      const HalfInt j_ket = basis[c].path.final_j();
      const cplx value = elems(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      const double mag = std::abs(value);

      if (std::abs(j_bra.twice() - j_ket.twice()) > 2) {
        report.worst_delta_j = std::max(report.worst_delta_j, mag);
      }
      if (j_bra == zero && j_ket == zero) {
        report.worst_ground_block = std::max(report.worst_ground_block, mag);
      }
      if ((j_bra == zero && j_ket != one) || (j_ket == zero && j_bra != one)) {
        report.worst_ground_exit = std::max(report.worst_ground_exit, mag);
      }
      if (mag > report.threshold) {
        report.nonzero.push_back(
            ElementEntry{basis[r].path, basis[r].m, basis[c].path, basis[c].m, value});
        ++report.sector_counts[{j_bra, j_ket}];
        if (basis[r].m != basis[c].m) ++report.m_mixing_count;
      }
    }
  }
  return report;
}

Matrix ground_block(const DenseOperator& op) {
  const int n = op.qubits();
  if (n % 2 != 0) throw std::invalid_argument("J_n = 0 states exist only for even n");
  std::vector<LabeledState> ground;
  for (const auto& path : enumerate_paths(n, HalfInt{})) {
    ground.push_back(build_basis_state(path, HalfInt{}));
  }
  return in_basis(ground, op);
}

bool is_scalar_block(const Matrix& block, double tol) {
  if (block.rows() != block.cols() || block.rows() == 0) return false;
  const cplx c = block.trace() / static_cast<double>(block.rows());
  const Matrix scalar = c * Matrix::Identity(block.rows(), block.cols());
  return max_abs_diff(block, scalar) <= tol;
}

ErrorDetectionResult error_detection_check() {
  constexpr int n = 4;
  ErrorDetectionResult result;
  for (int i = 1; i <= n; ++i) {
    for (Axis a : kAllAxes) {
      const double norm = max_abs(ground_block(single_spin_operator(a, i, n)));
      result.block_norms.push_back(norm);
      result.worst_block_norm = std::max(result.worst_block_norm, norm);
    }
  }
  result.passed = result.worst_block_norm < kZeroTol;
  return result;
}

double exchange_conjugation_check(int i, int n, Axis axis) {
  if (i < 1 || i >= n) {
    throw std::invalid_argument("exchange conjugation needs 1 <= i < n (i = n is the identity)");
  }
  const DenseOperator e = exchange_operator(i, n, n);
  const DenseOperator conjugated = e * single_spin_operator(axis, n, n) * e;
  return max_abs_diff(single_spin_operator(axis, i, n), conjugated);
}

}  // namespace supercoherence
