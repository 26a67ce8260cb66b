#include <gtest/gtest.h>

#include "oracles.hpp"
#include "supercoherence/irrep_basis.hpp"

using namespace supercoherence;

namespace {

SpinPath path_of(std::initializer_list<int> twice) {
  SpinPath p;
  for (int t : twice) p.steps.push_back(HalfInt::from_twice(t));
  return p;
}

}  // namespace

TEST(HalfInt, Formatting) {
  EXPECT_EQ(HalfInt::from_twice(1).to_string(), "1/2");
  EXPECT_EQ(HalfInt::from_twice(-3).to_string(), "-3/2");
  EXPECT_EQ(HalfInt::from_int(2).to_string(), "2");
  EXPECT_DOUBLE_EQ(HalfInt::from_twice(3).value(), 1.5);
}

TEST(Paths, FourQubitSinglets) {
  const auto paths = enumerate_paths(4, HalfInt{});
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0], path_of({1, 0, 1, 0}));
  EXPECT_EQ(paths[1], path_of({1, 2, 1, 0}));
}

TEST(Paths, KnownCounts) {
  EXPECT_EQ(enumerate_paths(8, HalfInt{}).size(), 14u);
  EXPECT_EQ(enumerate_paths(1, kHalf).size(), 1u);
  EXPECT_EQ(enumerate_paths(6, HalfInt{}).size(), 5u);
}

TEST(Paths, ParityMismatchIsEmpty) {
  EXPECT_TRUE(enumerate_paths(4, kHalf).empty());
  EXPECT_TRUE(enumerate_paths(3, HalfInt{}).empty());
  EXPECT_TRUE(enumerate_paths(4, HalfInt::from_int(3)).empty());
  EXPECT_TRUE(enumerate_paths(4, HalfInt::from_int(-1)).empty());
}

TEST(Paths, CountsMatchBruteForceAndFormula) {
  for (int n = 1; n <= 10; ++n)
    for (int tj = 0; tj <= n; ++tj) {
      const auto paths = enumerate_paths(n, HalfInt::from_twice(tj));
      EXPECT_EQ(static_cast<long long>(paths.size()), oracle::brute_force_paths(n, tj));
      EXPECT_EQ(static_cast<long long>(paths.size()), oracle::irrep_multiplicity(n, tj));
    }
}

TEST(Paths, SingletCountMatchesEigenMultiplicity) {
  for (int n = 2; n <= 8; n += 2) {
    const auto s2 = total_spin_squared(n, n);
    EXPECT_EQ(static_cast<int>(enumerate_paths(n, HalfInt{}).size()),
              oracle::eigen_multiplicity(s2.matrix(), 0.0))
        << "n=" << n;
  }
}

TEST(Paths, LexicographicAndValid) {
  for (int n = 1; n <= 8; ++n) {
    const auto all = enumerate_all_paths(n);
    for (std::size_t k = 0; k < all.size(); ++k) {
      EXPECT_TRUE(all[k].is_valid());
      if (k) {
        EXPECT_LT(all[k - 1], all[k]);
      }
    }
  }
  EXPECT_FALSE(path_of({1, 3}).is_valid());
  EXPECT_FALSE(path_of({0, 1}).is_valid());
  EXPECT_FALSE(path_of({1, 0, -1}).is_valid());
  EXPECT_EQ(path_of({1, 0, 1, 0}).to_string(), "1/2;0;1/2;0");
}

TEST(IrrepTable, SmallCases) {
  const auto t4 = irrep_table(4);
  ASSERT_EQ(t4.rows.size(), 3u);
  EXPECT_EQ(t4.rows[0].multiplicity, 2);
  EXPECT_EQ(t4.rows[1].multiplicity, 3);
  EXPECT_EQ(t4.rows[2].multiplicity, 1);
  EXPECT_EQ(t4.total_dimension(), 16);

  const auto t2 = irrep_table(2);
  ASSERT_EQ(t2.rows.size(), 2u);
  EXPECT_EQ(t2.rows[0].multiplicity, 1);
  EXPECT_EQ(t2.rows[1].multiplicity, 1);

  const auto t3 = irrep_table(3);
  ASSERT_EQ(t3.rows.size(), 2u);
  EXPECT_EQ(t3.rows[0].j, kHalf);
  EXPECT_EQ(t3.rows[0].multiplicity, 2);
  EXPECT_EQ(t3.rows[1].j, HalfInt::from_twice(3));
  EXPECT_EQ(t3.rows[1].multiplicity, 1);
}

TEST(IrrepTable, DimensionIdentity) {
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(irrep_table(n).total_dimension(), 1 << n);
}

TEST(BasisState, TwoQubitSinglet) {
  const auto s = build_basis_state(path_of({1, 0}), HalfInt{});
  Vector expected = Vector::Zero(4);
  expected(1) = 1.0 / std::sqrt(2.0);
  expected(2) = -1.0 / std::sqrt(2.0);
  EXPECT_LT((s.vector - expected).norm(), 1e-15);
}

TEST(BasisState, TripletHighestWeight) {
  const auto s = build_basis_state(path_of({1, 2}), HalfInt::from_int(1));
  Vector expected = Vector::Zero(4);
  expected(0) = 1.0;
  EXPECT_LT((s.vector - expected).norm(), 1e-15);
}

TEST(BasisState, InvalidInputsThrow) {
  EXPECT_THROW(build_basis_state(path_of({1, 0}), HalfInt::from_int(1)), std::invalid_argument);
  EXPECT_THROW(build_basis_state(path_of({1, 3}), kHalf), std::invalid_argument);
  EXPECT_THROW(build_basis_state(path_of({1, 2}), kHalf), std::invalid_argument);
}

TEST(FullBasis, OrthonormalAndLabelled) {
  for (int n = 1; n <= 6; ++n)
    for (Axis a : kAllAxes) {
      const auto basis = full_labeled_basis(n, a);
      ASSERT_EQ(basis.size(), std::size_t{1} << n);
      const Matrix b = basis_matrix(basis);
      const Eigen::Index d = b.rows();
      EXPECT_LT(max_abs_diff(b.adjoint() * b, Matrix::Identity(d, d)), 1e-12);
      EXPECT_LT(max_abs_diff(b * b.adjoint(), Matrix::Identity(d, d)), 1e-10);
      for (const auto& s : basis) {
        EXPECT_NEAR(s.vector.norm(), 1.0, 1e-12);
        EXPECT_LT(label_residual(s), 1e-10);
      }
    }
}

TEST(FullBasis, EightQubitsBuilds) {
  const auto basis = full_labeled_basis(8);
  EXPECT_EQ(basis.size(), 256u);
  const Matrix b = basis_matrix(basis);
  EXPECT_LT(max_abs_diff(b.adjoint() * b, Matrix::Identity(256, 256)), 1e-10);
}

TEST(FullBasis, SmallCounts) {
  const auto b2 = full_labeled_basis(2);
  ASSERT_EQ(b2.size(), 4u);
  int singlets = 0;
  for (const auto& s : b2) singlets += s.path.final_j() == HalfInt{};
  EXPECT_EQ(singlets, 1);

  int ground = 0;
  for (const auto& s : full_labeled_basis(4)) ground += s.path.final_j() == HalfInt{};
  EXPECT_EQ(ground, 2);
}

// The x/y-axis basis is related to the z basis by a unitary commuting with
// every (S^(k))^2; J_n = 0 states are rotation invariant.
TEST(FullBasis, ChangeOfAxis) {
  for (int n : {2, 3, 4}) {
    const Matrix bz = basis_matrix(full_labeled_basis(n, Axis::z));
    for (Axis a : {Axis::x, Axis::y}) {
      const Matrix ba = basis_matrix(full_labeled_basis(n, a));
      const Matrix u = ba * bz.adjoint();
      const Eigen::Index d = u.rows();
      EXPECT_LT(max_abs_diff(u.adjoint() * u, Matrix::Identity(d, d)), 1e-12);
      for (int k = 1; k <= n; ++k) {
        const Matrix s2 = total_spin_squared(k, n).matrix();
        EXPECT_LT(max_abs_diff(u * s2, s2 * u), 1e-10);
      }
      const auto rot = global_rotation(a, n).matrix();
      EXPECT_LT(max_abs_diff(rot * partial_collective_spin(Axis::z, n, n).matrix() * rot.adjoint(),
                             partial_collective_spin(a, n, n).matrix()),
                1e-12);
    }
  }
  const auto gz = build_basis_state(path_of({1, 0, 1, 0}), HalfInt{}, Axis::z);
  const auto gx = build_basis_state(path_of({1, 0, 1, 0}), HalfInt{}, Axis::x);
  EXPECT_NEAR(std::abs(gz.vector.dot(gx.vector)), 1.0, 1e-12);
}
