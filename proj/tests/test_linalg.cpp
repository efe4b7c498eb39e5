#include <gtest/gtest.h>

#include <cmath>

#include "tmnet/error.hpp"
#include "tmnet/linalg.hpp"

namespace tmnet {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

TEST(Affine, Identity) {
  const Vector y = affine(Matrix::identity(3), Vector{0, 0, 0}, Vector{1, 2, 3});
  EXPECT_EQ(y, (Vector{1, 2, 3}));
}

TEST(Affine, AndRow) {
  Matrix w = Matrix::identity(2);
  w(0, 1) = 1.0;
  EXPECT_EQ(affine(w, Vector{-1, 0}, Vector{1, 1}), (Vector{1, 1}));
}

TEST(Affine, DimensionMismatch) {
  const Matrix w(2, 3);
  EXPECT_EQ(code_of([&] { affine(w, Vector{0, 0}, Vector{1, 1}); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of([&] { affine(w, Vector{0}, Vector{1, 1, 1}); }),
            ErrorCode::kDimensionMismatch);
}

TEST(Activate, Relu) {
  EXPECT_EQ(activate(Activation::relu(), {-0.5, 0, 2}), (Vector{0, 0, 2}));
}

TEST(Activate, Satlin) {
  EXPECT_EQ(activate(Activation::satlin(), {-1, 0.5, 3}), (Vector{0, 0.5, 1}));
}

TEST(Activate, HardSoftmax) {
  const Vector y = activate(Activation::softmax_row(9999.0), {1.0, 0.5});
  EXPECT_NEAR(y[0], 1.0, 1e-12);
  EXPECT_NEAR(y[1], 0.0, 1e-12);
}

TEST(Activate, SoftmaxGainMustBePositive) {
  EXPECT_EQ(code_of([] { Activation::softmax_row(0.0); }),
            ErrorCode::kInvalidArgument);
}

TEST(Softmax, UniformOnTies) {
  const Vector y = softmax(Vector{2.0, 2.0, 2.0, 2.0}, 9999.0);
  for (double v : y) EXPECT_EQ(v, 0.25);
}

TEST(Lstsq, IdentitySystem) {
  const Matrix b(3, 2, {1, 2, 3, 4, 5, 6});
  const LstsqResult r = lstsq(Matrix::identity(3), b);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_NEAR(r.solution(i, j), b(i, j), 1e-12);
    }
  }
  EXPECT_NEAR(r.residual, 0.0, 1e-12);
  EXPECT_EQ(r.rank, 3);
}

TEST(Lstsq, Overdetermined) {
  const LstsqResult r = lstsq(Matrix(2, 1, {1, 1}), Matrix(2, 1, {0, 2}));
  EXPECT_NEAR(r.solution(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(r.residual, std::sqrt(2.0), 1e-12);
}

TEST(Lstsq, RankDeficient) {
  const Matrix a(2, 2, {1, 0, 1, 0});
  EXPECT_EQ(code_of([&] { lstsq(a, Matrix(2, 1, {1, 1})); }),
            ErrorCode::kRankDeficientSystem);
}

TEST(Lstsq, RowMismatch) {
  EXPECT_EQ(code_of([] { lstsq(Matrix::identity(2), Matrix(3, 1)); }),
            ErrorCode::kDimensionMismatch);
}

TEST(Matrix, AppendRowFixesWidth) {
  Matrix m;
  m.append_row(Vector{1, 2});
  m.append_row(Vector{3, 4});
  EXPECT_EQ(m.rows(), 2U);
  EXPECT_EQ(m(1, 0), 3.0);
  EXPECT_EQ(code_of([&] { m.append_row(Vector{1}); }),
            ErrorCode::kDimensionMismatch);
}

TEST(Matrix, Eye) {
  const Matrix m = Matrix::eye(2, 3);
  EXPECT_EQ(m.data(), (std::vector<double>{1, 0, 0, 0, 1, 0}));
}

}  // namespace
}  // namespace tmnet
