#include <doctest.h>

#include <random>

#include "hyperred/nnls.hpp"
#include "support/oracles.hpp"

using namespace hyperred;

TEST_SUITE_BEGIN("nnls");

TEST_CASE("identity constraint matrix") {
  Vector b(2);
  b << 2, 3;
  const auto res = nnls_lawson_hanson(Matrix::Identity(2, 2), b, 1e-10);
  CHECK(res.x(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.x(1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(res.residual <= 1e-12);
  CHECK(res.converged);
}

TEST_CASE("nonnegativity forces zero") {
  Matrix a(1, 1);
  a << 1;
  Vector b(1);
  b << -1;
  const auto res = nnls_lawson_hanson(a, b, 1e-10);
  CHECK(res.x(0) == 0.0);
  CHECK(res.residual == doctest::Approx(1.0));
  CHECK(res.converged);  // dual criterion holds at x = 0
  CHECK(res.dual_converged);
}

TEST_CASE("tie breaks to the lowest index") {
  Matrix a(1, 2);
  a << 1, 1;
  Vector b(1);
  b << 1;
  const auto res = nnls_lawson_hanson(a, b, 1e-10);
  CHECK(res.x(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.x(1) == 0.0);
  CHECK(res.residual <= 1e-12);
}

TEST_CASE("both stopping criteria are reported") {
  std::mt19937 gen(5);
  const Matrix a = oracles::random_matrix(4, 3, gen);
  Vector b = a * Vector::Ones(3);  // exactly representable
  const auto res = nnls_lawson_hanson(a, b, 1e-8);
  CHECK(res.converged);
  CHECK((res.dual_converged || res.residual_converged));
}

TEST_CASE("max_iter exceeded returns best iterate flagged non-converged") {
  std::mt19937 gen(6);
  const Matrix a = oracles::random_matrix(6, 8, gen);
  const Vector b = oracles::random_vector(6, gen);
  const auto res = nnls_lawson_hanson(a, b, 1e-14, /*max_iter=*/1);
  CHECK(!res.converged);
  CHECK(res.iterations <= 1);
  CHECK((res.x.array() >= 0.0).all());
}

TEST_CASE("max_support caps the passive set") {
  std::mt19937 gen(7);
  const Matrix a = oracles::random_matrix(6, 8, gen);
  const Vector b = oracles::random_vector(6, gen);
  const auto res = nnls_lawson_hanson(a, b, 1e-12, 0, /*max_support=*/2);
  Index nonzeros = 0;
  for (Index i = 0; i < res.x.size(); ++i) {
    if (res.x(i) != 0.0) ++nonzeros;
  }
  CHECK(nonzeros <= 2);
  CHECK((res.capped || res.converged));
}

TEST_CASE("matches brute-force support enumeration on random problems") {
  std::mt19937 gen(8);
  std::uniform_int_distribution<int> rows_dist(1, 6);
  std::uniform_int_distribution<int> cols_dist(1, 8);
  for (int trial = 0; trial < 60; ++trial) {
    const Index rows = rows_dist(gen);
    const Index cols = cols_dist(gen);
    const Matrix a = oracles::random_matrix(rows, cols, gen);
    const Vector b = oracles::random_vector(rows, gen);
    const auto res = nnls_lawson_hanson(a, b, 1e-12);
    CHECK((res.x.array() >= 0.0).all());
    const double best = oracles::nnls_brute_force(a, b);
    CHECK(res.residual <= best + 1e-8);
  }
}

TEST_SUITE_END();
