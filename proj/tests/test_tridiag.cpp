#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <random>

#include "sasmig/tridiag.hpp"
#include "test_util.hpp"

using namespace sasmig;
using testutil::dense_H;
using testutil::random_vector;

TEST_CASE("apply_H matches the stencil rows") {
  Vector u(3);
  u << 0.0, 1.0, 2.0;
  const Vector hu = apply_H(u);
  CHECK(hu(0) == doctest::Approx(-1.0));
  CHECK(hu(1) == doctest::Approx(0.0));
  CHECK(hu(2) == doctest::Approx(1.0));
}

TEST_CASE("constants are the nullspace of H") {
  const Vector u = Vector::Constant(17, 3.75);
  CHECK(apply_H(u).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("H is positive semidefinite on random vectors") {
  std::mt19937 rng(11);
  for (int t = 0; t < 100; ++t) {
    const Vector u = random_vector(rng, 2 + t % 40);
    CHECK(u.dot(apply_H(u)) >= -1e-14 * u.squaredNorm());
  }
}

TEST_CASE("apply_H rejects short vectors") {
  CHECK_THROWS_AS(apply_H(Vector::Ones(1)), std::invalid_argument);
}

TEST_CASE("gamma = 0 returns the right-hand side unchanged") {
  std::mt19937 rng(3);
  const Vector b = random_vector(rng, 13);
  const Vector u = solve_shifted(TridiagSystem{13, 0.0}, b);
  CHECK((u - b).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("constant right-hand sides are fixed points for any gamma") {
  const Vector b = Vector::Constant(9, -2.5);
  for (double gamma : {0.1, 1.0, 7.3}) {
    const Vector u = solve_shifted(TridiagSystem{9, gamma}, b);
    CHECK((u - b).lpNorm<Eigen::Infinity>() <= 1e-14);
  }
}

TEST_CASE("solve matches dense elimination, n = 8, gamma = 0.7") {
  std::mt19937 rng(5);
  const Index n = 8;
  const double gamma = 0.7;
  const Vector b = random_vector(rng, n);
  const Matrix A = Matrix::Identity(n, n) + gamma * dense_H(n);
  const Vector expect = A.partialPivLu().solve(b);
  const Vector got = solve_shifted(TridiagSystem{n, gamma}, b);
  CHECK((got - expect).lpNorm<Eigen::Infinity>() <= 1e-12 * b.lpNorm<Eigen::Infinity>());
}

TEST_CASE("solve matches dense elimination on 200 random systems") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<Index> size(2, 64);
  std::uniform_real_distribution<double> gam(0.0, 10.0);
  for (int t = 0; t < 200; ++t) {
    const Index n = size(rng);
    const double gamma = gam(rng);
    const Vector b = random_vector(rng, n);
    const Matrix A = Matrix::Identity(n, n) + gamma * dense_H(n);
    const Vector expect = A.partialPivLu().solve(b);
    const Vector got = solve_shifted(TridiagSystem{n, gamma}, b);
    CHECK((got - expect).lpNorm<Eigen::Infinity>() <=
          1e-12 * b.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("residual bound holds") {
  std::mt19937 rng(23);
  for (int t = 0; t < 50; ++t) {
    const Index n = 2 + (t * 7) % 60;
    const double gamma = 0.2 * t;
    const Vector b = random_vector(rng, n);
    const Vector u = solve_shifted(TridiagSystem{n, gamma}, b);
    const Vector residual = u + gamma * apply_H(u) - b;
    CHECK(residual.lpNorm<Eigen::Infinity>() <= 1e-12 * b.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("max principle: the solve never amplifies the sup norm") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> gam(0.0, 10.0);
  for (int t = 0; t < 100; ++t) {
    const Index n = 2 + t % 50;
    const Vector b = random_vector(rng, n);
    const Vector u = solve_shifted(TridiagSystem{n, gam(rng)}, b);
    const double nb = b.lpNorm<Eigen::Infinity>();
    CHECK(u.lpNorm<Eigen::Infinity>() <= nb * (1.0 + 1e-12));
  }
}

TEST_CASE("the shifted inverse is symmetric") {
  std::mt19937 rng(31);
  for (int t = 0; t < 50; ++t) {
    const Index n = 2 + t;
    const double gamma = 0.3 + 0.1 * t;
    const Vector a = random_vector(rng, n);
    const Vector b = random_vector(rng, n);
    const TridiagSystem sys{n, gamma};
    const double lhs = solve_shifted(sys, a).dot(b);
    const double rhs = a.dot(solve_shifted(sys, b));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * a.norm() * b.norm());
  }
}

TEST_CASE("prefactored solver reuses across right-hand sides") {
  std::mt19937 rng(37);
  const Index n = 32;
  const ShiftedHSolver solver(n, 2.5);
  for (int t = 0; t < 10; ++t) {
    Vector x = random_vector(rng, n);
    const Vector b = x;
    solver.solve_inplace(x);
    const Vector residual = x + 2.5 * apply_H(x) - b;
    CHECK(residual.lpNorm<Eigen::Infinity>() <= 1e-12 * b.lpNorm<Eigen::Infinity>());
  }
}
