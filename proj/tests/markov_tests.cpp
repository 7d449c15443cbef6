#include <catch2/catch_amalgamated.hpp>

#include <stochcube/actions.hpp>
#include <stochcube/markov.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace stochcube;

TEST_CASE("bivariate model structure") {
  testgen::Rng rng(401);
  const auto p = testgen::cs12(3, rng);
  const Matrix p1 = accompanying_first(p).matrix();
  const Matrix p2 = accompanying_second(p).matrix();

  SECTION("both blocks of a row are the same accompanying matrix") {
    const BlockModel m = build_bivariate(p, testgen::lambda4(rng));
    REQUIRE(max_abs_diff(m.block(0, 0).matrix(), m.block(0, 1).matrix()) == 0.0);
    REQUIRE(max_abs_diff(m.block(1, 0).matrix(), m.block(1, 1).matrix()) == 0.0);
    REQUIRE(max_abs_diff(m.block(0, 0).matrix(), p1) == 0.0);
    REQUIRE(max_abs_diff(m.block(1, 1).matrix(), p2) == 0.0);
  }

  SECTION("identity lambda places the marginals on the diagonal") {
    const BlockModel m = build_bivariate(p, {1.0, 0.0, 0.0, 1.0});
    const Matrix q = m.assembled();
    const Matrix expected = oracle::block_diag(p1, p2);
    REQUIRE(max_abs_diff(q, expected) == 0.0);
  }

  SECTION("equal lambda halves every block") {
    const BlockModel m = build_bivariate(p, {0.5, 0.5, 0.5, 0.5});
    const Matrix q = m.assembled();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        REQUIRE(q.at(i, j) == 0.5 * p1.at(i, j));
        REQUIRE(q.at(3 + i, j) == 0.5 * p2.at(i, j));
      }
  }

  SECTION("uniform tensor gives uniform blocks") {
    const CubicStochastic12 u{Cubic(2, 0.25)};
    const BlockModel m = build_bivariate(u, {0.25, 0.75, 0.5, 0.5});
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (double v : m.block(j, k).matrix().values()) REQUIRE(v == 0.5);
  }

  SECTION("assembled matrix need not be column stochastic") {
    const BlockModel m = build_bivariate(p, {1.0, 0.0, 1.0, 0.0});
    const Matrix q = m.assembled();
    double col3 = 0.0;
    for (int i = 0; i < 6; ++i) col3 += q.at(i, 3);
    REQUIRE(col3 == 0.0);  // all mass sits in the first block column
    REQUIRE_FALSE(validate_column_stochastic(q).ok);
  }

  SECTION("invalid lambda rows are rejected") {
    REQUIRE_THROWS_AS(build_bivariate(p, {0.5, 0.6, 0.5, 0.5}), DomainError);
    REQUIRE_THROWS_AS(build_bivariate(p, {-0.1, 1.1, 0.5, 0.5}), DomainError);
    REQUIRE_THROWS_AS(build_bivariate(p, {0.5, 0.5, 0.5}), ShapeError);
  }
}

TEST_CASE("general block models") {
  testgen::Rng rng(403);

  SECTION("s=1 assembles to the single block") {
    const auto a = testgen::stochastic_matrix(3, rng);
    const BlockModel m = build_general({a}, {1.0}, 1);
    REQUIRE(max_abs_diff(m.assembled(), a.matrix()) == 0.0);
  }

  SECTION("s=2 with accompanying blocks equals build_bivariate") {
    const auto p = testgen::cs12(3, rng);
    const auto lambda = testgen::lambda4(rng);
    const auto p1 = accompanying_first(p);
    const auto p2 = accompanying_second(p);
    const BlockModel general = build_general({p1, p1, p2, p2}, lambda, 2);
    const BlockModel bivariate = build_bivariate(p, lambda);
    REQUIRE(max_abs_diff(general.assembled(), bivariate.assembled()) == 0.0);
  }

  SECTION("s=3 lambda rows re-validate") {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 4);
      std::vector<StochasticMatrix> blocks;
      for (int b = 0; b < 9; ++b)
        blocks.push_back(testgen::stochastic_matrix(n, rng));
      std::vector<double> lambda(9);
      for (int r = 0; r < 3; ++r) {
        double a = u(rng), b = u(rng);
        if (a + b > 1.0) {
          a = a / 2.0;
          b = b / 2.0;
        }
        lambda[3 * r] = a;
        lambda[3 * r + 1] = b;
        lambda[3 * r + 2] = 1.0 - a - b;
      }
      const BlockModel m = build_general(blocks, lambda, 3);
      for (int r = 0; r < 3; ++r) {
        double row = 0.0;
        for (int c = 0; c < 3; ++c) row += m.lambda(r, c);
        REQUIRE_THAT(row, Catch::Matchers::WithinAbs(1.0, 1e-12));
      }
    }
  }

  SECTION("mixed block dimensions are a shape error") {
    const auto a = testgen::stochastic_matrix(2, rng);
    const auto b = testgen::stochastic_matrix(3, rng);
    REQUIRE_THROWS_AS(build_general({a, a, b, a}, {0.5, 0.5, 0.5, 0.5}, 2),
                      ShapeError);
  }
}

TEST_CASE("step") {
  testgen::Rng rng(405);

  SECTION("identity blocks fix states with equal parts under any lambda") {
    // each output part is a convex combination of copies of the same vector
    const auto id = StochasticMatrix::identity(3);
    const BlockModel m = build_general({id, id, id, id},
                                       testgen::lambda4(rng), 2);
    const SimplexVector v = testgen::simplex(3, rng);
    StackedState x{{v, v}};
    const StackedState y = step(m, x);
    for (int j = 0; j < 2; ++j) {
      for (int i = 0; i < 3; ++i) {
        REQUIRE_THAT(y.parts[j].at(i),
                     Catch::Matchers::WithinAbs(v.at(i), 1e-15));
      }
    }
  }

  SECTION("identity blocks with diagonal lambda fix every state") {
    const auto id = StochasticMatrix::identity(3);
    const BlockModel m = build_general({id, id, id, id},
                                       {1.0, 0.0, 0.0, 1.0}, 2);
    StackedState x{{testgen::simplex(3, rng), testgen::simplex(3, rng)}};
    const StackedState y = step(m, x);
    for (int j = 0; j < 2; ++j) {
      for (int i = 0; i < 3; ++i) {
        REQUIRE(y.parts[j].at(i) == x.parts[j].at(i));
      }
    }
  }

  SECTION("n=1 collapses to the scalar 1") {
    const auto p = testgen::cs12(1, rng);
    const BlockModel m = build_bivariate(p, testgen::lambda4(rng));
    StackedState x{{SimplexVector({1.0}), SimplexVector({1.0})}};
    const StackedState y = step(m, x);
    REQUIRE(y.parts[0].at(0) == 1.0);
    REQUIRE(y.parts[1].at(0) == 1.0);
  }

  SECTION("parts stay on the simplex") {
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 5);
      const auto p = testgen::cs12(n, rng);
      const BlockModel m = build_bivariate(p, testgen::lambda4(rng));
      StackedState x{{testgen::simplex(n, rng), testgen::simplex(n, rng)}};
      const StackedState y = step(m, x);
      for (const auto& part : y.parts) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
          REQUIRE(part.at(i) >= 0.0);
          sum += part.at(i);
        }
        REQUIRE(std::abs(sum - 1.0) <= 1e-12);
      }
    }
  }

  SECTION("dimension mismatch throws") {
    const auto p = testgen::cs12(2, rng);
    const BlockModel m = build_bivariate(p, {0.5, 0.5, 0.5, 0.5});
    StackedState bad{{testgen::simplex(3, rng), testgen::simplex(3, rng)}};
    REQUIRE_THROWS_AS(step(m, bad), ShapeError);
  }
}

TEST_CASE("stepping an induced chain is the diagonal action on parts") {
  testgen::Rng rng(407);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const auto a = testgen::stochastic_matrix(n, rng);
    const auto p = testgen::cs12(n, rng);
    const auto lambda = testgen::lambda4(rng);
    StackedState x{{testgen::simplex(n, rng), testgen::simplex(n, rng)}};

    const StackedState base = step(build_bivariate(p, lambda), x);
    const StackedState q1 = step(induced_chain(a, p, lambda, ChainKind::Q1), x);

    for (int i = 0; i < n; ++i) {
      double applied = 0.0;
      for (int c = 0; c < n; ++c) applied += a.at(i, c) * base.parts[0].at(c);
      REQUIRE_THAT(q1.parts[0].at(i),
                   Catch::Matchers::WithinAbs(applied, 1e-12));
      REQUIRE_THAT(q1.parts[1].at(i),
                   Catch::Matchers::WithinAbs(base.parts[1].at(i), 1e-12));
    }
  }
}

TEST_CASE("iterate") {
  testgen::Rng rng(409);

  SECTION("a fixed point converges at the first step") {
    const auto id = StochasticMatrix::identity(2);
    const BlockModel m = build_general({id, id, id, id}, {1.0, 0.0, 0.0, 1.0},
                                       2);
    StackedState x{{SimplexVector({0.3, 0.7}), SimplexVector({0.9, 0.1})}};
    const IterateResult res = iterate(m, x);
    REQUIRE(res.converged);
    REQUIRE(res.steps == 1);
    REQUIRE(res.state.parts[0].at(0) == 0.3);
    REQUIRE(res.state.parts[1].at(1) == 0.1);
  }

  SECTION("uniform blocks map everything to uniform at once") {
    const CubicStochastic12 u{Cubic(2, 0.25)};
    const BlockModel m = build_bivariate(u, {0.5, 0.5, 0.5, 0.5});
    StackedState x{{SimplexVector({1.0, 0.0}), SimplexVector({0.2, 0.8})}};
    const StackedState one = step(m, x);
    for (const auto& part : one.parts) {
      REQUIRE_THAT(part.at(0), Catch::Matchers::WithinAbs(0.5, 1e-15));
      REQUIRE_THAT(part.at(1), Catch::Matchers::WithinAbs(0.5, 1e-15));
    }
    const IterateResult res = iterate(m, x);
    REQUIRE(res.converged);
    REQUIRE(res.steps <= 2);
    REQUIRE_THAT(res.state.parts[0].at(0),
                 Catch::Matchers::WithinAbs(0.5, 1e-12));
  }

  SECTION("strictly positive random models settle within the defaults") {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 3);
      // mix with the uniform tensor to keep every entry strictly positive
      const auto p = convex_combine(
          testgen::cs12(n, rng),
          CubicStochastic12{Cubic(n, 1.0 / (n * n))}, 0.7);
      const BlockModel m = build_bivariate(p, {0.4, 0.6, 0.7, 0.3});
      StackedState x{{testgen::simplex(n, rng), testgen::simplex(n, rng)}};
      const IterateResult res = iterate(m, x);
      REQUIRE(res.converged);
      REQUIRE(res.steps < 10000);
    }
  }

  SECTION("non-convergence is reported, not thrown") {
    // period-2 swap: blocks are the 2-cycle permutation matrix
    const StochasticMatrix swap(Matrix(2, 2, {0.0, 1.0, 1.0, 0.0}));
    const BlockModel m = build_general({swap, swap, swap, swap},
                                       {1.0, 0.0, 0.0, 1.0}, 2);
    StackedState x{{SimplexVector({1.0, 0.0}), SimplexVector({1.0, 0.0})}};
    const IterateResult res = iterate(m, x, 50, 1e-10);
    REQUIRE_FALSE(res.converged);
    REQUIRE(res.steps == 50);
  }

  SECTION("parameter domain checks") {
    const auto p = testgen::cs12(2, rng);
    const BlockModel m = build_bivariate(p, {0.5, 0.5, 0.5, 0.5});
    StackedState x{{testgen::simplex(2, rng), testgen::simplex(2, rng)}};
    REQUIRE_THROWS_AS(iterate(m, x, 0, 1e-10), DomainError);
    REQUIRE_THROWS_AS(iterate(m, x, 10, 0.0), DomainError);
  }
}
