#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "voiga/bspline_basis.hpp"
#include "voiga/knot_vector.hpp"
#include "voiga/quadrature.hpp"
#include "voiga/refine.hpp"

using namespace voiga;

namespace {

// Independent Cox-de Boor recursion, written directly from the recursive
// definition. Deliberately naive; used only as an oracle.
double cox_de_boor(const std::vector<double>& U, int i, int p, double xi) {
  if (p == 0) {
    const bool last = (static_cast<size_t>(i + 2) == U.size() ||
                       (U[static_cast<size_t>(i + 1)] == U.back() &&
                        xi == U.back()));
    if (last) return (xi >= U[static_cast<size_t>(i)] && xi <= U[static_cast<size_t>(i + 1)]) ? 1.0 : 0.0;
    return (xi >= U[static_cast<size_t>(i)] && xi < U[static_cast<size_t>(i + 1)]) ? 1.0 : 0.0;
  }
  double a = 0.0, b = 0.0;
  const double d1 = U[static_cast<size_t>(i + p)] - U[static_cast<size_t>(i)];
  const double d2 = U[static_cast<size_t>(i + p + 1)] - U[static_cast<size_t>(i + 1)];
  if (d1 > 0.0) a = (xi - U[static_cast<size_t>(i)]) / d1 * cox_de_boor(U, i, p - 1, xi);
  if (d2 > 0.0)
    b = (U[static_cast<size_t>(i + p + 1)] - xi) / d2 * cox_de_boor(U, i + 1, p - 1, xi);
  return a + b;
}

KnotVector kv_example() {
  return KnotVector({0, 0, 0, 1, 2, 3, 4, 5, 5, 5}, 2);
}

}  // namespace

TEST(KnotVector, FindSpanExamples) {
  EXPECT_EQ(kv_example().find_span(2.5), 4);
  KnotVector lin({0, 0, 1, 1}, 1);
  EXPECT_EQ(lin.find_span(1.0), 1);  // right-end rule: last non-empty span
  EXPECT_EQ(kv_example().find_span(0.0), 2);
  EXPECT_THROW(kv_example().find_span(-0.1), DomainError);
  EXPECT_THROW(kv_example().find_span(5.1), DomainError);
}

TEST(KnotVector, Validation) {
  EXPECT_THROW(KnotVector({0, 0, 1, 0, 2, 2}, 1), ConstructionError);
  EXPECT_THROW(KnotVector({0, 0, 0, 1, 1, 1}, 1), ConstructionError);  // not clamped for p=1
  EXPECT_THROW(KnotVector({0, 0, 0, 1, 1, 1, 2, 2, 2}, 2), ConstructionError);  // interior mult > p
  EXPECT_EQ(kv_example().num_basis(), 7);
  EXPECT_EQ(kv_example().num_spans(), 5);
}

TEST(Basis, LinearHatSymmetry) {
  KnotVector kv({0, 0, 1, 1}, 1);
  const auto be = eval_basis(kv, 0.5, 0);
  ASSERT_EQ(be.values.size(), 2);
  EXPECT_NEAR(be.values(0), 0.5, 1e-15);
  EXPECT_NEAR(be.values(1), 0.5, 1e-15);
}

TEST(Basis, PartitionOfUnityAndPositivity) {
  std::mt19937 rng(42);
  const std::vector<KnotVector> kvs = {
      kv_example(), KnotVector({0, 0, 0, 1, 2, 2, 2}, 2),
      KnotVector({0, 0, 0, 0, 0.5, 1, 1, 1.5, 2, 2, 2, 2}, 3),
      KnotVector({0, 0, 1, 2, 3, 3}, 1)};
  for (const auto& kv : kvs) {
    std::uniform_real_distribution<double> dist(kv.front(), kv.back());
    for (int t = 0; t < 1000; ++t) {
      const double xi = dist(rng);
      const auto be = eval_basis(kv, xi, 0);
      EXPECT_NEAR(be.values.sum(), 1.0, 1e-12);
      EXPECT_GE(be.values.minCoeff(), -1e-14);
    }
  }
}

TEST(Basis, MatchesRecursionOracle) {
  KnotVector kv({0, 0, 0, 1, 2, 2, 2}, 2);
  const double xi = 0.7;
  const auto be = eval_basis(kv, xi, 0);
  for (int j = 0; j <= 2; ++j) {
    const int i = be.first_index(2) + j;
    EXPECT_NEAR(be.values(j), cox_de_boor(kv.knots(), i, 2, xi), 1e-14);
  }
  // Sweep over all basis functions and many parameters on another vector.
  std::mt19937 rng(7);
  const auto kv2 = kv_example();
  std::uniform_real_distribution<double> dist(kv2.front(), kv2.back());
  for (int t = 0; t < 200; ++t) {
    const double u = dist(rng);
    const auto b = eval_basis(kv2, u, 0);
    VecX full = VecX::Zero(kv2.num_basis());
    for (int j = 0; j <= kv2.degree(); ++j)
      full(b.first_index(kv2.degree()) + j) = b.values(j);
    for (int i = 0; i < kv2.num_basis(); ++i)
      EXPECT_NEAR(full(i), cox_de_boor(kv2.knots(), i, 2, u), 1e-13);
  }
}

TEST(Basis, DerivativesSumToZeroAndMatchFD) {
  std::mt19937 rng(3);
  const auto kv = kv_example();
  std::uniform_real_distribution<double> dist(kv.front() + 0.01, kv.back() - 0.01);
  const double h = 1e-6;
  for (int t = 0; t < 200; ++t) {
    const double u = dist(rng);
    const auto b = eval_basis(kv, u, 2);
    EXPECT_NEAR(b.ders.row(1).sum(), 0.0, 1e-10);
    EXPECT_NEAR(b.ders.row(2).sum(), 0.0, 1e-10);
    const auto bp = eval_basis(kv, u + h, 0);
    const auto bm = eval_basis(kv, u - h, 0);
    if (bp.span != b.span || bm.span != b.span) continue;  // crossed a knot
    for (int j = 0; j <= kv.degree(); ++j) {
      const double fd = (bp.values(j) - bm.values(j)) / (2 * h);
      const double scale = std::max(1.0, std::abs(b.ders(1, j)));
      EXPECT_NEAR(b.ders(1, j), fd, 1e-6 * scale);
    }
  }
}

TEST(Basis, SecondDerivativeSupported) {
  KnotVector kv({0, 0, 0, 1, 1, 1}, 2);  // single quadratic Bezier span
  const auto b = eval_basis(kv, 0.3, 2);
  // N = [(1-u)^2, 2u(1-u), u^2]; N'' = [2, -4, 2].
  EXPECT_NEAR(b.ders(2, 0), 2.0, 1e-12);
  EXPECT_NEAR(b.ders(2, 1), -4.0, 1e-12);
  EXPECT_NEAR(b.ders(2, 2), 2.0, 1e-12);
}

TEST(InsertKnot, LinearInterpolation) {
  HomogeneousCurve c{KnotVector({0, 0, 1, 1}, 1),
                     {to_homogeneous({0, 0, 0}, 1), to_homogeneous({1, 0, 0}, 1)}};
  const auto r = insert_knot(c, 0.5);
  ASSERT_EQ(r.ctrl.size(), 3u);
  EXPECT_NEAR(from_homogeneous(r.ctrl[1]).x(), 0.5, 1e-15);
}

TEST(InsertKnot, GeometryPreserved) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> wdist(0.5, 2.0);
  KnotVector kv({0, 0, 0, 1, 2, 3, 3, 3}, 2);
  HomogeneousCurve c;
  c.kv = kv;
  for (int i = 0; i < kv.num_basis(); ++i)
    c.ctrl.push_back(to_homogeneous({coord(rng), coord(rng), coord(rng)}, wdist(rng)));
  auto r = insert_knot(c, 1.3);
  r = insert_knot(r, 2.6, 2);
  std::uniform_real_distribution<double> par(0.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    const double u = par(rng);
    EXPECT_LT((eval_homogeneous_curve(c, u) - eval_homogeneous_curve(r, u)).norm(), 1e-10);
  }
}

TEST(InsertKnot, MultiplicityIncreaseDropsToC0) {
  KnotVector kv({0, 0, 0, 1, 2, 2, 2}, 2);
  HomogeneousCurve c;
  c.kv = kv;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int i = 0; i < kv.num_basis(); ++i)
    c.ctrl.push_back(to_homogeneous({coord(rng), coord(rng), coord(rng)}, 1.0));
  const auto r = insert_knot(c, 1.0);  // multiplicity 1 -> 2 = p: C0
  EXPECT_EQ(r.kv.multiplicity(1.0), 2);
  std::uniform_real_distribution<double> par(0.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    const double u = par(rng);
    EXPECT_LT((eval_homogeneous_curve(c, u) - eval_homogeneous_curve(r, u)).norm(), 1e-12);
  }
  EXPECT_THROW(insert_knot(r, 1.0), RefinementError);  // would exceed p
}

TEST(ElevateDegree, LineMidpoint) {
  HomogeneousCurve c{KnotVector({0, 0, 1, 1}, 1),
                     {to_homogeneous({0, 0, 0}, 1), to_homogeneous({2, 0, 0}, 1)}};
  const auto r = elevate_degree(c, 1);
  ASSERT_EQ(r.ctrl.size(), 3u);
  EXPECT_NEAR(from_homogeneous(r.ctrl[1]).x(), 1.0, 1e-14);
  EXPECT_NEAR(r.ctrl[1].w(), 1.0, 1e-14);
}

TEST(ElevateDegree, QuarterCircleStaysOnCircle) {
  // Rational quadratic quarter circle, radius 1.
  HomogeneousCurve c{KnotVector({0, 0, 0, 1, 1, 1}, 2),
                     {to_homogeneous({1, 0, 0}, 1),
                      to_homogeneous({1, 1, 0}, std::sqrt(0.5)),
                      to_homogeneous({0, 1, 0}, 1)}};
  const auto r = elevate_degree(c, 1);
  EXPECT_EQ(r.kv.degree(), 3);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> par(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double u = par(rng);
    EXPECT_NEAR(eval_homogeneous_curve(r, u).norm(), 1.0, 1e-10);
    EXPECT_LT((eval_homogeneous_curve(r, u) - eval_homogeneous_curve(c, u)).norm(), 1e-10);
  }
}

TEST(ElevateDegree, MultiSpanPreservesGeometryAndContinuity) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> wdist(0.5, 2.0);
  KnotVector kv({0, 0, 0, 0.5, 1, 1, 1.5, 2, 2, 2}, 2);  // interior mults 1,2,1
  HomogeneousCurve c;
  c.kv = kv;
  for (int i = 0; i < kv.num_basis(); ++i)
    c.ctrl.push_back(to_homogeneous({coord(rng), coord(rng), coord(rng)}, wdist(rng)));
  for (int steps = 1; steps <= 2; ++steps) {
    const auto r = elevate_degree(c, steps);
    EXPECT_EQ(r.kv.degree(), 2 + steps);
    EXPECT_EQ(r.kv.multiplicity(0.5), 1 + steps);
    EXPECT_EQ(r.kv.multiplicity(1.0), 2 + steps);
    std::uniform_real_distribution<double> par(0.0, 2.0);
    for (int t = 0; t < 50; ++t) {
      const double u = par(rng);
      EXPECT_LT((eval_homogeneous_curve(c, u) - eval_homogeneous_curve(r, u)).norm(), 1e-10);
    }
    // partition of unity survives elevation
    const auto be = eval_basis(r.kv, 0.77, 0);
    EXPECT_NEAR(be.values.sum(), 1.0, 1e-12);
  }
}

TEST(GaussLegendre, SmallRules) {
  const auto r1 = gauss_legendre(1);
  EXPECT_NEAR(r1.points[0], 0.0, 1e-15);
  EXPECT_NEAR(r1.weights[0], 2.0, 1e-15);
  const auto r2 = gauss_legendre(2);
  EXPECT_NEAR(r2.points[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r2.points[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r2.weights[0], 1.0, 1e-15);
  EXPECT_NEAR(r2.weights[1], 1.0, 1e-15);
  EXPECT_THROW(gauss_legendre(0), DomainError);
  EXPECT_THROW(gauss_legendre(201), DomainError);
}

TEST(GaussLegendre, MonomialExactness) {
  // n=5 integrates x^8 to 2/9 (spec example), and all rules integrate
  // monomials up to degree 2n-1 exactly.
  const auto r5 = gauss_legendre(5);
  double v = 0.0;
  for (int i = 0; i < 5; ++i) v += r5.weights[static_cast<size_t>(i)] * std::pow(r5.points[static_cast<size_t>(i)], 8);
  EXPECT_NEAR(v, 2.0 / 9.0, 1e-12);

  for (int n : {1, 2, 3, 7, 16, 64, 200}) {
    const auto r = gauss_legendre(n);
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-12);
    for (size_t i = 0; i < r.points.size(); ++i)
      EXPECT_NEAR(r.points[i], -r.points[r.points.size() - 1 - i], 1e-14);
    const int kmax = std::min(2 * n - 1, 40);
    for (int k = 0; k <= kmax; ++k) {
      double integral = 0.0;
      for (int i = 0; i < n; ++i)
        integral += r.weights[static_cast<size_t>(i)] * std::pow(r.points[static_cast<size_t>(i)], k);
      const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(integral, exact, 1e-12) << "n=" << n << " k=" << k;
    }
  }
}
