#include <doctest.h>

#include <cmath>
#include <random>

#include "egadm/fused_logistic.hpp"
#include "egadm/operators.hpp"
#include "oracles.hpp"
#include "transcriptions.hpp"

using namespace egadm;

namespace {

Vector balanced_labels(Index m) {
  Vector b(m);
  for (Index i = 0; i < m; ++i) b[i] = i % 2 ? 1.0 : -1.0;
  return b;
}

fused::FusedLogisticInstance tiny_instance(std::uint64_t seed, Index m, Index n) {
  std::mt19937_64 rng(seed);
  fused::FusedLogisticInstance inst;
  inst.A = oracle::gaussian_matrix(m, n, rng);
  inst.labels = balanced_labels(m);
  inst.x_hat = Vector::Zero(n);
  inst.seed = seed;
  return inst;
}

}  // namespace

TEST_CASE("DifferenceMatrix") {
  const fused::DifferenceMatrix l(4);
  Vector x(4);
  x << 1, 3, 3, 7;
  const Vector lx = l.apply(x);
  CHECK(lx.size() == 3);
  CHECK(lx[0] == -2.0);
  CHECK(lx[1] == 0.0);
  CHECK(lx[2] == -4.0);
  // monotone nondecreasing input gives nonpositive differences
  CHECK((lx.array() <= 0.0).all());

  std::mt19937_64 rng(501);
  const Matrix dense = l.to_dense();
  const Vector u = oracle::gaussian_vector(3, rng);
  CHECK((l.apply_transpose(u) - dense.transpose() * u).norm() <= 1e-15);
  const Vector z = oracle::gaussian_vector(4, rng);
  CHECK((l.apply(z) - dense * z).norm() <= 1e-15);
  CHECK_THROWS_AS(l.apply(u), DimensionError);
  CHECK_THROWS_AS(l.apply_transpose(z), DimensionError);
  CHECK_THROWS_AS(fused::DifferenceMatrix(0), std::invalid_argument);

  // lambda_max(L^T L) for n = 3 is 3 (eigenvalues 0, 1, 3)
  const Matrix l3 = fused::DifferenceMatrix(3).to_dense();
  const auto ev = oracle::jacobi_eigenvalues(l3.transpose() * l3);
  std::vector<double> sorted(ev.begin(), ev.end());
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::abs(sorted[0]) <= 1e-12);
  CHECK(sorted[1] == doctest::Approx(1.0));
  CHECK(sorted[2] == doctest::Approx(3.0));
}

TEST_CASE("LogisticAux: value") {
  const auto inst = tiny_instance(1, 6, 4);
  const fused::LogisticAux aux(inst.A, inst.labels);
  CHECK(aux.value(Vector::Zero(4), 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  for (Index i = 0; i < 6; ++i)
    CHECK((aux.a_hat().row(i) - inst.labels[i] * inst.A.row(i)).norm() == 0.0);

  const fused::LogisticAux pos(inst.A, Vector::Ones(6));
  CHECK(pos.value(Vector::Zero(4), 50.0) <= 1e-20);

  std::mt19937_64 rng(502);
  for (int t = 0; t < 50; ++t) {
    const Vector y = 0.3 * oracle::gaussian_vector(4, rng);
    const double c = 0.5 * oracle::gaussian_vector(1, rng)[0];
    CHECK(aux.value(y, c) ==
          doctest::Approx(oracle::naive_logistic(inst.A, inst.labels, y, c)).epsilon(1e-12));
  }

  // no overflow at extreme scores
  for (double c : {1e4, -1e4}) {
    const double v = aux.value(Vector::Zero(4), c);
    CHECK(std::isfinite(v));
    const auto g = aux.gradient(Vector::Zero(4), c);
    CHECK(std::isfinite(g.c));
    CHECK(g.y.allFinite());
  }
  CHECK(pos.value(Vector::Zero(4), -1e4) == doctest::Approx(1e4).epsilon(1e-12));
  CHECK_THROWS_AS(aux.value(Vector::Zero(3), 0.0), DimensionError);
  CHECK_THROWS_AS(fused::LogisticAux(inst.A, Vector::Ones(5)), DimensionError);
}

TEST_CASE("LogisticAux: gradient") {
  const auto inst = tiny_instance(2, 6, 4);
  const fused::LogisticAux aux(inst.A, inst.labels);
  const auto g0 = aux.gradient(Vector::Zero(4), 0.0);
  const Vector ones = Vector::Ones(6);
  CHECK((g0.y + aux.a_hat().transpose() * ones / 12.0).norm() <= 1e-15);
  // balanced labels
  CHECK(g0.c == 0.0);

  const fused::LogisticAux skew(inst.A, Vector::Ones(6));
  CHECK(skew.gradient(Vector::Zero(4), 0.0).c == doctest::Approx(-0.5));

  std::mt19937_64 rng(503);
  for (int t = 0; t < 100; ++t) {
    const Vector y = oracle::gaussian_vector(4, rng);
    const double c = oracle::gaussian_vector(1, rng)[0];
    Vector yc(5);
    yc << y, c;
    const Vector fd = oracle::central_difference(
        [&](const Vector& v) { return aux.value(v.head(4), v[4]); }, yc, 1e-5);
    const auto g = aux.gradient(y, c);
    Vector gv(5);
    gv << g.y, g.c;
    CHECK((gv - fd).norm() <= 1e-6 * std::max(gv.norm(), 1e-12));
  }
}

TEST_CASE("LogisticAux: Lipschitz bound") {
  // one sample: (|a|^2 + 1) / 4
  Matrix a(1, 3);
  a << 1, 2, 2;
  const fused::LogisticAux one(a, Vector::Ones(1));
  CHECK(one.lipschitz() == doctest::Approx(10.0 / 4.0).epsilon(1e-10));

  const auto inst = tiny_instance(3, 30, 12);
  const fused::LogisticAux aux(inst.A, inst.labels);
  const double lg = aux.lipschitz();
  std::mt19937_64 rng(504);
  for (int t = 0; t < 1000; ++t) {
    const Vector y1 = oracle::gaussian_vector(12, rng), y2 = oracle::gaussian_vector(12, rng);
    const double c1 = oracle::gaussian_vector(1, rng)[0], c2 = oracle::gaussian_vector(1, rng)[0];
    const auto g1 = aux.gradient(y1, c1), g2 = aux.gradient(y2, c2);
    Vector dg(13), dz(13);
    dg << g1.y - g2.y, g1.c - g2.c;
    dz << y1 - y2, c1 - c2;
    CHECK(dg.norm() <= lg * dz.norm() * (1 + 1e-12));
  }

  // doubling A quadruples |A_hat|^2 up to the intercept column
  const fused::LogisticAux twice(2.0 * inst.A, inst.labels);
  const double m = 30.0;
  Matrix ab(30, 13), ab2(30, 13);
  ab << aux.a_hat(), inst.labels;
  ab2 << 2.0 * aux.a_hat(), inst.labels;
  CHECK(lg == doctest::Approx(oracle::jacobi_lambda_max(ab.transpose() * ab) / (4 * m)).epsilon(1e-9));
  CHECK(twice.lipschitz() ==
        doctest::Approx(oracle::jacobi_lambda_max(ab2.transpose() * ab2) / (4 * m)).epsilon(1e-9));
  CHECK(twice.lipschitz() > 3.0 * lg);
  CHECK(twice.lipschitz() <= 4.0 * lg);
}

TEST_CASE("as_problem: subproblems and khat") {
  auto inst = tiny_instance(4, 8, 3);
  const fused::FusedLogisticConfig cfg{0.3, 0.7};
  const auto p = fused::as_problem(inst, cfg);
  CHECK(p.x_dim() == 5);
  CHECK(p.y_dim() == 4);
  CHECK(p.constraint_dim() == 5);

  // lambda_max(B^T B) = lambda_max(I + L^T L) = 4 for n = 3
  const double lg = p.smooth().lipschitz_constant;
  CHECK(khat_constant(p) ==
        doctest::Approx(std::sqrt(std::max(2 * lg * lg + 4.0, 8.0))).epsilon(1e-9));

  std::mt19937_64 rng(505);
  const Vector y = oracle::gaussian_vector(4, rng);
  const Vector lam = oracle::gaussian_vector(5, rng);
  const Vector x_prev = Vector::Zero(5);
  const double gamma = 0.4;
  const MetricH h = MetricH::zero();
  const Vector out = p.prox().prox_with_metric(
      XSubproblem{p.coupling(), x_prev, y, lam, gamma, h});
  const Vector ly = fused::DifferenceMatrix(3).apply(y.head(3));
  const Vector x_ref = shrink(Vector(y.head(3) + lam.head(3) / gamma), cfg.alpha / gamma);
  const Vector w_ref = shrink(Vector(ly + lam.tail(2) / gamma), cfg.beta / gamma);
  CHECK((out.head(3) - x_ref).norm() <= 1e-14);
  CHECK((out.tail(2) - w_ref).norm() <= 1e-14);

  // the intercept never enters the coupling
  Vector yc = Vector::Zero(4);
  yc[3] = 5.0;
  CHECK(p.coupling().B.apply(yc).norm() == 0.0);
  CHECK(p.coupling().B.apply_transpose(lam)[3] == 0.0);

  CHECK_THROWS_AS(fused::as_problem(inst, {-1.0, 0.1}), std::invalid_argument);
}

TEST_CASE("EGAL equals the line-by-line listing") {
  const auto inst = tiny_instance(6, 4, 3);
  const fused::FusedLogisticConfig cfg{0.05, 0.1};
  const auto p = fused::as_problem(inst, cfg);
  const auto sc = fused::algorithm1_config(cfg);
  const double gamma = resolve_step_size(p, sc);
  const auto ref = transcribe::fused_egal(inst.A, inst.labels, cfg.alpha, cfg.beta, gamma, 50);
  const auto alt = transcribe::fused_egal(inst.A, inst.labels, cfg.alpha, cfg.beta, gamma, 50, true);

  auto s = IterateState::initial(p);
  const StepParams params{Variant::EGAL, gamma, MetricH::zero()};
  double worst = 0.0, worst_alt = 0.0;
  for (int k = 0; k < 50; ++k) {
    s = step(p, params, s);
    const auto& r = ref[static_cast<std::size_t>(k)];
    Vector xw(5), yc(4), lam(5);
    xw << r.x, r.w;
    yc << r.y, r.c;
    lam << r.lambda1, r.lambda2;
    worst = std::max({worst, (s.x - xw).cwiseAbs().maxCoeff(),
                      (s.y - yc).cwiseAbs().maxCoeff(),
                      (s.lambda - lam).cwiseAbs().maxCoeff()});
    const auto& q = alt[static_cast<std::size_t>(k)];
    Vector yq(4);
    yq << q.y, q.c;
    worst_alt = std::max(worst_alt, (s.y - yq).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
  // the reading with L y^{k+1} in the midpoint multiplier is a different method
  CHECK(worst_alt > 1e-8);
}

TEST_CASE("solve_algorithm1: unregularized fit lowers the loss") {
  auto inst = fused::generate_fused_blocks(130, 200, 7);
  const fused::FusedLogisticConfig cfg{0.0, 0.0};
  const fused::LogisticAux aux(inst.A, inst.labels);
  const auto p = fused::as_problem(inst, cfg);
  auto s = IterateState::initial(p);
  const auto params = resolve_step_params(p, fused::algorithm1_config(cfg));
  double prev = aux.value(s.y.head(130), s.y[130]);
  int increases = 0;
  for (int k = 0; k < 200; ++k) {
    s = step(p, params, s);
    const double v = aux.value(s.y.head(130), s.y[130]);
    if (v > prev) ++increases;
    prev = v;
  }
  MESSAGE("loss " << prev << ", increases " << increases << "/200");
  CHECK(prev < std::log(2.0));
  // direction of the fit correlates with the planted coefficients
  const Vector y = s.y.head(130);
  CHECK(y.dot(inst.x_hat) > 0.0);
}

TEST_CASE("solve_algorithm1: blocks pattern converges") {
  const auto inst = fused::generate_fused_blocks(500, 100, 3);
  const auto r = fused::solve_algorithm1(inst, {2e-2, 5e-2});
  CHECK(r.converged);
  CHECK(r.iterations < 20000);
  const Vector x = fused::coefficients(r, 500);
  CHECK(x.size() == 500);
  const auto sp = fused::sparsity_report(x);
  MESSAGE("iters " << r.iterations << " l0 " << sp.l0 << " tv0 " << sp.tv0
                   << " intercept " << fused::intercept(r));
  CHECK(std::isfinite(fused::intercept(r)));
}

TEST_CASE("generators") {
  SUBCASE("simple pattern support") {
    const auto inst = fused::generate_fused_simple(1000, 50, 9);
    CHECK(inst.A.rows() == 50);
    CHECK(inst.A.cols() == 1000);
    CHECK(inst.pattern == fused::Pattern::Simple);
    for (Index j = 0; j < 1000; ++j) {
      const bool in = (j < 100) || (j >= 200 && j < 300) || (j >= 400 && j < 500) ||
                      (j >= 600 && j < 700);
      CHECK((inst.x_hat[j] != 0.0) == in);
      if (in) {
        CHECK(inst.x_hat[j] > 0.0);
        CHECK(inst.x_hat[j] < 20.0);
        CHECK(inst.x_hat[j] == inst.x_hat[j / 100 * 100]);
      }
    }
  }
  SUBCASE("blocks pattern") {
    const auto inst = fused::generate_fused_blocks(500, 100, 3);
    CHECK((inst.x_hat.array() != 0.0).count() == 41);
    CHECK(inst.x_hat[0] == 20.0);
    CHECK(inst.x_hat[19] == 20.0);
    CHECK(inst.x_hat[20] == 0.0);
    CHECK(inst.x_hat[40] == 30.0);
    CHECK(inst.x_hat[70] == 10.0);
    CHECK(inst.x_hat[84] == 10.0);
    CHECK(inst.x_hat[85] == 0.0);
    CHECK(inst.x_hat[120] == 20.0);
    CHECK(inst.x_hat[124] == 20.0);
    CHECK(inst.x_hat[125] == 0.0);
  }
  SUBCASE("labels follow the planted model") {
    const auto inst = fused::generate_fused_blocks(200, 80, 5);
    CHECK(inst.intercept > 0.0);
    CHECK(inst.intercept < 1.0);
    const Vector score = inst.A * inst.x_hat + Vector::Constant(80, inst.intercept);
    for (Index i = 0; i < 80; ++i) {
      CHECK((inst.labels[i] == 1.0 || inst.labels[i] == -1.0));
      if (score[i] != 0.0) CHECK(inst.labels[i] == (score[i] > 0 ? 1.0 : -1.0));
    }
  }
  SUBCASE("determinism") {
    const auto a = fused::generate_fused_blocks(200, 40, 11);
    const auto b = fused::generate_fused_blocks(200, 40, 11);
    CHECK(a.A == b.A);
    CHECK(a.labels == b.labels);
    CHECK(a.intercept == b.intercept);
    const auto c = fused::generate_fused_simple(1000, 20, 11);
    const auto d = fused::generate_fused_simple(1000, 20, 11);
    CHECK(c.x_hat == d.x_hat);
    CHECK(c.A == d.A);
  }
  SUBCASE("size errors") {
    CHECK_THROWS_AS(fused::generate_fused_simple(999, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(fused::generate_fused_blocks(125, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(fused::generate_fused_blocks(200, 0, 1), std::invalid_argument);
    CHECK_NOTHROW(fused::generate_fused_blocks(126, 1, 1));
  }
  CHECK(fused::parse_pattern("simple") == fused::Pattern::Simple);
  CHECK(fused::parse_pattern("blocks") == fused::Pattern::Blocks);
  CHECK(!fused::parse_pattern("other").has_value());
}

TEST_CASE("sparsity_report") {
  CHECK(fused::sparsity_report(Vector::Zero(10)).l0 == 0);
  CHECK(fused::sparsity_report(Vector::Zero(10)).tv0 == 0);
  const auto c = fused::sparsity_report(Vector::Constant(10, 3.0));
  CHECK(c.l0 == 10);
  CHECK(c.tv0 == 0);

  const auto inst = fused::generate_fused_blocks(500, 10, 1);
  Index jumps = 0;
  for (Index j = 0; j + 1 < 500; ++j)
    if (inst.x_hat[j] != inst.x_hat[j + 1]) ++jumps;
  const auto r = fused::sparsity_report(inst.x_hat, 1e-6);
  CHECK(r.l0 == 41);
  CHECK(r.tv0 == jumps);
  CHECK(r.tv0 == 7);

  CHECK_THROWS_AS(fused::sparsity_report(inst.x_hat, 0.0), std::invalid_argument);
  Vector tiny = Vector::Zero(4);
  tiny[0] = 1.0;
  tiny[1] = 1e-7;
  const auto d = fused::sparsity_report(tiny);  // threshold 1e-6
  CHECK(d.l0 == 1);
  CHECK(d.tv0 == 1);
}
