#include <doctest.h>

#include "oracles.hpp"
#include "signedcrowd/dynamics_dt.hpp"
#include "signedcrowd/error.hpp"

using namespace signedcrowd;

namespace {

Matrix ws1() {
  Matrix w(3, 3);
  w << 0.3, 0.5, 0.2, -0.5, 0.9, 0.6, 0.9, 0.4, -0.3;
  return w;
}

Matrix ws3() {
  Matrix w(3, 3);
  w << 0.4, 0.8, -0.2, 0.9, 0.1, 0.0, 0.6, 0.1, 0.3;
  return w;
}

Matrix wb4() {
  Matrix w(3, 3);
  w << 0.3, -0.6, -0.1, -0.3, 0.8, -0.1, -0.2, 0.9, -0.1;
  return w;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(Index(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

StubbornnessProfile theta3() { return StubbornnessProfile(vec({0.8, 0.5, 0.8})); }
StubbornnessProfile theta4() { return StubbornnessProfile(vec({0.2, 0.4, 0.6})); }

double sup(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

constexpr ModelKind kUniDeGroot{Dynamics::kDeGroot, TimeDomain::kDiscrete, Partite::kUnipartite};
constexpr ModelKind kUniSFJ{Dynamics::kSFJ, TimeDomain::kDiscrete, Partite::kUnipartite};
constexpr ModelKind kUniConcat{Dynamics::kConcatSFJ, TimeDomain::kDiscrete, Partite::kUnipartite};
constexpr ModelKind kBiDeGroot{Dynamics::kDeGroot, TimeDomain::kDiscrete, Partite::kBipartite};
constexpr ModelKind kBiSFJ{Dynamics::kSFJ, TimeDomain::kDiscrete, Partite::kBipartite};
constexpr ModelKind kBiConcat{Dynamics::kConcatSFJ, TimeDomain::kDiscrete, Partite::kBipartite};

}  // namespace

TEST_CASE("step_degroot") {
  const InteractionMatrix w(ws1());
  const Vector x = vec({0.3, -1.0, 2.0});
  CHECK(step_degroot(InteractionMatrix(Matrix::Identity(3, 3)), {x, 0, 1}).x == x);
  CHECK(sup(step_degroot(w, {Vector::Ones(3), 0, 1}).x, Vector::Ones(3)) < 1e-15);
  const auto next = step_degroot(w, {vec({1, 0, 0}), 4, 2});
  CHECK(sup(next.x, vec({0.3, -0.5, 0.9})) < 1e-15);
  CHECK(next.k == 5);
  CHECK(next.s == 2);
  CHECK_THROWS_AS(step_degroot(w, {Vector::Ones(2), 0, 1}), Error);
}

TEST_CASE("step_sfj") {
  const InteractionMatrix w(ws3());
  const Vector x = vec({0.2, 1.5, -0.7});
  const Vector x0 = vec({1.0, -2.0, 0.5});
  CHECK(sup(step_sfj(w, StubbornnessProfile(Vector::Zero(3)), {x, 0, 1}, x0).x,
            step_degroot(w, {x, 0, 1}).x) < 1e-15);
  CHECK(sup(step_sfj(w, StubbornnessProfile(Vector::Constant(3, 0.999)), {x, 0, 1}, x0).x, x0) < 1e-2);
  CHECK(sup(step_sfj(w, theta3(), {Vector::Ones(3), 0, 1}, Vector::Ones(3)).x, Vector::Ones(3)) < 1e-15);
}

TEST_CASE("equilibrium: Example 3 social powers") {
  const Vector x0 = Vector::Ones(3);
  const auto sfj = equilibrium(kUniSFJ, InteractionMatrix(ws3()), theta3(), x0, Aggregator::kPopulation);
  CHECK(sup(sfj.social_power, vec({0.5057, 0.2321, 0.2622})) < 5e-4);
  CHECK(sfj.social_power.sum() == doctest::Approx(1.0).epsilon(1e-9));
  const auto cat = equilibrium(kUniConcat, InteractionMatrix(ws3()), theta3(), x0, Aggregator::kPopulation);
  CHECK(sup(cat.social_power, vec({1.0769, 0.2308, -0.3077})) < 5e-4);
  CHECK(cat.social_power.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cat.mean_factor == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("equilibrium: Example 4 bipartite models") {
  const Vector x0 = Vector::Constant(3, 5.0);
  const auto sfj = equilibrium(kBiSFJ, InteractionMatrix(wb4()), theta4(), x0, Aggregator::kPopulation);
  CHECK(sup(sfj.social_power, vec({0.0550, 0.2286, 0.1598})) < 5e-4);
  const auto cat = equilibrium(kBiConcat, InteractionMatrix(wb4()), theta4(), x0, Aggregator::kPopulation);
  CHECK(sup(cat.social_power, vec({0.1498, -0.9662, 0.1159})) < 5e-4);
  CHECK(cat.social_power.dot(vec({1, -1, -1})) == doctest::Approx(1.0).epsilon(1e-9));
  const auto dg = equilibrium(kBiDeGroot, InteractionMatrix(wb4()), std::nullopt, x0, Aggregator::kPopulation);
  CHECK(dg.signature == vec({1, -1, -1}));
  CHECK(sup(dg.x_star, dg.social_power.dot(x0) * dg.signature) < 1e-12);

  // SFJ population power sums to 1^T v / n against v.
  CHECK(sfj.social_power.dot(vec({1, -1, -1})) == doctest::Approx(-1.0 / 3.0).epsilon(1e-9));
  const auto group = equilibrium(kBiSFJ, InteractionMatrix(wb4()), theta4(), x0, Aggregator::kBipartition);
  CHECK(group.warnings.empty());
  CHECK(sup(group.social_power, fj_propagator(wb4(), theta4()).transpose() * vec({1, -1, -1}) / 3.0) < 1e-14);
}

TEST_CASE("equilibrium: error contract") {
  const Vector x0 = Vector::Ones(3);
  try {
    equilibrium(kUniSFJ, InteractionMatrix(ws3()), StubbornnessProfile(Vector::Zero(3)), x0,
                Aggregator::kPopulation);
    FAIL("expected DegenerateStubbornness");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateStubbornness);
  }
  try {
    equilibrium(kUniDeGroot, InteractionMatrix(Matrix::Identity(3, 3)), std::nullopt, x0,
                Aggregator::kPopulation);
    FAIL("expected AssumptionViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAssumptionViolated);
  }
  CHECK_THROWS_AS(equilibrium(kUniSFJ, InteractionMatrix(ws3()), std::nullopt, x0, Aggregator::kPopulation),
                  Error);
  const auto eq = equilibrium(kUniDeGroot, InteractionMatrix(ws1()), std::nullopt, x0, Aggregator::kBipartition);
  CHECK(eq.aggregator == Aggregator::kPopulation);
  CHECK_FALSE(eq.warnings.empty());
}

TEST_CASE("simulate agrees with the closed form") {
  const SimulationOptions opts;
  const Vector x0 = vec({1.0, 2.0, 3.0});
  struct Case {
    ModelKind kind;
    Matrix w;
    std::optional<StubbornnessProfile> theta;
  };
  const std::vector<Case> cases = {
      {kUniDeGroot, ws1(), std::nullopt}, {kUniSFJ, ws3(), theta3()}, {kUniConcat, ws3(), theta3()},
      {kBiDeGroot, wb4(), std::nullopt},  {kBiSFJ, wb4(), theta4()},  {kBiConcat, wb4(), theta4()},
  };
  for (const auto& c : cases) {
    const InteractionMatrix w(c.w);
    const auto traj = simulate(c.kind, w, c.theta, x0, opts);
    const auto eq = equilibrium(c.kind, w, c.theta, x0, Aggregator::kPopulation);
    CHECK(traj.converged);
    CHECK(sup(traj.states.back().x, eq.x_star) <= 10 * opts.inner_tol);
  }

  SimulationOptions iter;
  iter.iterate_inner = true;
  const auto a = simulate(kUniConcat, InteractionMatrix(ws3()), theta3(), x0, iter);
  const auto b = simulate(kUniConcat, InteractionMatrix(ws3()), theta3(), x0);
  CHECK(sup(a.states.back().x, b.states.back().x) < 1e-8);
}

TEST_CASE("simulate: fixed points and partial runs") {
  const auto ones = simulate(kUniDeGroot, InteractionMatrix(ws1()), std::nullopt, Vector::Ones(3));
  for (const auto& st : ones.states) CHECK(sup(st.x, Vector::Ones(3)) < 1e-14);
  const Vector v = vec({1, -1, -1});
  const auto bip = simulate(kBiDeGroot, InteractionMatrix(wb4()), std::nullopt, v);
  for (const auto& st : bip.states) CHECK(sup(st.x, v) < 1e-14);

  SimulationOptions tight;
  tight.max_steps = 3;
  CHECK_THROWS_AS(simulate(kUniDeGroot, InteractionMatrix(ws1()), std::nullopt, vec({1, 2, 3}), tight), Error);
  tight.allow_partial = true;
  const auto part = simulate(kUniDeGroot, InteractionMatrix(ws1()), std::nullopt, vec({1, 2, 3}), tight);
  CHECK_FALSE(part.converged);
  CHECK(part.states.size() == 4);
}

TEST_CASE("social power normalization on random gauge-scrambled instances") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + Index(trial % 6);
    const Matrix w = oracle::random_stochastic(rng, n);
    const Vector sig = oracle::random_signature(rng, n);
    const Matrix wb = sig.asDiagonal() * w * sig.asDiagonal();
    Vector th(n);
    for (Index i = 0; i < n; ++i) th(i) = u(rng);
    const StubbornnessProfile theta(th);
    const Vector x0 = oracle::random_matrix(rng, n, -2.0, 2.0).col(0);

    const auto dg = equilibrium(kBiDeGroot, InteractionMatrix(wb), std::nullopt, x0, Aggregator::kPopulation);
    CHECK(std::abs(dg.social_power.dot(sig) - 1.0) <= tol::kEig);
    const auto cat = equilibrium(kBiConcat, InteractionMatrix(wb), theta, x0, Aggregator::kPopulation);
    CHECK(std::abs(cat.social_power.dot(sig) - 1.0) <= tol::kEig);
    const auto sfj = equilibrium(kBiSFJ, InteractionMatrix(wb), theta, x0, Aggregator::kPopulation);
    CHECK(std::abs(sfj.social_power.dot(sig) - sig.sum() / double(n)) <= tol::kEig);

    // Gauge covariance: x*(Xi Wb Xi, Xi x0) = Xi x*(Wb, x0).
    const Vector gx0 = sig.cwiseProduct(x0);
    const auto dg_s = equilibrium(kUniDeGroot, InteractionMatrix(w), std::nullopt, gx0, Aggregator::kPopulation);
    CHECK(sup(dg_s.x_star, sig.cwiseProduct(dg.x_star)) <= tol::kEig);
    CHECK(std::abs(dg_s.social_power.sum() - 1.0) <= tol::kEig);
    const auto sfj_s = equilibrium(kUniSFJ, InteractionMatrix(w), theta, gx0, Aggregator::kPopulation);
    CHECK(sup(sfj_s.x_star, sig.cwiseProduct(sfj.x_star)) <= tol::kEig);
    const auto cat_s = equilibrium(kUniConcat, InteractionMatrix(w), theta, gx0, Aggregator::kPopulation);
    CHECK(sup(cat_s.x_star, sig.cwiseProduct(cat.x_star)) <= tol::kEig);

    // Concatenated identity p ~ (I - Theta)^{-1} Theta z.
    const Vector q = (Vector::Ones(n) - th).cwiseInverse().cwiseProduct(th).cwiseProduct(dg_s.social_power);
    CHECK(sup(cat_s.social_power, q / q.sum()) <= 1e-8);

    // Unsigned reduction: DeGroot and concatenated powers live in the simplex.
    CHECK(dg_s.social_power.minCoeff() > 0.0);
    CHECK(cat_s.social_power.minCoeff() > 0.0);
  }
}

TEST_CASE("detect_partite") {
  CHECK(detect_partite(InteractionMatrix(ws1())) == Partite::kUnipartite);
  CHECK(detect_partite(InteractionMatrix(wb4())) == Partite::kBipartite);
  CHECK_FALSE(detect_partite(InteractionMatrix(Matrix::Identity(2, 2))).has_value());
}
