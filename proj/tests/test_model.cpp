#include "doctest.h"
#include "evanscope/model.hpp"

using namespace evanscope;

namespace {

// Scalar cubic: A_1 = 3u^2, the derivative of u^3. Used for index tests only.
SystemModel scalarCubic() {
  auto evalA = [](int j, const Vec& u) {
    Mat A(1, 1);
    A(0, 0) = (j == 0) ? 1.0 : 3.0 * u(0) * u(0);
    return A;
  };
  Vec lo(1), hi(1);
  lo << -2.0;
  hi << 2.0;
  return SystemModel("scalar-cubic", 1, 1, evalA, lo, hi);
}

}  // namespace

TEST_CASE("curlyAd formula on burgers") {
  auto b = makeBuiltin("burgers");
  Vec u(1), h(0);
  u << 0.5;
  CHECK(std::abs(b.model->curlyAd(u, 0.5, h)(0, 0)) < 1e-15);
  u << -1.0;
  CHECK(b.model->curlyAd(u, 0.0, h)(0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("curlyAd formula in two dimensions") {
  auto b = makeBuiltin("burgers2d");
  Vec u(1), h(1);
  u << 1.0;
  h << 1.0;
  // A_2 - h A_1 = u - u = 0
  CHECK(std::abs(b.model->curlyAd(u, 0.0, h)(0, 0)) < 1e-15);
}

TEST_CASE("curlyAd with zero speed and slope is A_d") {
  for (const auto& id : builtinIds()) {
    auto b = makeBuiltin(id);
    const Vec u = 0.5 * (b.model->domainLo() + b.model->domainHi());
    const Vec h = Vec::Zero(b.model->d() - 1);
    CHECK((b.model->curlyAd(u, 0.0, h) - b.model->A(b.model->d(), u)).norm() <
          1e-14);
  }
}

TEST_CASE("domain hint is enforced") {
  auto b = makeBuiltin("burgers");
  Vec u(1), h(0);
  u << 5.0;
  CHECK_THROWS_AS(b.model->curlyAd(u, 0.0, h), Error);
}

TEST_CASE("structural checks on burgers") {
  auto b = makeBuiltin("burgers");
  auto rep = structuralChecks(*b.model, defaultStateSamples(*b.model, 9),
                              defaultFrequencySamples(1, 9));
  CHECK(rep.hyperbolicityOK);
  // scalar: Re(i u xi + xi^2)/xi^2 = 1 exactly
  CHECK(rep.dissipativityMargin == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.parabolicityMargin == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rotation symbol fails hyperbolicity") {
  auto evalA = [](int j, const Vec&) {
    Mat A(2, 2);
    if (j == 0) {
      A.setIdentity();
    } else {
      A << 0, 1, -1, 0;
    }
    return A;
  };
  Vec lo(2), hi(2);
  lo << -1, -1;
  hi << 1, 1;
  SystemModel rot("rotation", 2, 1, evalA, lo, hi);
  auto rep = structuralChecks(rot, defaultStateSamples(rot, 3),
                              defaultFrequencySamples(1, 3));
  CHECK(!rep.hyperbolicityOK);
  CHECK(std::abs(std::abs(rep.hyperbolicityWorstEig.imag()) - 1.0) < 1e-12);
}

TEST_CASE("structural checks are deterministic") {
  auto b = makeBuiltin("nc-coupled");
  auto s1 = structuralChecks(*b.model, defaultStateSamples(*b.model, 5),
                             defaultFrequencySamples(1, 5));
  auto s2 = structuralChecks(*b.model, defaultStateSamples(*b.model, 5),
                             defaultFrequencySamples(1, 5));
  CHECK(s1.dissipativityMargin == s2.dissipativityMargin);
  CHECK(s1.parabolicityMargin == s2.parabolicityMargin);
  CHECK(s1.hyperbolicityMargin == s2.hyperbolicityMargin);
}

TEST_CASE("compressive indices of the builtin shocks") {
  SUBCASE("burgers is lax") {
    auto b = makeBuiltin("burgers");
    auto [Rm, Lp, k] = compressiveIndices(*b.model, b.referenceShock);
    CHECK(Rm == 1);
    CHECK(Lp == 1);
    CHECK(k == 0);
  }
  SUBCASE("burgers-transport") {
    auto b = makeBuiltin("burgers-transport");
    auto [Rm, Lp, k] = compressiveIndices(*b.model, b.referenceShock);
    CHECK(Rm == 1);
    CHECK(Lp == 2);
    CHECK(k == 0);
  }
  SUBCASE("scalar cubic is undercompressive") {
    SystemModel m = scalarCubic();
    PlanarShockPoint q;
    q.pPlus = Vec::Constant(1, -1.0);
    q.pMinus = Vec::Constant(1, 1.0);
    q.s = 1.0;
    q.h = Vec::Zero(0);
    auto [Rm, Lp, k] = compressiveIndices(m, q);
    CHECK(Rm == 0);
    CHECK(Lp == 1);
    CHECK(k == 1);
  }
  SUBCASE("cubic-uc is undercompressive") {
    auto b = makeBuiltin("cubic-uc");
    auto [Rm, Lp, k] = compressiveIndices(*b.model, b.referenceShock);
    CHECK(Rm == 1);
    CHECK(Lp == 1);
    CHECK(k == 1);
  }
}

TEST_CASE("index identity R- + L+ + k = N + 1 for all builtins") {
  for (const auto& id : builtinIds()) {
    auto b = makeBuiltin(id);
    auto [Rm, Lp, k] = compressiveIndices(*b.model, b.referenceShock);
    CHECK(Rm + Lp + k == b.model->N() + 1);
  }
}

TEST_CASE("characteristic shock is reported with the gap") {
  auto b = makeBuiltin("burgers");
  PlanarShockPoint q;
  q.pPlus = Vec::Constant(1, 0.0);  // curlyAd = 0 at s = 0
  q.pMinus = Vec::Constant(1, 1.0);
  q.s = 0.0;
  q.h = Vec::Zero(0);
  CHECK_THROWS_AS(compressiveIndices(*b.model, q), Error);
}
