#include "doctest.h"
#include "evanscope/io.hpp"
#include "evanscope/profile.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

using namespace evanscope;

namespace {

double tanhProfile(double z) { return -std::tanh(z / 2.0); }
double tanhSlope(double z) {
  const double c = std::cosh(z / 2.0);
  return -0.5 / (c * c);
}

std::shared_ptr<ShockFrame> burgersFrame() {
  static auto builtin = makeBuiltin("burgers");
  return makeFrame(builtin);
}

}  // namespace

TEST_CASE("tail with a = 0 is the constant state") {
  auto frame = burgersFrame();
  Vec a0 = Vec::Zero(1);
  TailSolution t = solveTail(*frame, +1, frame->qbar.pPlus, 0.0, Vec::Zero(0),
                             a0, TailOptions{});
  for (Eigen::Index j = 0; j < t.z.size(); ++j) {
    CHECK(std::abs(t.u(0, j) + 1.0) < 1e-13);
    CHECK(std::abs(t.v(0, j)) < 1e-13);
  }
}

TEST_CASE("burgers tail reproduces the exact translate") {
  auto frame = burgersFrame();
  // Pick a from the exact profile shifted by z0; the solution must then be
  // -tanh((z + z0)/2) in the phi frame shifted accordingly.
  auto w = [](double z) { return Vec::Constant(1, tanhProfile(z)); };
  auto wz = [](double z) { return Vec::Constant(1, tanhSlope(z)); };
  auto [ap, am] = tailCoordinatesOf(*frame, w, wz);

  TailOptions opts;
  opts.forcePicard = true;
  TailSolution plus = solveTail(*frame, +1, frame->qbar.pPlus, 0.0,
                                Vec::Zero(0), ap, opts);
  CHECK(plus.usedPicard);
  double err = 0.0;
  for (Eigen::Index j = 0; j < plus.z.size(); ++j)
    err = std::max(err, std::abs(plus.u(0, j) - tanhProfile(plus.z(j))));
  CHECK(err < 1e-8);

  TailSolution minus = solveTail(*frame, -1, frame->qbar.pMinus, 0.0,
                                 Vec::Zero(0), am, opts);
  err = 0.0;
  for (Eigen::Index j = 0; j < minus.z.size(); ++j)
    err = std::max(err, std::abs(minus.u(0, j) - tanhProfile(minus.z(j))));
  CHECK(err < 1e-8);
}

TEST_CASE("first-order tail expansion has quadratic error") {
  auto frame = burgersFrame();
  const Mat G = frame->model->curlyAd(frame->qbar.pPlus, 0.0, Vec::Zero(0));
  auto defect = [&](double a) {
    TailSolution t = solveTail(*frame, +1, frame->qbar.pPlus, 0.0, Vec::Zero(0),
                               Vec::Constant(1, a), TailOptions{});
    // Evaluate at the Phi-frame origin (phi-frame z = -zbar): u - p - G^{-1} a
    const Eigen::Index j = t.indexOf(-frame->zbar);
    return std::abs(t.u(0, j) + 1.0 - a / G(0, 0));
  };
  const double d1 = defect(0.02);
  const double d2 = defect(0.04);
  CHECK(d2 / d1 > 3.0);  // quadratic in |a|
  CHECK(d2 / d1 < 5.0);
}

TEST_CASE("psi vanishes at the reference connection") {
  auto frame = burgersFrame();
  auto w = [](double z) { return Vec::Constant(1, tanhProfile(z)); };
  auto wz = [](double z) { return Vec::Constant(1, tanhSlope(z)); };
  auto [ap, am] = tailCoordinatesOf(*frame, w, wz);
  PsiResult r = evalPsi(*frame, frame->qbar.pPlus, frame->qbar.pMinus, 0.0,
                        Vec::Zero(0), ap, am);
  CHECK(r.psiTilde.norm() < 1e-9);
}

TEST_CASE("psi detects endstate mismatch") {
  auto frame = burgersFrame();
  auto w = [](double z) { return Vec::Constant(1, tanhProfile(z)); };
  auto wz = [](double z) { return Vec::Constant(1, tanhSlope(z)); };
  auto [ap, am] = tailCoordinatesOf(*frame, w, wz);
  PsiResult r = evalPsi(*frame, Vec::Constant(1, -0.9), frame->qbar.pMinus,
                        0.0, Vec::Zero(0), ap, am);
  CHECK(r.psi.norm() > 1e-3);
}

TEST_CASE("psi on constant states") {
  // A frame whose two endstate neighborhoods overlap: scalar flux u with the
  // base at a noncharacteristic point on both sides (R- = 0, L+ = 1).
  auto builtin = makeBuiltin("burgers");
  PlanarShockPoint qbar;
  qbar.pPlus = Vec::Constant(1, 0.5);
  qbar.pMinus = Vec::Constant(1, 0.5);
  qbar.s = 0.0;
  qbar.h = Vec::Zero(0);
  auto frame = makeFrame(builtin.model, qbar, -1.0, Vec::Constant(1, 0.5),
                         Vec::Constant(1, -0.5));
  REQUIRE(frame->Rminus == 0);
  REQUIRE(frame->Lplus == 1);
  const Vec p = Vec::Constant(1, 0.6);
  PsiResult r =
      evalPsi(*frame, p, p, 0.0, Vec::Zero(0), Vec::Zero(0), Vec::Zero(1));
  CHECK(r.psi.norm() < 1e-13);
  // third entry: s + p.wz0 - w0.wz0 = (0.6 - 0.5) * (-0.5)
  CHECK(r.psiTilde(2) == doctest::Approx(-0.05).epsilon(1e-12));
}

TEST_CASE("reference connection matches the closed-form burgers profile") {
  auto builtin = makeBuiltin("burgers");
  auto frame = makeFrame(builtin);
  ConnectionPoint cp = referenceConnection(frame, builtin);
  CHECK(cp.residual < 1e-10);
  CHECK(cp.q.pPlus(0) == doctest::Approx(-1.0).epsilon(1e-10));
  double err = 0.0;
  for (Eigen::Index j = 0; j < cp.profile.zPlus.size(); ++j) {
    const double z = cp.profile.zPlus(j);
    if (z > 20.0) break;
    err = std::max(err, std::abs(cp.profile.wPlus(0, j) - tanhProfile(z)));
  }
  for (Eigen::Index j = 0; j < cp.profile.zMinus.size(); ++j) {
    const double z = cp.profile.zMinus(j);
    if (z < -20.0) continue;
    err = std::max(err, std::abs(cp.profile.wMinus(0, j) - tanhProfile(z)));
  }
  CHECK(err < 1e-8);
  CHECK(cp.profile.maxResidual < 1e-8);
  CHECK(cp.profile.jumpW < 1e-10);
  CHECK(cp.profile.jumpWz < 1e-10);
}

TEST_CASE("newton recovers the burgers rankine-hugoniot chart") {
  auto builtin = makeBuiltin("burgers");
  auto frame = makeFrame(builtin);
  ConnectionPoint base = referenceConnection(frame, builtin);

  // frozen (p- = 1, s = 0.1): p+ must come out at 2s - p- = -0.8
  PlanarShockPoint start = base.q;
  start.s = 0.1;
  ConnectionPoint cp = findConnection(*frame, {1}, start, base.aPlus,
                                      base.aMinus);
  CHECK(cp.q.pPlus(0) == doctest::Approx(-0.8).epsilon(1e-9));
}

TEST_CASE("burgers transversality ranks") {
  auto builtin = makeBuiltin("burgers");
  auto frame = makeFrame(builtin);
  ConnectionPoint cp = referenceConnection(frame, builtin);
  MelnikovData md = transversalityReport(cp);
  CHECK(md.rankA == 2);
  CHECK(md.rankAP == 3);
  CHECK(md.rankAPS == 3);
  CHECK(md.verdict == "strongly-transversal");
  CHECK(md.gapA > 1e3);
  CHECK(md.gapAP > 1e3);
}

TEST_CASE("translation direction sits in ker grad_a Psi but not PsiTilde") {
  auto builtin = makeBuiltin("burgers");
  auto frame = makeFrame(builtin);
  ConnectionPoint cp = referenceConnection(frame, builtin);

  // Tangent of the translation family through the profile.
  const double dt = 1e-5;
  auto coordsAt = [&](double tau) {
    auto w = [&](double z) { return cp.profile.wAt(z + tau); };
    auto wz = [&](double z) { return cp.profile.wpAt(z + tau); };
    return tailCoordinatesOf(*frame, w, wz);
  };
  auto [apF, amF] = coordsAt(dt);
  auto [apB, amB] = coordsAt(-dt);
  Vec adot(frame->aDim());
  adot.head(frame->Rminus) = (apF - apB) / (2 * dt);
  adot.tail(frame->Lplus) = (amF - amB) / (2 * dt);

  MelnikovData md = transversalityReport(cp);
  Vec img = md.jacA * adot;
  const double scale = adot.norm();
  CHECK(img.head(2 * frame->N()).norm() < 1e-4 * scale);  // ker of grad_a Psi
  CHECK(std::abs(img(2 * frame->N())) > 1e-3 * scale);    // third entry reacts
}

TEST_CASE("burgers chart is p+ = 2s - p-") {
  auto builtin = makeBuiltin("burgers");
  auto frame = makeFrame(builtin);
  ConnectionPoint base = referenceConnection(frame, builtin);
  ManifoldChart chart = buildChart(base);
  // Either endstate may be selected as the alpha block; the Rankine-Hugoniot
  // relation p_alpha = 2s - p_beta is the same in both cases.
  REQUIRE(chart.alphaIdx.size() == 1);
  REQUIRE(chart.betaIdx.size() == 1);
  CHECK(chart.alphaIdx[0] + chart.betaIdx[0] == 1);

  for (double pb : {0.9, 1.0, 1.1}) {
    for (double s : {-0.05, 0.0, 0.08}) {
      const double pbSigned = chart.betaIdx[0] == 1 ? pb : -pb;
      auto e = chart.eval(Vec::Constant(1, pbSigned), s, Vec::Zero(0));
      CHECK(e.pAlpha(0) == doctest::Approx(2 * s - pbSigned).epsilon(1e-9));
    }
  }

  // chi and its derivatives: chi = p+ + p- - 2s up to overall sign
  Mat cp = chart.chiPrime(base.q);
  CHECK(cp(0, 0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(cp(0, 1) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(cp(0, 2) == doctest::Approx(-2.0).epsilon(1e-7));

  Mat T = chart.tangentSpace();
  REQUIRE(T.cols() == 2);  // N + d - k = 2
  CHECK((cp * T).norm() < 1e-6);
}

TEST_CASE("chart uniqueness probes") {
  auto builtin = makeBuiltin("burgers");
  auto frame = makeFrame(builtin);
  ConnectionPoint base = referenceConnection(frame, builtin);
  ManifoldChart chart = buildChart(base);

  SUBCASE("same construction twice is bit-identical") {
    auto g = [](double s, const Vec&) { return s; };
    CHECK(chartUniquenessProbe(chart, frame->zbar, g) == 0.0);
  }
  SUBCASE("shifted translate") {
    auto g = [](double s, const Vec&) { return s; };
    CHECK(chartUniquenessProbe(chart, frame->zbar - 1.0, g) < 1e-6);
  }
  SUBCASE("scaled third condition") {
    auto g = [](double s, const Vec&) { return 2.0 * s; };
    CHECK(chartUniquenessProbe(chart, frame->zbar, g) < 1e-6);
  }
}

TEST_CASE("cubic-uc reference connection and ranks") {
  auto builtin = makeBuiltin("cubic-uc");
  auto frame = makeFrame(builtin);
  CHECK(frame->k == 1);
  CHECK(frame->aDim() == 2);  // N + 1 - k
  ConnectionPoint cp = referenceConnection(frame, builtin);
  CHECK(cp.residual < 1e-10);
  CHECK(cp.profile.maxResidual < 1e-7);
  MelnikovData md = transversalityReport(cp);
  CHECK(md.rankA == 2);  // a-transversality target N + 1 - k
  CAPTURE(md.verdict);
  CHECK(md.rankAPS == 5);
}

TEST_CASE("profile csv export round-trips") {
  auto builtin = makeBuiltin("burgers");
  auto frame = makeFrame(builtin);
  ConnectionPoint cp = referenceConnection(frame, builtin);
  const std::string path = "/tmp/evanscope_profile_test.csv";
  writeProfileCsv(cp.profile, path);
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  auto table = parseCsv(ss.str());
  REQUIRE(table.header.size() == 3);
  CHECK(table.header[0] == "z");
  // two rows at z = 0
  int zeros = 0;
  for (const auto& row : table.rows)
    if (row[0] == "0") ++zeros;
  CHECK(zeros == 2);
  // lossless round trip of the first profile value
  const double w00 = parseDouble(table.rows.front()[1]);
  CHECK(w00 == cp.profile.wMinus(0, 0));
}
