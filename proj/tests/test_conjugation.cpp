#include "doctest.h"
#include "evanscope/conjugation.hpp"

#include <cmath>

using namespace evanscope;

namespace {

ConnectionPoint burgersConnection() {
  static auto builtin = makeBuiltin("burgers");
  static auto frame = makeFrame(builtin);
  static ConnectionPoint cp = referenceConnection(frame, builtin);
  return cp;
}

// A constant-profile "connection" on the overlap frame: G(z) == Ginf.
ConnectionPoint constantConnection() {
  auto builtin = makeBuiltin("burgers");
  PlanarShockPoint qbar;
  qbar.pPlus = Vec::Constant(1, 0.5);
  qbar.pMinus = Vec::Constant(1, 0.5);
  qbar.s = 0.0;
  qbar.h = Vec::Zero(0);
  auto frame = makeFrame(builtin.model, qbar, -1.0, Vec::Constant(1, 0.5),
                         Vec::Constant(1, -0.5));
  PsiResult r = evalPsi(*frame, qbar.pPlus, qbar.pMinus, 0.0, Vec::Zero(0),
                        Vec::Zero(0), Vec::Zero(1));
  ConnectionPoint cp;
  cp.frame = frame;
  cp.q = qbar;
  cp.aPlus = Vec::Zero(0);
  cp.aMinus = Vec::Zero(1);
  // reuse the tails as a (constant) profile
  cp.profile.zPlus = r.plus.z;
  cp.profile.wPlus = r.plus.u;
  cp.profile.wpPlus = r.plus.v;
  cp.profile.zMinus = r.minus.z;
  cp.profile.wMinus = r.minus.u;
  cp.profile.wpMinus = r.minus.v;
  return cp;
}

Frequency freq1d(double tau, double gamma) {
  Frequency f;
  f.tau = tau;
  f.gamma = gamma;
  f.eta = Vec::Zero(0);
  return f;
}

}  // namespace

TEST_CASE("limiting symbol for burgers at zero frequency") {
  auto cp = burgersConnection();
  LinearizedSymbol sym = assembleSymbol(cp);
  const CMat Gp = sym.GLimit(+1, freq1d(0, 0));
  CMat expect(2, 2);
  expect << 0, 1, 0, -1;
  CHECK((Gp - expect).norm() < 1e-9);
}

TEST_CASE("G21 at zero frequency equals the profile slope for burgers") {
  auto cp = burgersConnection();
  LinearizedSymbol sym = assembleSymbol(cp);
  for (double z : {0.0, 0.7, 2.3, -1.1}) {
    const int side = z >= 0 ? +1 : -1;
    const CMat G = sym.G(side, z, freq1d(0, 0));
    const double wz = -0.5 / std::pow(std::cosh(z / 2), 2);
    CHECK(std::abs(G(1, 0) - Complex(wz, 0)) < 1e-8);
    // structure: top-left 0, top-right identity
    CHECK(std::abs(G(0, 0)) == 0.0);
    CHECK(std::abs(G(0, 1) - 1.0) == 0.0);
  }
}

TEST_CASE("eta coupling vanishes in G22 when eta = 0") {
  auto builtin = makeBuiltin("burgers2d");
  auto frame = makeFrame(builtin);
  ConnectionPoint cp = referenceConnection(frame, builtin);
  LinearizedSymbol sym = assembleSymbol(cp);
  Frequency f;
  f.tau = 0.3;
  f.gamma = 0.2;
  f.eta = Vec::Zero(1);
  const CMat G22 = sym.G22Limit(+1, f);
  CHECK(std::abs(G22(0, 0).imag()) < 1e-14);
}

TEST_CASE("conjugator of a constant profile is the identity") {
  auto cp = constantConnection();
  LinearizedSymbol sym = assembleSymbol(cp);
  for (int side : {+1, -1}) {
    ConjugatorGrid Y = computeConjugator(sym, side, freq1d(0.1, 0.3));
    for (const CMat& Yk : Y.Y)
      CHECK((Yk - CMat::Identity(2, 2)).norm() < 1e-11);
  }
}

TEST_CASE("burgers conjugator quality") {
  auto cp = burgersConnection();
  LinearizedSymbol sym = assembleSymbol(cp);
  for (int side : {+1, -1}) {
    for (auto [tau, gamma] : {std::pair{0.0, 0.0}, {0.05, 0.02}, {0.3, 0.4}}) {
      ConjugatorGrid Y = computeConjugator(sym, side, freq1d(tau, gamma));
      CHECK(Y.maxDefect < 1e-8);
      CHECK(Y.devRate > 0.2);  // decay of ||Y - I||
      CHECK(Y.maxCondition < 1e3);
      // residual of the conjugation ODE via midpoint finite differences on a
      // smooth subinterval, sanity only (the scheme defect is the real check)
      const Eigen::Index j = Y.z.size() / 3;
      const double h = Y.z(j + 1) - Y.z(j - 1);
      const CMat dY = (Y.Y[j + 1] - Y.Y[j - 1]) / h;
      const CMat R = dY - sym.G(side, Y.z(j), freq1d(tau, gamma)) * Y.Y[j] +
                     Y.Y[j] * sym.GLimit(side, freq1d(tau, gamma));
      CHECK(R.norm() < 1e-3);
    }
  }
}

TEST_CASE("hp split at zero frequency is exact") {
  auto cp = burgersConnection();
  LinearizedSymbol sym = assembleSymbol(cp);
  HPBlocks hp = hpSplit(sym, +1, freq1d(0, 0));
  CHECK(hp.H.norm() == 0.0);
  CHECK(std::abs(hp.P(0, 0) - Complex(-1, 0)) < 1e-12);
  CMat expect(2, 2);
  expect << 1, -1, 0, 1;  // [[I, (G22)^{-1}], [0, I]] with G22 = -1
  CHECK((hp.Lambda - expect).norm() < 1e-12);
}

TEST_CASE("hp split blocks scale correctly in rho") {
  auto cp = burgersConnection();
  LinearizedSymbol sym = assembleSymbol(cp);
  Vec zetaHat(2);
  zetaHat << 0.6, 0.8;
  for (double rho : {1e-3, 1e-2, 1e-1}) {
    HPBlocks hp = hpSplit(sym, +1, Frequency::polar(zetaHat, rho));
    CHECK(hp.similarityResidual < 1e-10);
    CHECK(hp.H.norm() < 3.0 * rho);       // H = O(rho)
    CHECK(std::abs(hp.P(0, 0) + 1.0) < 3.0 * rho);  // P = G22 + O(rho)
    // Hcheck = H / rho approaches H0 = i tauHat + gammaHat
    const Complex H0(zetaHat(1), zetaHat(0));
    CHECK(std::abs(hp.H(0, 0) / rho - H0) < 3.0 * rho);
  }
}

TEST_CASE("hp dimensions on burgers-transport (Prop cc8 pattern)") {
  auto builtin = makeBuiltin("burgers-transport");
  auto frame = makeFrame(builtin);
  ConnectionPoint cp = referenceConnection(frame, builtin);
  LinearizedSymbol sym = assembleSymbol(cp);
  Vec zetaHat(2);
  zetaHat << 0.3, std::sqrt(1 - 0.09);
  const Frequency f = Frequency::polar(zetaHat, 0.02);
  // R- = 1, L+ = 2, k = 0
  HPBlocks hpP = hpSplit(sym, +1, f);
  HPBlocks hpM = hpSplit(sym, -1, f);
  auto dimMinus = [](const CMat& M) {
    return spectralSplit(M).basisMinus.cols();
  };
  auto dimPlus = [](const CMat& M) {
    return spectralSplit(M).basisPlus.cols();
  };
  CHECK(dimMinus(hpP.P) == 1);                   // R-
  CHECK(dimPlus(hpM.P) == 2);                    // L+
  CHECK(dimMinus(hpP.H) == 2 - 1);               // N - R-
  CHECK(dimPlus(hpM.H) == 2 - 2);                // N - L+
  // dim E_-(G+) = N and dim E_+(G-) = N for rho > 0
  CHECK(dimMinus(sym.GLimit(+1, f)) == 2);
  CHECK(dimPlus(sym.GLimit(-1, f)) == 2);
}

TEST_CASE("lambda varies continuously along a rho ray") {
  auto cp = burgersConnection();
  LinearizedSymbol sym = assembleSymbol(cp);
  Vec zetaHat(2);
  zetaHat << 0.6, 0.8;
  CMat prev;
  for (double rho : {1e-4, 2e-4, 4e-4, 1e-3, 4e-3, 1e-2}) {
    HPBlocks hp = hpSplit(sym, +1, Frequency::polar(zetaHat, rho));
    if (prev.size() > 0) CHECK((hp.Lambda - prev).norm() < 0.1);
    prev = hp.Lambda;
  }
  HPBlocks hp0 = hpSplit(sym, +1, freq1d(0, 0));
  CHECK((prev - hp0.Lambda).norm() < 0.1);
}
