#include "doctest.h"
#include "evanscope/linalg.hpp"

#include <random>

using namespace evanscope;

TEST_CASE("spectral split of a diagonal matrix") {
  Mat M = Mat::Zero(2, 2);
  M(0, 0) = -1.0;
  M(1, 1) = 2.0;
  auto sp = spectralSplit(M);
  REQUIRE(sp.basisMinus.cols() == 1);
  REQUIRE(sp.basisPlus.cols() == 1);
  CHECK(std::abs(std::abs(sp.basisMinus(0, 0)) - 1.0) < 1e-14);
  CHECK(std::abs(sp.basisMinus(1, 0)) < 1e-14);
  CHECK((sp.projMinus - (CMat(2, 2) << 1, 0, 0, 0).finished()).norm() < 1e-13);
}

TEST_CASE("spectral split of the swap matrix") {
  Mat M(2, 2);
  M << 0, 1, 1, 0;  // eigenvalues -1, +1; E_- spanned by (1,-1)/sqrt2
  auto sp = spectralSplit(M);
  CVec v = sp.basisMinus.col(0);
  CHECK(std::abs(std::abs(v(0)) - 1.0 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(v(0) + v(1)) < 1e-13);
}

TEST_CASE("axis eigenvalue raises") {
  Mat M(2, 2);
  M << 0, 1, -1, 0;  // eigenvalues +- i
  CHECK_THROWS_AS(spectralSplit(M), Error);
}

TEST_CASE("projectors of a random nonnormal matrix") {
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 20; ++trial) {
    Mat M(4, 4);
    for (int i = 0; i < 16; ++i) M(i / 4, i % 4) = dist(rng);
    M += 0.0 * Mat::Identity(4, 4);
    SpectralSplit sp;
    try {
      sp = spectralSplit(M);
    } catch (const Error&) {
      continue;  // eigenvalue too close to the axis, skip draw
    }
    CMat Mc = M.cast<Complex>();
    // projector properties and invariance
    CHECK((sp.projMinus * sp.projMinus - sp.projMinus).norm() < 1e-9);
    CHECK((sp.projMinus + sp.projPlus - CMat::Identity(4, 4)).norm() < 1e-10);
    CHECK((sp.projMinus * Mc - Mc * sp.projMinus).norm() < 1e-8);
    // basis spans are invariant: M B = B (B^H M B)
    const CMat B = sp.basisMinus;
    if (B.cols() > 0) {
      CMat G = B.adjoint() * Mc * B;
      CHECK((Mc * B - B * G).norm() < 1e-8);
    }
    CHECK(sp.basisMinus.cols() + sp.basisPlus.cols() == 4);
  }
}

TEST_CASE("real split delivers real bases") {
  Mat M(3, 3);
  M << -2, 1, 0, 0, -1, 4, 0, 0, 3;
  auto rs = realSpectralSplit(M);
  REQUIRE(rs.basisMinus.cols() == 2);
  REQUIRE(rs.basisPlus.cols() == 1);
  CHECK((M * rs.basisMinus -
         rs.basisMinus * (rs.basisMinus.transpose() * M * rs.basisMinus))
            .norm() < 1e-10);
}

TEST_CASE("procrustes alignment reaches the anchor") {
  CMat anchor(3, 2);
  anchor.setZero();
  anchor(0, 0) = 1;
  anchor(1, 1) = 1;
  // Same subspace, rotated basis.
  CMat B(3, 2);
  const double c = std::cos(0.3), s = std::sin(0.3);
  B.setZero();
  B(0, 0) = c;
  B(1, 0) = s;
  B(0, 1) = -s;
  B(1, 1) = c;
  auto [aligned, overlap] = procrustesAlign(B, anchor);
  CHECK(overlap > 0.999999);
  CHECK((aligned - anchor).norm() < 1e-12);
}

TEST_CASE("nullSpace and subspaceDet conventions") {
  CMat A(1, 3);
  A << Complex(1, 0), Complex(0, 1), Complex(0, 0);
  CMat K = nullSpace(A);
  REQUIRE(K.cols() == 2);
  CHECK((A * K).norm() < 1e-13);
  // nonsquare determinant convention
  CMat E = CMat::Identity(3, 1);
  CHECK(std::abs(subspaceDet(E, K.leftCols(1))) == 0.0);
}

TEST_CASE("matrix exponential sanity") {
  Mat A(2, 2);
  A << 0, 1, 0, 0;
  Mat E = matExp(A);
  CHECK(std::abs(E(0, 1) - 1.0) < 1e-14);
  CHECK(std::abs(E(0, 0) - 1.0) < 1e-14);
}

TEST_CASE("exponential fit recovers rate") {
  std::vector<double> x, y;
  for (int i = 0; i < 30; ++i) {
    x.push_back(0.3 * i);
    y.push_back(2.5 * std::exp(-0.8 * 0.3 * i));
  }
  auto [C, rate] = expFit(x, y);
  CHECK(std::abs(C - 2.5) < 1e-10);
  CHECK(std::abs(rate - 0.8) < 1e-12);
}
