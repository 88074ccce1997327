#ifndef EVANSCOPE_LINALG_HPP
#define EVANSCOPE_LINALG_HPP

#include <functional>
#include <vector>

#include "evanscope/types.hpp"

namespace evanscope {

// Invariant-subspace pair of a matrix with no spectrum near the imaginary
// axis: orthonormal bases of the stable/unstable subspaces and the (oblique)
// spectral projectors onto them.
struct SpectralSplit {
  CMat basisMinus;  // columns span E_-(M)
  CMat basisPlus;   // columns span E_+(M)
  CMat projMinus;
  CMat projPlus;
  double gap = 0.0;  // min |Re lambda| over the spectrum
};

// Complex Schur form with eigenvalues reordered so that those selected by
// `pick` come first. Returns (Q, T) with M = Q T Q^*.
std::pair<CMat, CMat> sortedSchur(const CMat& M,
                                  const std::function<bool(Complex)>& pick);

// Orthonormal basis + spectral projector of the invariant subspace for the
// selected eigenvalue cluster.
struct ClusterSplit {
  CMat basis;        // orthonormal, dim = #selected
  CMat projector;    // spectral projector onto the cluster subspace
  CMat basisOther;   // orthonormal basis of the complementary subspace
  CMat projectorOther;
  double gap = 0.0;  // distance between the two eigenvalue clusters (see impl)
  std::vector<Complex> inside, outside;
};

ClusterSplit clusterSplit(const CMat& M, const std::function<bool(Complex)>& pick);

SpectralSplit spectralSplit(const CMat& M, double axisRel = 1e-8);
SpectralSplit spectralSplit(const Mat& M, double axisRel = 1e-8);

// Real stable/unstable invariant subspaces of a real matrix (bases are real
// orthonormal; the complex split is their complexification).
struct RealSplit {
  Mat basisMinus;
  Mat basisPlus;
  Mat projMinus;
  Mat projPlus;
  double gap = 0.0;
};
RealSplit realSpectralSplit(const Mat& M, double axisRel = 1e-8);

// Orthonormalize columns (thin QR with sign fix for reproducibility).
CMat orthonormalize(const CMat& A);
Mat orthonormalize(const Mat& A);

// Align an orthonormal basis `B` with a reference orthonormal basis `anchor`
// spanning (approximately) the same subspace: returns B*U*V^H for the SVD
// B^H anchor = U S V^H, plus the smallest overlap singular value.
std::pair<CMat, double> procrustesAlign(const CMat& B, const CMat& anchor);

// Orthonormal basis of ker(A) via SVD, relative threshold `nullRel`.
CMat nullSpace(const CMat& A, double nullRel = 1e-8);

int svdRank(const CMat& A, double rankRel, double* gapOut = nullptr,
            std::vector<double>* singular = nullptr);

Complex determinant(const CMat& A);

// det(E, F) of Definition-style subspace determinants: columns of E then F.
Complex subspaceDet(const CMat& E, const CMat& F);

// Least-squares / minimum-norm solve via complete orthogonal decomposition.
CVec lsSolve(const CMat& A, const CVec& b);

CMat matExp(const CMat& A);
Mat matExp(const Mat& A);

// Least-squares exponential fit |y_i| ~ C e^{-rate * x_i} on positive data;
// returns {C, rate}; entries with |y| < floor are ignored.
std::pair<double, double> expFit(const std::vector<double>& x,
                                 const std::vector<double>& y,
                                 double floorVal = 1e-300);

}  // namespace evanscope

#endif
