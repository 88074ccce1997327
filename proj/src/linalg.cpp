#include "evanscope/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>

namespace evanscope {

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainError: return "domain-error";
    case ErrorCode::AxisEigenvalue: return "axis-eigenvalue";
    case ErrorCode::CharacteristicShock: return "characteristic-shock";
    case ErrorCode::RadiusError: return "radius-error";
    case ErrorCode::TruncationError: return "truncation-error";
    case ErrorCode::NewtonNonconvergence: return "newton-nonconvergence";
    case ErrorCode::TransversalityFailure: return "transversality-failure";
    case ErrorCode::ChartDomain: return "chart-domain";
    case ErrorCode::ConjugationGrowth: return "conjugation-growth";
    case ErrorCode::HpGap: return "hp-gap";
    case ErrorCode::DegenerateProfile: return "degenerate-profile";
    case ErrorCode::SubspaceDimension: return "subspace-dimension";
    case ErrorCode::ContinuationNeeded: return "continuation-needed";
    case ErrorCode::ConfigError: return "config-error";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

namespace {

// Swap the adjacent diagonal entries (i, i+1) of an upper triangular T by a
// unitary similarity, updating Q accordingly.
void swapSchur(CMat& T, CMat& Q, Eigen::Index i) {
  const Complex a = T(i, i);
  const Complex b = T(i, i + 1);
  const Complex c = T(i + 1, i + 1);
  // Eigenvector of the 2x2 block for eigenvalue c.
  Complex v1 = b;
  Complex v2 = c - a;
  const double nv = std::sqrt(std::norm(v1) + std::norm(v2));
  if (nv < 1e-300) return;  // equal eigenvalues, swap is a no-op
  v1 /= nv;
  v2 /= nv;
  CMat G(2, 2);
  G << v1, -std::conj(v2), v2, std::conj(v1);
  T.middleCols(i, 2) = T.middleCols(i, 2) * G;
  T.middleRows(i, 2) = G.adjoint() * T.middleRows(i, 2);
  Q.middleCols(i, 2) = Q.middleCols(i, 2) * G;
  T(i + 1, i) = 0.0;
}

// Solve T11 R - R T22 = -T12 for triangular T11, T22 (small sizes, Kronecker).
CMat sylvesterUpper(const CMat& T11, const CMat& T22, const CMat& T12) {
  const Eigen::Index m = T11.rows(), n = T22.rows();
  CMat K = CMat::Zero(m * n, m * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index row = j * m + i;
      for (Eigen::Index k = 0; k < m; ++k) K(row, j * m + k) += T11(i, k);
      for (Eigen::Index k = 0; k < n; ++k) K(row, k * m + i) -= T22(k, j);
    }
  CVec rhs(m * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < m; ++i) rhs(j * m + i) = -T12(i, j);
  CVec x = K.fullPivLu().solve(rhs);
  CMat R(m, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < m; ++i) R(i, j) = x(j * m + i);
  return R;
}

void fixColumnPhases(CMat& Q) {
  for (Eigen::Index j = 0; j < Q.cols(); ++j) {
    Eigen::Index imax = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < Q.rows(); ++i) {
      const double m = std::abs(Q(i, j));
      if (m > best) { best = m; imax = i; }
    }
    if (best > 0) Q.col(j) *= std::conj(Q(imax, j)) / std::abs(Q(imax, j));
  }
}

}  // namespace

std::pair<CMat, CMat> sortedSchur(const CMat& M,
                                  const std::function<bool(Complex)>& pick) {
  Eigen::ComplexSchur<CMat> schur(M, true);
  if (schur.info() != Eigen::Success)
    throw Error(ErrorCode::Internal, "complex Schur factorization failed");
  CMat T = schur.matrixT();
  CMat Q = schur.matrixU();
  const Eigen::Index n = M.rows();
  Eigen::Index target = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!pick(T(k, k))) continue;
    for (Eigen::Index j = k; j > target; --j) swapSchur(T, Q, j - 1);
    ++target;
  }
  return {Q, T};
}

ClusterSplit clusterSplit(const CMat& M,
                          const std::function<bool(Complex)>& pick) {
  const Eigen::Index n = M.rows();
  auto [Q, T] = sortedSchur(M, pick);
  Eigen::Index m = 0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (pick(T(k, k))) ++m;

  ClusterSplit out;
  for (Eigen::Index k = 0; k < n; ++k)
    (k < m ? out.inside : out.outside).push_back(T(k, k));
  out.gap = std::numeric_limits<double>::infinity();
  for (const Complex& a : out.inside)
    for (const Complex& b : out.outside)
      out.gap = std::min(out.gap, std::abs(a - b));

  CMat basis = Q.leftCols(m);
  fixColumnPhases(basis);
  out.basis = basis;
  if (m == 0) {
    out.projector = CMat::Zero(n, n);
    out.projectorOther = CMat::Identity(n, n);
    out.basisOther = Q;
    return out;
  }
  if (m == n) {
    out.projector = CMat::Identity(n, n);
    out.projectorOther = CMat::Zero(n, n);
    out.basisOther = CMat(n, 0);
    return out;
  }
  const CMat R = sylvesterUpper(T.topLeftCorner(m, m),
                                T.bottomRightCorner(n - m, n - m),
                                T.topRightCorner(m, n - m));
  CMat Pi = CMat::Zero(n, n);
  Pi.topLeftCorner(m, m) = CMat::Identity(m, m);
  Pi.topRightCorner(m, n - m) = -R;
  out.projector = Q * Pi * Q.adjoint();
  out.projectorOther = CMat::Identity(n, n) - out.projector;
  CMat comp(n, n - m);
  CMat tail = CMat::Zero(n, n - m);
  tail.topRows(m) = R;
  tail.bottomRows(n - m) = CMat::Identity(n - m, n - m);
  out.basisOther = orthonormalize(CMat(Q * tail));
  return out;
}

SpectralSplit spectralSplit(const CMat& M, double axisRel) {
  const double scale = std::max(M.norm(), 1e-300);
  Eigen::ComplexEigenSolver<CMat> es(M, false);
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < M.rows(); ++k)
    gap = std::min(gap, std::abs(es.eigenvalues()(k).real()));
  if (gap <= axisRel * scale)
    throw Error(ErrorCode::AxisEigenvalue,
                "eigenvalue within " + std::to_string(gap) +
                    " of the imaginary axis (matrix scale " +
                    std::to_string(scale) + ")");
  auto cs = clusterSplit(M, [](Complex z) { return z.real() < 0.0; });
  SpectralSplit out;
  out.basisMinus = cs.basis;
  out.basisPlus = cs.basisOther;
  out.projMinus = cs.projector;
  out.projPlus = cs.projectorOther;
  out.gap = gap;
  return out;
}

SpectralSplit spectralSplit(const Mat& M, double axisRel) {
  return spectralSplit(CMat(M.cast<Complex>()), axisRel);
}

RealSplit realSpectralSplit(const Mat& M, double axisRel) {
  SpectralSplit cs = spectralSplit(M, axisRel);
  RealSplit out;
  out.gap = cs.gap;
  out.projMinus = cs.projMinus.real();
  out.projPlus = cs.projPlus.real();
  auto realBasis = [](const Mat& proj, Eigen::Index dim) {
    if (dim == 0) return Mat(proj.rows(), 0);
    Eigen::ColPivHouseholderQR<Mat> qr(proj);
    Mat Q = qr.householderQ();
    return orthonormalize(Mat(Q.leftCols(dim)));
  };
  out.basisMinus = realBasis(out.projMinus, cs.basisMinus.cols());
  out.basisPlus = realBasis(out.projPlus, cs.basisPlus.cols());
  return out;
}

CMat orthonormalize(const CMat& A) {
  if (A.cols() == 0) return A;
  Eigen::HouseholderQR<CMat> qr(A);
  CMat Q = qr.householderQ() * CMat::Identity(A.rows(), A.cols());
  fixColumnPhases(Q);
  return Q;
}

Mat orthonormalize(const Mat& A) {
  if (A.cols() == 0) return A;
  Eigen::HouseholderQR<Mat> qr(A);
  Mat Q = qr.householderQ() * Mat::Identity(A.rows(), A.cols());
  for (Eigen::Index j = 0; j < Q.cols(); ++j) {
    Eigen::Index imax = 0;
    Q.col(j).cwiseAbs().maxCoeff(&imax);
    if (Q(imax, j) < 0) Q.col(j) = -Q.col(j);
  }
  return Q;
}

std::pair<CMat, double> procrustesAlign(const CMat& B, const CMat& anchor) {
  if (B.cols() == 0) return {B, 1.0};
  CMat M = B.adjoint() * anchor;
  Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double overlap = svd.singularValues().minCoeff();
  return {B * (svd.matrixU() * svd.matrixV().adjoint()), overlap};
}

CMat nullSpace(const CMat& A, double nullRel) {
  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = (sv.size() > 0 ? sv(0) : 0.0) * nullRel;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > cut) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

int svdRank(const CMat& A, double rankRel, double* gapOut,
            std::vector<double>* singular) {
  Eigen::JacobiSVD<CMat> svd(A);
  const auto& sv = svd.singularValues();
  if (singular) singular->assign(sv.data(), sv.data() + sv.size());
  if (sv.size() == 0) return 0;
  const double cut = sv(0) * rankRel;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > cut) ++rank;
  if (gapOut) {
    if (rank == 0 || rank == sv.size())
      *gapOut = std::numeric_limits<double>::infinity();
    else
      *gapOut = sv(rank - 1) / std::max(sv(rank), 1e-300);
  }
  return rank;
}

Complex determinant(const CMat& A) { return A.fullPivLu().determinant(); }

Complex subspaceDet(const CMat& E, const CMat& F) {
  if (E.rows() != F.rows() || E.cols() + F.cols() != E.rows())
    return Complex(0.0, 0.0);  // nonsquare convention
  CMat M(E.rows(), E.rows());
  M << E, F;
  return determinant(M);
}

CVec lsSolve(const CMat& A, const CVec& b) {
  return A.completeOrthogonalDecomposition().solve(b);
}

CMat matExp(const CMat& A) { return A.exp(); }
Mat matExp(const Mat& A) { return A.exp(); }

std::pair<double, double> expFit(const std::vector<double>& x,
                                 const std::vector<double>& y,
                                 double floorVal) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(std::abs(y[i]) > floorVal)) continue;
    const double ly = std::log(std::abs(y[i]));
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
    ++n;
  }
  if (n < 2) return {0.0, 0.0};
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) return {0.0, 0.0};
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy * sxx - sx * sxy) / det;
  return {std::exp(intercept), -slope};
}

}  // namespace evanscope
