#include "evanscope/conjugation.hpp"

#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

namespace evanscope {

LinearizedSymbol::LinearizedSymbol(const ConnectionPoint& cp)
    : cp_(std::make_shared<ConnectionPoint>(cp)),
      bh_(1.0 / (1.0 + cp.q.h.squaredNorm())),
      wPlus_(cp.profile.tableW(+1)),
      wMinus_(cp.profile.tableW(-1)),
      wpPlus_(cp.profile.tableWp(*cp.frame->model, cp.q.s, cp.q.h, +1)),
      wpMinus_(cp.profile.tableWp(*cp.frame->model, cp.q.s, cp.q.h, -1)) {}

Vec LinearizedSymbol::W(int side, double z) const {
  return side > 0 ? wPlus_.eval(z) : wMinus_.eval(z);
}
Vec LinearizedSymbol::Wz(int side, double z) const {
  return side > 0 ? wpPlus_.eval(z) : wpMinus_.eval(z);
}
Vec LinearizedSymbol::Wzz(int side, double z) const {
  return side > 0 ? wpPlus_.evalDeriv(z) : wpMinus_.evalDeriv(z);
}

const Vec& LinearizedSymbol::grid(int side) const {
  return side > 0 ? cp_->profile.zPlus : cp_->profile.zMinus;
}

namespace {

CMat lowerBlocks(const SystemModel& model, double b, const Vec& u,
                 const Vec& wz, double s, const Vec& h, const Frequency& zeta,
                 CMat& G22out) {
  const int N = model.N();
  const Complex iTauGamma(zeta.gamma, zeta.tau);
  CMat G21 = CMat::Zero(N, N);
  // d_w curlyAd(W) . e_k applied to W'
  if (wz.norm() > 0) {
    Mat Mw(N, N);
    for (int k = 0; k < N; ++k)
      Mw.col(k) = model.dCurlyAd(u, s, h, Vec::Unit(N, k)) * wz;
    G21 += Mw.cast<Complex>();
  }
  G21 += iTauGamma * model.A(0, u).cast<Complex>();
  for (int j = 1; j < model.d(); ++j)
    G21 += Complex(0.0, zeta.eta(j - 1)) * model.A(j, u).cast<Complex>();
  G21 += zeta.eta.squaredNorm() * CMat::Identity(N, N);
  G21 *= b;

  CMat G22 = (b * model.curlyAd(u, s, h)).cast<Complex>();
  for (int j = 1; j < model.d(); ++j)
    G22 += b * 2.0 * h(j - 1) * Complex(0.0, zeta.eta(j - 1)) *
           CMat::Identity(N, N);
  G22out = G22;
  return G21;
}

}  // namespace

CMat LinearizedSymbol::G(int side, double z, const Frequency& zeta) const {
  const SystemModel& m = model();
  const int N = m.N();
  CMat out = CMat::Zero(2 * N, 2 * N);
  out.topRightCorner(N, N).setIdentity();
  CMat G22;
  out.bottomLeftCorner(N, N) = lowerBlocks(m, bh_, W(side, z), Wz(side, z),
                                           cp_->q.s, cp_->q.h, zeta, G22);
  out.bottomRightCorner(N, N) = G22;
  return out;
}

CMat LinearizedSymbol::GLimit(int side, const Frequency& zeta) const {
  const SystemModel& m = model();
  const int N = m.N();
  const Vec& p = side > 0 ? cp_->q.pPlus : cp_->q.pMinus;
  CMat out = CMat::Zero(2 * N, 2 * N);
  out.topRightCorner(N, N).setIdentity();
  CMat G22;
  out.bottomLeftCorner(N, N) =
      lowerBlocks(m, bh_, p, Vec::Zero(N), cp_->q.s, cp_->q.h, zeta, G22);
  out.bottomRightCorner(N, N) = G22;
  return out;
}

CMat LinearizedSymbol::G22Limit(int side, const Frequency& zeta) const {
  return GLimit(side, zeta).bottomRightCorner(N(), N());
}

LinearizedSymbol assembleSymbol(const ConnectionPoint& cp) {
  return LinearizedSymbol(cp);
}

namespace {

// One Lobatto-IIIA(4) cell of the linear system v' = A(z) v + g(z):
// returns matrices (Cl, Cr) and vector rhs with Cl v_l + Cr v_r = rhs.
struct LinearCell {
  CMat Cl, Cr;
  CVec rhs;
};

LinearCell lobattoCell(const CMat& Al, const CMat& Am, const CMat& Ar,
                       const CVec& gl, const CVec& gm, const CVec& gr,
                       double h) {
  const Eigen::Index n = Al.rows();
  const CMat I = CMat::Identity(n, n);
  // vm = (vl + vr)/2 + h/8 (Al vl + gl - Ar vr - gr)
  const CMat Vml = 0.5 * I + (h / 8.0) * Al;
  const CMat Vmr = 0.5 * I - (h / 8.0) * Ar;
  const CVec vmg = (h / 8.0) * (gl - gr);
  LinearCell cell;
  cell.Cl = -I - (h / 6.0) * (Al + 4.0 * Am * Vml);
  cell.Cr = I - (h / 6.0) * (Ar + 4.0 * Am * Vmr);
  cell.rhs = (h / 6.0) * (gl + 4.0 * (Am * vmg + gm) + gr);
  return cell;
}

}  // namespace

// The conjugation ODE dY/dz = G Y - Y Ginf decouples into columns after
// multiplying by the eigenvector matrix of Ginf: each column of Y R solves
// v' = (G(z) - lambda_c) v with v -> r_c at infinity. Writing v = r_c + e,
// the correction e solves a small linear boundary value problem whose
// boundary conditions split the shifted spectrum: components along modes
// with Re(lambda_i - lambda_c) >= 0 vanish at the far end, the others at the
// interface. This keeps every mode anchored on its stable side.
ConjugatorGrid computeConjugator(const LinearizedSymbol& sym, int side,
                                 const Frequency& zeta,
                                 const Tolerances& tol) {
  const Vec& z = sym.grid(side);
  const Eigen::Index M = z.size();
  const int n = 2 * sym.N();
  const CMat Ginf = sym.GLimit(side, zeta);
  {
    const double zOuter = side > 0 ? z(M - 1) : z(0);
    const double dev = (sym.G(side, zOuter, zeta) - Ginf).norm();
    if (dev > 1e4 * tol.decayTarget * (1.0 + Ginf.norm()))
      throw Error(ErrorCode::TruncationError,
                  "profile grid tail too short for conjugation: |G - Ginf| = " +
                      std::to_string(dev) + " at the outer node");
  }

  Eigen::ComplexEigenSolver<CMat> es(Ginf, true);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::Internal, "eigensolve of the limit symbol failed");
  const CMat R = es.eigenvectors();
  Eigen::FullPivLU<CMat> Rlu(R);
  if (!Rlu.isInvertible() ||
      Rlu.rcond() < 1e-10)
    throw Error(ErrorCode::ConjugationGrowth,
                "limit symbol is too close to defective for the column-wise "
                "conjugator construction");
  const CMat Rinv = Rlu.inverse();
  const CVec lambda = es.eigenvalues();

  // Interface node: first node for the + side, last for the - side.
  const bool plusSide = side > 0;

  // Precompute G and Delta at nodes and cell midpoints.
  std::vector<CMat> Gnode(M), Gmid(M - 1);
  for (Eigen::Index j = 0; j < M; ++j) Gnode[j] = sym.G(side, z(j), zeta);
  for (Eigen::Index c = 0; c + 1 < M; ++c)
    Gmid[c] = sym.G(side, 0.5 * (z(c) + z(c + 1)), zeta);

  // Solve the correction BVP for each column.
  std::vector<CMat> Yhat(M, CMat(n, n));
  for (int col = 0; col < n; ++col) {
    const Complex lc = lambda(col);
    const CVec rc = R.col(col);
    // Boundary splitting by the shifted spectrum: modes that do not decay
    // toward the far end are pinned there, the rest at the interface.
    std::vector<int> farRows, nearRows;
    for (int i = 0; i < n; ++i) {
      const double rate = (lambda(i) - lc).real() * (plusSide ? 1.0 : -1.0);
      if (rate >= 0.0)
        farRows.push_back(i);
      else
        nearRows.push_back(i);
    }
    const Eigen::Index unknowns = n * M;
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<size_t>(unknowns) * 2 * n);
    CVec rhs = CVec::Zero(unknowns);

    // interface condition rows (Rinv rows of nearRows applied at the
    // interface node), far condition rows at the outer node.
    const Eigen::Index iInterface = plusSide ? 0 : M - 1;
    const Eigen::Index iFar = plusSide ? M - 1 : 0;
    Eigen::Index row = 0;
    for (int i : nearRows) {
      for (int k = 0; k < n; ++k)
        trips.emplace_back(row, n * iInterface + k, Rinv(i, k));
      ++row;
    }
    for (Eigen::Index c = 0; c + 1 < M; ++c) {
      const double h = z(c + 1) - z(c);
      const CMat shift = lc * CMat::Identity(n, n);
      const CMat Al = Gnode[c] - shift;
      const CMat Am = Gmid[c] - shift;
      const CMat Ar = Gnode[c + 1] - shift;
      const CVec gl = (Gnode[c] - Ginf) * rc;
      const CVec gm =
          (Gmid[c] - Ginf) * rc;
      const CVec gr = (Gnode[c + 1] - Ginf) * rc;
      LinearCell cell = lobattoCell(Al, Am, Ar, gl, gm, gr, h);
      for (int i = 0; i < n; ++i) {
        rhs(row) = cell.rhs(i);
        for (int k = 0; k < n; ++k) {
          trips.emplace_back(row, n * c + k, cell.Cl(i, k));
          trips.emplace_back(row, n * (c + 1) + k, cell.Cr(i, k));
        }
        ++row;
      }
    }
    for (int i : farRows) {
      for (int k = 0; k < n; ++k)
        trips.emplace_back(row, n * iFar + k, Rinv(i, k));
      ++row;
    }

    Eigen::SparseMatrix<Complex> A(unknowns, unknowns);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu(A);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorCode::ConjugationGrowth,
                  "conjugator boundary value problem is singular");
    const CVec e = lu.solve(rhs);
    for (Eigen::Index j = 0; j < M; ++j)
      Yhat[j].col(col) = rc + e.segment(n * j, n);
  }

  ConjugatorGrid out;
  out.side = side;
  out.z = z;
  out.Y.assign(M, CMat());
  for (Eigen::Index j = 0; j < M; ++j) out.Y[j] = Yhat[j] * Rinv;

  double maxNorm = 0.0, maxCond = 0.0;
  for (const CMat& Yk : out.Y) {
    maxNorm = std::max(maxNorm, Yk.norm());
    Eigen::JacobiSVD<CMat> svd(Yk);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    maxCond = std::max(maxCond, smax / std::max(smin, 1e-300));
  }
  out.maxCondition = maxCond;
  if (maxNorm > 1e6)
    throw Error(ErrorCode::ConjugationGrowth,
                "conjugator grew beyond bound; enlarge the grid or reduce the "
                "step size");

  // Cross-scheme defect of the Sylvester ODE: the columns of Y R satisfy
  // homogeneous shifted systems v' = (G - lambda_c) v; re-propagate each cell
  // with two half Lobatto steps and compare at the far node.
  double defect = 0.0;
  const CMat Icc = CMat::Identity(n, n);
  for (Eigen::Index c = 0; c + 1 < M; ++c) {
    const double h = z(c + 1) - z(c);
    const double hh = 0.5 * h;
    const CMat As[5] = {Gnode[c], sym.G(side, z(c) + 0.5 * hh, zeta), Gmid[c],
                        sym.G(side, z(c) + 1.5 * hh, zeta), Gnode[c + 1]};
    CMat Yh = Yhat[c];
    for (int col = 0; col < n; ++col) {
      const Complex lc = lambda(col);
      LinearCell cell1 = lobattoCell(As[0] - lc * Icc, As[1] - lc * Icc,
                                     As[2] - lc * Icc, CVec::Zero(n),
                                     CVec::Zero(n), CVec::Zero(n), hh);
      CVec mid = cell1.Cr.fullPivLu().solve(-cell1.Cl * Yh.col(col));
      LinearCell cell2 = lobattoCell(As[2] - lc * Icc, As[3] - lc * Icc,
                                     As[4] - lc * Icc, CVec::Zero(n),
                                     CVec::Zero(n), CVec::Zero(n), hh);
      Yh.col(col) = cell2.Cr.fullPivLu().solve(-cell2.Cl * mid);
    }
    defect = std::max(defect, (Yh * Rinv - out.Y[c + 1]).norm() / h);
  }
  out.maxDefect = defect;

  // Exponential fit of ||Y - I|| on the outer half.
  {
    std::vector<double> xs, ys;
    const CMat I = CMat::Identity(Ginf.rows(), Ginf.cols());
    for (Eigen::Index j = 0; j < M; ++j) {
      const double az = std::abs(z(j));
      if (az < 0.5 * std::abs(side > 0 ? z(M - 1) : z(0))) continue;
      xs.push_back(az);
      ys.push_back((out.Y[j] - I).norm());
    }
    auto [C, rate] = expFit(xs, ys, 1e-13);
    out.devPrefactor = C;
    out.devRate = rate;
  }
  return out;
}

HPBlocks hpSplit(const LinearizedSymbol& sym, int side, const Frequency& zeta,
                 const Tolerances& tol) {
  const int N = sym.N();
  const CMat Ginf = sym.GLimit(side, zeta);
  const CMat G22 = Ginf.bottomRightCorner(N, N);
  const double rho = zeta.rho();

  HPBlocks out;
  if (rho == 0.0) {
    // Exact anchored form at zero frequency.
    out.Lambda = CMat::Identity(2 * N, 2 * N);
    out.Lambda.topRightCorner(N, N) = G22.fullPivLu().inverse();
    out.H = CMat::Zero(N, N);
    out.P = G22;
    Eigen::ComplexEigenSolver<CMat> es(G22, false);
    out.clusterGap = es.eigenvalues().cwiseAbs().minCoeff();
    out.clusterRadius = 0.0;
    out.gapOK = true;
    out.similarityResidual = 0.0;
    return out;
  }

  const double thresh = std::sqrt(rho);
  auto pick = [thresh](Complex mu) { return std::abs(mu) <= thresh; };
  ClusterSplit cs = clusterSplit(Ginf, pick);
  if ((int)cs.inside.size() != N)
    throw Error(ErrorCode::HpGap,
                "slow/fast clustering found " + std::to_string(cs.inside.size()) +
                    " slow eigenvalues instead of " + std::to_string(N) +
                    " (threshold sqrt(rho) = " + std::to_string(thresh) + ")");

  double slowRadius = 0.0, fastMin = std::numeric_limits<double>::infinity();
  for (const Complex& mu : cs.inside) slowRadius = std::max(slowRadius, std::abs(mu));
  for (const Complex& mu : cs.outside) fastMin = std::min(fastMin, std::abs(mu));
  out.clusterRadius = slowRadius;
  out.clusterGap = fastMin - slowRadius;
  out.gapOK = out.clusterGap >= tol.hpGapFactor * slowRadius;

  CMat EH = CMat::Zero(2 * N, N);
  EH.topRows(N).setIdentity();
  CMat EP(2 * N, N);
  EP.topRows(N) = G22.fullPivLu().inverse();
  EP.bottomRows(N).setIdentity();

  out.Lambda.resize(2 * N, 2 * N);
  out.Lambda.leftCols(N) = cs.projector * EH;
  out.Lambda.rightCols(N) = cs.projectorOther * EP;
  const CMat S = out.Lambda.fullPivLu().solve(Ginf * out.Lambda);
  out.H = S.topLeftCorner(N, N);
  out.P = S.bottomRightCorner(N, N);
  out.similarityResidual =
      S.topRightCorner(N, N).norm() + S.bottomLeftCorner(N, N).norm();
  if (out.similarityResidual > 1e-8 * (1.0 + Ginf.norm()))
    throw Error(ErrorCode::HpGap,
                "HP similarity residual too large: " +
                    std::to_string(out.similarityResidual));
  return out;
}

CMat TotalConjugator::block0(int row, int col) const {
  const CMat T = at0();
  const int N = T.rows() / 2;
  return T.block(row * N, col * N, N, N);
}

TotalConjugator totalConjugator(const LinearizedSymbol& sym, int side,
                                const Frequency& zeta, const Tolerances& tol) {
  TotalConjugator out;
  out.Y = computeConjugator(sym, side, zeta, tol);
  out.hp = hpSplit(sym, side, zeta, tol);
  return out;
}

}  // namespace evanscope
