#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "evanscope/profile.hpp"

namespace evanscope {

// ---------------------------------------------------------------------------
// HermiteTable

HermiteTable::HermiteTable(Vec z, Mat values, Mat derivs)
    : z_(std::move(z)), val_(std::move(values)), der_(std::move(derivs)) {}

Eigen::Index HermiteTable::cell(double z) const {
  const Eigen::Index M = z_.size();
  if (z <= z_(0)) return 0;
  if (z >= z_(M - 1)) return M - 2;
  Eigen::Index lo = 0, hi = M - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    (z_(mid) <= z ? lo : hi) = mid;
  }
  return lo;
}

Vec HermiteTable::eval(double z) const {
  const Eigen::Index i = cell(z);
  const double h = z_(i + 1) - z_(i);
  const double t = (z - z_(i)) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * val_.col(i) + h10 * h * der_.col(i) + h01 * val_.col(i + 1) +
         h11 * h * der_.col(i + 1);
}

Vec HermiteTable::evalDeriv(double z) const {
  const Eigen::Index i = cell(z);
  const double h = z_(i + 1) - z_(i);
  const double t = (z - z_(i)) / h;
  const double d00 = (6 * t * t - 6 * t) / h;
  const double d10 = 3 * t * t - 4 * t + 1;
  const double d01 = (6 * t - 6 * t * t) / h;
  const double d11 = 3 * t * t - 2 * t;
  return d00 * val_.col(i) + d10 * der_.col(i) + d01 * val_.col(i + 1) +
         d11 * der_.col(i + 1);
}

// ---------------------------------------------------------------------------
// TailSolution access

Vec TailSolution::phiAt0() const {
  return side > 0 ? u.col(0) : u.col(u.cols() - 1);
}

Vec TailSolution::phiPrimeAt0() const {
  return side > 0 ? v.col(0) : v.col(v.cols() - 1);
}

Eigen::Index TailSolution::indexOf(double zval) const {
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (std::abs(z(i) - zval) < 1e-12) return i;
  throw Error(ErrorCode::Internal, "requested z is not a tail grid node");
}

// ---------------------------------------------------------------------------
// Grids

Vec makeTailGrid(const SystemModel& model, const Vec& p, double s, const Vec& h,
                 double zbar, const Tolerances& tol) {
  const double b = 1.0 / (1.0 + h.squaredNorm());
  Mat G = b * model.curlyAd(p, s, h);
  Eigen::EigenSolver<Mat> es(G, false);
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < model.N(); ++i)
    gap = std::min(gap, std::abs(es.eigenvalues()(i).real()));
  if (!(gap > 0))
    throw Error(ErrorCode::CharacteristicShock,
                "G_d has an eigenvalue on the imaginary axis");
  const double delta = 0.5 * gap;
  const double L = std::log(1.0 / tol.decayTarget) / delta;

  std::vector<double> nodes;
  const int back = std::max(1, (int)std::lround(-zbar / tol.tailStep));
  for (int k = 0; k < back; ++k)
    nodes.push_back(zbar * double(back - k) / double(back));
  nodes.push_back(0.0);
  const double core = std::min(4.0, L);
  const int nc = std::max(1, (int)std::lround(core / tol.tailStep));
  for (int k = 1; k <= nc; ++k) nodes.push_back(core * double(k) / double(nc));
  double step = tol.tailStep;
  const double hmax = std::min(0.35, 0.25 / delta);
  double z = core;
  while (z < L) {
    step = std::min(step * tol.tailGrowth, hmax);
    z += step;
    nodes.push_back(std::min(z, L));
  }
  Vec out(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) out(i) = nodes[i];
  return out;
}

// ---------------------------------------------------------------------------
// Core one-sided solver. Works in coordinates where the endstate is reached
// as y -> +infinity; the minus side is mirrored into this form by the caller.

namespace {

struct CoreProblem {
  std::function<Mat(const Vec&)> G;                  // G(u)
  std::function<Mat(const Vec&, const Vec&)> dGdir;  // (d_u G(u)) . dir
  Vec p;        // endstate
  Vec alpha;    // in E_-(G(p))
  Vec grid;     // ascending, contains 0; leading part [zbar, 0) is extension
  RealSplit split;  // of G(p)
  Mat Ginf;
};

struct CoreResult {
  Mat u, v;
  double decayRate = 0, decayPrefactor = 0;
  double maxDefect = 0;
  bool usedPicard = false;
  int picardIterations = 0;
};

Mat fJacobian(const CoreProblem& pb, const Vec& u, const Vec& v) {
  const int N = u.size();
  Mat J = Mat::Zero(2 * N, 2 * N);
  J.topRightCorner(N, N).setIdentity();
  Mat C(N, N);
  for (int k = 0; k < N; ++k)
    C.col(k) = pb.dGdir(u, Vec::Unit(N, k)) * v;
  J.bottomLeftCorner(N, N) = C;
  J.bottomRightCorner(N, N) = pb.G(u);
  return J;
}

Vec fRhs(const CoreProblem& pb, const Vec& x) {
  const int N = pb.p.size();
  Vec out(2 * N);
  out.head(N) = x.tail(N);
  out.tail(N) = pb.G(x.head(N)) * x.tail(N);
  return out;
}

// Lobatto IIIA(4) cell residual and its Jacobian blocks.
void cellResidual(const CoreProblem& pb, double h, const Vec& xl, const Vec& xr,
                  Vec& R, Mat* Jl, Mat* Jr) {
  const Vec fl = fRhs(pb, xl), fr = fRhs(pb, xr);
  const Vec xm = 0.5 * (xl + xr) + (h / 8.0) * (fl - fr);
  const Vec fm = fRhs(pb, xm);
  R = xr - xl - (h / 6.0) * (fl + 4.0 * fm + fr);
  if (!Jl) return;
  const Mat Dfl = fJacobian(pb, xl.head(pb.p.size()), xl.tail(pb.p.size()));
  const Mat Dfr = fJacobian(pb, xr.head(pb.p.size()), xr.tail(pb.p.size()));
  const Mat Dfm = fJacobian(pb, xm.head(pb.p.size()), xm.tail(pb.p.size()));
  const int n = xl.size();
  const Mat I = Mat::Identity(n, n);
  const Mat dXm_l = 0.5 * I + (h / 8.0) * Dfl;
  const Mat dXm_r = 0.5 * I - (h / 8.0) * Dfr;
  *Jl = -I - (h / 6.0) * (Dfl + 4.0 * Dfm * dXm_l);
  *Jr = I - (h / 6.0) * (4.0 * Dfm * dXm_r + Dfr);
}

// Solve one cell for the right node given the left node (local IVP step).
Vec cellStep(const CoreProblem& pb, double h, const Vec& xl, const Vec& xr0) {
  Vec xr = xr0;
  for (int it = 0; it < 12; ++it) {
    Vec R;
    Mat Jl, Jr;
    cellResidual(pb, h, xl, xr, R, &Jl, &Jr);
    const Vec dx = Jr.fullPivLu().solve(-R);
    xr += dx;
    if (dx.norm() < 1e-13 * (1.0 + xr.norm())) break;
  }
  return xr;
}

// Same, solving for the left node (backward extension step).
Vec cellStepBack(const CoreProblem& pb, double h, const Vec& xr, const Vec& xl0) {
  Vec xl = xl0;
  for (int it = 0; it < 12; ++it) {
    Vec R;
    Mat Jl, Jr;
    cellResidual(pb, h, xl, xr, R, &Jl, &Jr);
    const Vec dx = Jl.fullPivLu().solve(-R);
    xl += dx;
    if (dx.norm() < 1e-13 * (1.0 + xl.norm())) break;
  }
  return xl;
}

void picardStage(const CoreProblem& pb, Eigen::Index i0, Mat& U, Mat& V,
                 const Tolerances& tol, int* itersOut) {
  const Eigen::Index M = pb.grid.size();
  const int N = pb.p.size();
  const Eigen::Index K = M - i0;  // nodes in [0, L]
  const Mat& Pm = pb.split.projMinus;
  const Mat& Pp = pb.split.projPlus;
  const Mat Ginv = pb.Ginf.fullPivLu().inverse();

  std::vector<Mat> Efwd(K - 1), Ebwd(K - 1);
  for (Eigen::Index c = 0; c + 1 < K; ++c) {
    const double h = pb.grid(i0 + c + 1) - pb.grid(i0 + c);
    Efwd[c] = matExp(Mat(h * pb.Ginf));
    Ebwd[c] = matExp(Mat(-h * pb.Ginf)) * Pp;  // bounded: acts through Pi_+
  }

  // Homogeneous decaying term e^{zG} alpha by stable forward stepping.
  Mat hom(N, K);
  hom.col(0) = pb.alpha;
  for (Eigen::Index c = 0; c + 1 < K; ++c)
    hom.col(c + 1) = Efwd[c] * hom.col(c);

  Mat u = Mat::Zero(N, K), vv = Mat::Zero(N, K);
  for (Eigen::Index j = 0; j < K; ++j) {
    u.col(j) = pb.p;
    vv.col(j) = hom.col(j);
  }
  // u init consistent with v: u = p + I(v)
  {
    Vec J = Ginv * (Pm * vv.col(K - 1));
    u.col(K - 1) = pb.p + J;
    for (Eigen::Index c = K - 1; c-- > 0;) {
      const double h = pb.grid(i0 + c + 1) - pb.grid(i0 + c);
      J -= 0.5 * h * (vv.col(c) + vv.col(c + 1));
      u.col(c) = pb.p + J;
    }
  }

  const double scale0 = std::max(1.0, pb.alpha.norm());
  double prevChange = std::numeric_limits<double>::infinity();
  int iters = 0;
  for (; iters < tol.picardMaxIter; ++iters) {
    Mat F(N, K);
    for (Eigen::Index j = 0; j < K; ++j)
      F.col(j) = (pb.G(u.col(j)) - pb.Ginf) * vv.col(j);

    Mat gm = Mat::Zero(N, K);
    for (Eigen::Index c = 0; c + 1 < K; ++c) {
      const double h = pb.grid(i0 + c + 1) - pb.grid(i0 + c);
      gm.col(c + 1) = Efwd[c] * gm.col(c) +
                      0.5 * h * (Efwd[c] * (Pm * F.col(c)) + Pm * F.col(c + 1));
    }
    Mat gp = Mat::Zero(N, K);
    for (Eigen::Index c = K - 1; c-- > 0;) {
      const double h = pb.grid(i0 + c + 1) - pb.grid(i0 + c);
      gp.col(c) = Ebwd[c] * gp.col(c + 1) +
                  0.5 * h * (Pp * F.col(c) + Ebwd[c] * F.col(c + 1));
    }

    Mat vNew(N, K);
    for (Eigen::Index j = 0; j < K; ++j)
      vNew.col(j) = hom.col(j) + gm.col(j) - gp.col(j);
    Mat uNew(N, K);
    {
      Vec J = Ginv * (Pm * vNew.col(K - 1));
      uNew.col(K - 1) = pb.p + J;
      for (Eigen::Index c = K - 1; c-- > 0;) {
        const double h = pb.grid(i0 + c + 1) - pb.grid(i0 + c);
        J -= 0.5 * h * (vNew.col(c) + vNew.col(c + 1));
        uNew.col(c) = pb.p + J;
      }
    }

    const double change = (vNew - vv).norm() / scale0;
    const double w = tol.picardDamping;
    vv = (1.0 - w) * vv + w * vNew;
    u = (1.0 - w) * u + w * uNew;
    if (change < 1e-12) break;
    if (iters > 4 && change > 4.0 * prevChange && change > 1.0)
      throw Error(ErrorCode::RadiusError,
                  "tail fixed point is not contracting; reduce |a| or move "
                  "the translate zbar outward");
    prevChange = change;
  }
  if (itersOut) *itersOut = iters;
  U.middleCols(i0, K) = u;
  V.middleCols(i0, K) = vv;
}

void collocationStage(const CoreProblem& pb, Eigen::Index i0, Mat& U, Mat& V,
                      const Tolerances& tol) {
  const Eigen::Index M = pb.grid.size();
  const int N = pb.p.size();
  const Eigen::Index K = M - i0;
  const int n = 2 * N;
  const Eigen::Index unknowns = n * K;
  const int Rm = pb.split.basisMinus.cols();

  // Row bases turning the oblique projector conditions into full-rank rows.
  auto rangeBasis = [](const Mat& A, Eigen::Index dim) {
    if (dim == 0) return Mat(A.rows(), 0);
    Eigen::ColPivHouseholderQR<Mat> qr(A);
    Mat Q = qr.householderQ();
    return orthonormalize(Mat(Q.leftCols(dim)));
  };
  const Mat rows0 = rangeBasis(Mat(pb.split.projMinus.transpose()),
                               Rm);  // test space for Pi_- v(0) = alpha
  const Mat rowsL = rangeBasis(Mat(pb.split.projPlus.transpose()),
                               N - Rm);  // test space for Pi_+ v(L) = 0
  const Mat Ginv = pb.Ginf.fullPivLu().inverse();

  auto stateOf = [&](const Mat& Uc, const Mat& Vc, Eigen::Index j) {
    Vec x(n);
    x.head(N) = Uc.col(i0 + j);
    x.tail(N) = Vc.col(i0 + j);
    return x;
  };

  for (int newtonIt = 0; newtonIt < 30; ++newtonIt) {
    Vec R(unknowns);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(unknowns) * 2 * n);

    // Boundary rows at y = 0.
    {
      const Vec v0 = V.col(i0);
      const Vec r = rows0.transpose() * (pb.split.projMinus * v0 - pb.alpha);
      const Mat Jv = rows0.transpose() * pb.split.projMinus;
      for (int i = 0; i < Rm; ++i) {
        R(i) = r(i);
        for (int k = 0; k < N; ++k)
          trips.emplace_back(i, N + k, Jv(i, k));
      }
    }
    // Interior cells.
    for (Eigen::Index c = 0; c + 1 < K; ++c) {
      const double h = pb.grid(i0 + c + 1) - pb.grid(i0 + c);
      Vec rc;
      Mat Jl, Jr;
      cellResidual(pb, h, stateOf(U, V, c), stateOf(U, V, c + 1), rc, &Jl, &Jr);
      const Eigen::Index row0 = Rm + n * c;
      for (int i = 0; i < n; ++i) {
        R(row0 + i) = rc(i);
        for (int k = 0; k < n; ++k) {
          trips.emplace_back(row0 + i, n * c + k, Jl(i, k));
          trips.emplace_back(row0 + i, n * (c + 1) + k, Jr(i, k));
        }
      }
    }
    // Boundary rows at y = L.
    {
      const Eigen::Index row0 = Rm + n * (K - 1);
      const Vec uL = U.col(M - 1), vL = V.col(M - 1);
      const Vec r1 = rowsL.transpose() * vL;
      const Mat GP = Ginv * pb.split.projMinus;
      const Vec r2 = uL - pb.p - GP * vL;
      for (int i = 0; i < N - Rm; ++i) {
        R(row0 + i) = r1(i);
        for (int k = 0; k < N; ++k)
          trips.emplace_back(row0 + i, n * (K - 1) + N + k, rowsL(k, i));
      }
      for (int i = 0; i < N; ++i) {
        R(row0 + (N - Rm) + i) = r2(i);
        trips.emplace_back(row0 + (N - Rm) + i, n * (K - 1) + i, 1.0);
        for (int k = 0; k < N; ++k)
          trips.emplace_back(row0 + (N - Rm) + i, n * (K - 1) + N + k,
                             -GP(i, k));
      }
    }

    const double scale = 1.0 + U.cwiseAbs().maxCoeff() + V.cwiseAbs().maxCoeff();
    const double rmax = R.lpNorm<Eigen::Infinity>();
    if (rmax < 1e-13 * scale) break;

    Eigen::SparseMatrix<double> J(unknowns, unknowns);
    J.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(J);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorCode::Internal, "tail collocation Jacobian is singular");
    Vec dx = lu.solve(-R);
    for (Eigen::Index j = 0; j < K; ++j) {
      U.col(i0 + j) += dx.segment(n * j, N);
      V.col(i0 + j) += dx.segment(n * j + N, N);
    }
    if (dx.lpNorm<Eigen::Infinity>() < 1e-14 * scale) break;
    if (newtonIt == 29)
      throw Error(ErrorCode::NewtonNonconvergence,
                  "tail collocation failed to converge");
  }
  (void)tol;
}

CoreResult solveCore(const CoreProblem& pb, const Tolerances& tol,
                     bool forcePicard, const Mat* warmU, const Mat* warmV) {
  const Eigen::Index M = pb.grid.size();
  const int N = pb.p.size();
  Eigen::Index i0 = 0;
  while (i0 < M && std::abs(pb.grid(i0)) > 1e-14) ++i0;
  if (i0 == M) throw Error(ErrorCode::Internal, "tail grid misses y = 0");

  CoreResult out;
  Mat U = Mat::Zero(N, M), V = Mat::Zero(N, M);
  bool warm = false;
  if (warmU && warmV && warmU->cols() == M) {
    U = *warmU;
    V = *warmV;
    warm = true;
  }
  if (!warm || forcePicard) {
    out.usedPicard = true;
    picardStage(pb, i0, U, V, tol, &out.picardIterations);
  }
  collocationStage(pb, i0, U, V, tol);

  // Backward extension onto [zbar, 0).
  for (Eigen::Index c = i0; c-- > 0;) {
    const double h = pb.grid(c + 1) - pb.grid(c);
    Vec xr(2 * N), xl0(2 * N);
    xr.head(N) = U.col(c + 1);
    xr.tail(N) = V.col(c + 1);
    if (warm) {
      xl0.head(N) = U.col(c);
      xl0.tail(N) = V.col(c);
    } else {
      xl0 = xr;
    }
    const Vec xl = cellStepBack(pb, h, xr, xl0);
    U.col(c) = xl.head(N);
    V.col(c) = xl.tail(N);
  }

  // Cross-scheme defect: re-integrate each cell with two half steps.
  double maxDefect = 0.0;
  for (Eigen::Index c = 0; c + 1 < M; ++c) {
    const double h = pb.grid(c + 1) - pb.grid(c);
    Vec xl(2 * N), xr(2 * N);
    xl.head(N) = U.col(c);
    xl.tail(N) = V.col(c);
    xr.head(N) = U.col(c + 1);
    xr.tail(N) = V.col(c + 1);
    const Vec xm = cellStep(pb, 0.5 * h, xl, 0.5 * (xl + xr));
    const Vec xrr = cellStep(pb, 0.5 * h, xm, xr);
    maxDefect = std::max(maxDefect, (xrr - xr).norm() / h);
  }
  out.maxDefect = maxDefect;

  // Exponential tail fit on |u - p| over the outer half of [0, L].
  {
    std::vector<double> xs, ys;
    for (Eigen::Index j = i0 + (M - i0) / 2; j < M; ++j) {
      xs.push_back(pb.grid(j));
      ys.push_back((U.col(j) - pb.p).norm());
    }
    auto [C, rate] = expFit(xs, ys, 1e-14);
    out.decayPrefactor = C;
    out.decayRate = rate;
  }
  out.u = std::move(U);
  out.v = std::move(V);
  return out;
}

CoreProblem makeCore(const ShockFrame& frame, int side, const Vec& p, double s,
                     const Vec& h, const Vec& a, const Tolerances& tol) {
  const SystemModel& model = *frame.model;
  const double b = frame.b(h);
  const double sgn = side > 0 ? 1.0 : -1.0;
  CoreProblem pb;
  pb.G = [&model, b, s, h, sgn](const Vec& u) {
    return Mat(sgn * b * model.curlyAd(u, s, h));
  };
  pb.dGdir = [&model, b, s, h, sgn](const Vec& u, const Vec& dir) {
    return Mat(sgn * b * model.dCurlyAd(u, s, h, dir));
  };
  pb.p = p;
  pb.Ginf = pb.G(p);
  pb.split = realSpectralSplit(pb.Ginf, tol.axisRel);
  const Mat& frozen = side > 0 ? frame.frozenPlus : frame.frozenMinus;
  if (a.size() != frozen.cols())
    throw Error(ErrorCode::SubspaceDimension, "tail parameter dimension mismatch");
  if (pb.split.basisMinus.cols() != frozen.cols())
    throw Error(ErrorCode::SubspaceDimension,
                "stable subspace dimension changed between base point and "
                "evaluation point");
  // alpha isomorphism: project the frozen basis, re-orthonormalize.
  if (frozen.cols() > 0) {
    const Mat W = orthonormalize(Mat(pb.split.projMinus * frozen));
    pb.alpha = W * (sgn * a);  // core bc is Pi_- v(0) = -alpha_- on the minus side
  } else {
    pb.alpha = Vec::Zero(p.size());
  }
  pb.grid = side > 0 ? frame.gridPlus : frame.gridMinus;
  return pb;
}

}  // namespace

TailSolution solveTail(const ShockFrame& frame, int side, const Vec& p,
                       double s, const Vec& h, const Vec& a,
                       const TailOptions& opts) {
  CoreProblem pb = makeCore(frame, side, p, s, h, a, opts.tol);
  Mat warmU, warmV;
  const Mat* wu = nullptr;
  const Mat* wv = nullptr;
  const TailSolution* warmStart = side > 0 ? opts.warmPlus : opts.warmMinus;
  if (warmStart && warmStart->side == side &&
      warmStart->z.size() == pb.grid.size()) {
    const TailSolution& w = *warmStart;
    const Eigen::Index M = w.z.size();
    warmU.resize(w.u.rows(), M);
    warmV.resize(w.v.rows(), M);
    if (side > 0) {
      warmU = w.u;
      warmV = w.v;
    } else {
      for (Eigen::Index j = 0; j < M; ++j) {
        warmU.col(j) = w.u.col(M - 1 - j);
        warmV.col(j) = -w.v.col(M - 1 - j);
      }
    }
    wu = &warmU;
    wv = &warmV;
  }
  CoreResult core = solveCore(pb, opts.tol, opts.forcePicard, wu, wv);

  TailSolution out;
  out.side = side;
  out.decayRate = core.decayRate;
  out.decayPrefactor = core.decayPrefactor;
  out.maxDefect = core.maxDefect;
  out.usedPicard = core.usedPicard;
  out.picardIterations = core.picardIterations;
  const Eigen::Index M = pb.grid.size();
  out.z.resize(M);
  out.u.resize(p.size(), M);
  out.v.resize(p.size(), M);
  if (side > 0) {
    // phi-frame z = y - zbar
    for (Eigen::Index j = 0; j < M; ++j) out.z(j) = pb.grid(j) - frame.zbar;
    out.u = core.u;
    out.v = core.v;
  } else {
    // phi-frame z = zbar - y, reversed to ascending order
    for (Eigen::Index j = 0; j < M; ++j) {
      out.z(j) = frame.zbar - pb.grid(M - 1 - j);
      out.u.col(j) = core.u.col(M - 1 - j);
      out.v.col(j) = -core.v.col(M - 1 - j);
    }
  }
  return out;
}

PsiResult evalPsi(const ShockFrame& frame, const Vec& pPlus, const Vec& pMinus,
                  double s, const Vec& h, const Vec& aPlus, const Vec& aMinus,
                  const TailOptions& opts) {
  PsiResult out;
  out.plus = solveTail(frame, +1, pPlus, s, h, aPlus, opts);
  out.minus = solveTail(frame, -1, pMinus, s, h, aMinus, opts);
  const int N = frame.N();
  out.psi.resize(2 * N);
  out.psi.head(N) = out.plus.phiAt0() - out.minus.phiAt0();
  out.psi.tail(N) = out.plus.phiPrimeAt0() - out.minus.phiPrimeAt0();
  out.psiTilde.resize(2 * N + 1);
  out.psiTilde.head(2 * N) = out.psi;
  out.psiTilde(2 * N) = frame.thirdCondition(s, h) +
                        out.plus.phiAt0().dot(frame.anchorWz0) -
                        frame.anchorW0.dot(frame.anchorWz0);
  return out;
}

std::shared_ptr<ShockFrame> makeFrame(std::shared_ptr<const SystemModel> model,
                                      const PlanarShockPoint& qbar, double zbar,
                                      const Vec& anchorW0, const Vec& anchorWz0,
                                      const Tolerances& tol) {
  auto frame = std::make_shared<ShockFrame>();
  frame->model = model;
  frame->qbar = qbar;
  frame->zbar = zbar;
  frame->anchorW0 = anchorW0;
  frame->anchorWz0 = anchorWz0;
  const double b = frame->b(qbar.h);
  const Mat Gp = b * model->curlyAd(qbar.pPlus, qbar.s, qbar.h);
  const Mat Gm = b * model->curlyAd(qbar.pMinus, qbar.s, qbar.h);
  const RealSplit sp = realSpectralSplit(Gp, tol.axisRel);
  const RealSplit sm = realSpectralSplit(Gm, tol.axisRel);
  frame->frozenPlus = sp.basisMinus;
  frame->frozenMinus = sm.basisPlus;
  frame->Rminus = sp.basisMinus.cols();
  frame->Lplus = sm.basisPlus.cols();
  frame->k = model->N() + 1 - frame->Rminus - frame->Lplus;
  frame->gridPlus =
      makeTailGrid(*model, qbar.pPlus, qbar.s, qbar.h, zbar, tol);
  frame->gridMinus =
      makeTailGrid(*model, qbar.pMinus, qbar.s, qbar.h, zbar, tol);
  // Vanishes at the base shock so that PsiTilde(qbar, abar) = 0.
  const double sbar = qbar.s;
  frame->thirdCondition = [sbar](double s, const Vec&) { return s - sbar; };
  return frame;
}

std::shared_ptr<ShockFrame> makeFrame(const Builtin& builtin,
                                      const Tolerances& tol) {
  // Anchor values of the known reference profiles at z = 0.
  const std::string& id = builtin.model->name();
  Vec w0 = builtin.profileGuess0;
  Vec wz0;
  if (id == "burgers" || id == "burgers2d") {
    wz0 = Vec::Constant(1, -0.5);
  } else if (id == "burgers-transport" || id == "nc-coupled") {
    wz0 = Vec::Zero(2);
    wz0(0) = -0.5;
  } else if (id == "cubic-uc") {
    wz0 = Vec::Zero(2);
    const double x = w0(0);
    wz0(0) = x * x * x - builtin.referenceShock.s * x + 0.24;
  } else {
    throw Error(ErrorCode::ConfigError, "no anchor data for system " + id);
  }
  return makeFrame(builtin.model, builtin.referenceShock, builtin.zbar, w0, wz0,
                   tol);
}

std::pair<Vec, Vec> tailCoordinatesOf(const ShockFrame& frame,
                                      const std::function<Vec(double)>& w,
                                      const std::function<Vec(double)>& wz) {
  (void)w;
  const double b = frame.b(frame.qbar.h);
  const Mat Gp = b * frame.model->curlyAd(frame.qbar.pPlus, frame.qbar.s,
                                          frame.qbar.h);
  const Mat Gm = b * frame.model->curlyAd(frame.qbar.pMinus, frame.qbar.s,
                                          frame.qbar.h);
  const RealSplit sp = realSpectralSplit(Gp);
  const RealSplit sm = realSpectralSplit(Gm);
  const Vec aPlus = frame.frozenPlus.transpose() *
                    (sp.projMinus * wz(-frame.zbar));
  const Vec aMinus = frame.frozenMinus.transpose() *
                     (sm.projPlus * wz(frame.zbar));
  return {aPlus, aMinus};
}

}  // namespace evanscope
