#include <algorithm>
#include <cmath>
#include <sstream>

#include "evanscope/io.hpp"
#include "evanscope/profile.hpp"

namespace evanscope {

namespace {

Vec stackP(const Vec& pPlus, const Vec& pMinus) {
  Vec p(pPlus.size() + pMinus.size());
  p << pPlus, pMinus;
  return p;
}

ProfileGrid assembleProfile(const ShockFrame& frame, const PsiResult& psi) {
  ProfileGrid g;
  g.zPlus = psi.plus.z;
  g.wPlus = psi.plus.u;
  g.wpPlus = psi.plus.v;
  g.zMinus = psi.minus.z;
  g.wMinus = psi.minus.u;
  g.wpMinus = psi.minus.v;
  g.decayRatePlus = psi.plus.decayRate;
  g.decayRateMinus = psi.minus.decayRate;
  g.truncationPlus = g.zPlus(g.zPlus.size() - 1);
  g.truncationMinus = -g.zMinus(0);
  g.maxResidual = std::max(psi.plus.maxDefect, psi.minus.maxDefect);
  const int N = frame.N();
  g.jumpW = psi.psi.head(N).norm();
  g.jumpWz = psi.psi.tail(N).norm();
  return g;
}

}  // namespace

Vec ProfileGrid::wAt(double z) const {
  if (z >= 0) return HermiteTable(zPlus, wPlus, wpPlus).eval(z);
  return HermiteTable(zMinus, wMinus, wpMinus).eval(z);
}

Vec ProfileGrid::wpAt(double z) const {
  if (z >= 0) return HermiteTable(zPlus, wPlus, wpPlus).evalDeriv(z);
  return HermiteTable(zMinus, wMinus, wpMinus).evalDeriv(z);
}

HermiteTable ProfileGrid::tableW(int side) const {
  if (side > 0) return HermiteTable(zPlus, wPlus, wpPlus);
  return HermiteTable(zMinus, wMinus, wpMinus);
}

HermiteTable ProfileGrid::tableWp(const SystemModel& model, double s,
                                  const Vec& h, int side) const {
  const double b = 1.0 / (1.0 + h.squaredNorm());
  const Vec& z = side > 0 ? zPlus : zMinus;
  const Mat& w = side > 0 ? wPlus : wMinus;
  const Mat& wp = side > 0 ? wpPlus : wpMinus;
  Mat wpp(w.rows(), w.cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    wpp.col(j) = b * model.curlyAd(w.col(j), s, h) * wp.col(j);
  return HermiteTable(z, wp, wpp);
}

ConnectionPoint findConnection(const ShockFrame& frame,
                               const std::vector<int>& frozenP,
                               const PlanarShockPoint& start, const Vec& aPlus0,
                               const Vec& aMinus0, const Tolerances& tol) {
  const int N = frame.N();
  const int Rm = frame.Rminus, Lp = frame.Lplus;
  std::vector<int> freeP;
  for (int i = 0; i < 2 * N; ++i)
    if (std::find(frozenP.begin(), frozenP.end(), i) == frozenP.end())
      freeP.push_back(i);
  const int nUnknown = int(freeP.size()) + Rm + Lp;
  if (nUnknown != 2 * N + 1)
    throw Error(ErrorCode::ConfigError,
                "findConnection expects " + std::to_string(N + frame.k) +
                    " free endstate components");

  Vec pStack = stackP(start.pPlus, start.pMinus);
  Vec x(nUnknown);
  for (size_t i = 0; i < freeP.size(); ++i) x(i) = pStack(freeP[i]);
  x.segment(freeP.size(), Rm) = aPlus0;
  x.tail(Lp) = aMinus0;

  TailSolution warmP, warmM;
  bool haveWarm = false;

  auto evalAt = [&](const Vec& xv) {
    Vec p = pStack;
    for (size_t i = 0; i < freeP.size(); ++i) p(freeP[i]) = xv(i);
    TailOptions opts;
    opts.tol = tol;
    if (haveWarm) {
      opts.warmPlus = &warmP;
      opts.warmMinus = &warmM;
    }
    return evalPsi(frame, p.head(N), p.tail(N), start.s, start.h,
                   xv.segment(freeP.size(), Rm), xv.tail(Lp), opts);
  };

  PsiResult cur = evalAt(x);
  warmP = cur.plus;
  warmM = cur.minus;
  haveWarm = true;
  double resid = cur.psiTilde.norm();
  std::ostringstream history;
  history << resid;

  int it = 0;
  for (; it < tol.newtonMaxIter && resid > tol.newtonTol; ++it) {
    Mat J(2 * N + 1, nUnknown);
    for (int c = 0; c < nUnknown; ++c) {
      const double step = tol.fdStep * (1.0 + std::abs(x(c)));
      Vec xp = x, xm = x;
      xp(c) += step;
      xm(c) -= step;
      J.col(c) = (evalAt(xp).psiTilde - evalAt(xm).psiTilde) / (2.0 * step);
    }
    Eigen::FullPivLU<Mat> lu(J);
    if (!lu.isInvertible())
      throw Error(ErrorCode::TransversalityFailure,
                  "singular PsiTilde Jacobian in connection Newton");
    const Vec dx = lu.solve(-cur.psiTilde);
    double t = 1.0;
    PsiResult trial;
    double trialResid = resid;
    while (t > 1e-4) {
      trial = evalAt(x + t * dx);
      trialResid = trial.psiTilde.norm();
      if (trialResid < (1.0 - 0.4 * t) * resid || trialResid < tol.newtonTol)
        break;
      t *= 0.5;
    }
    if (trialResid >= resid) break;  // stagnation; final check decides
    x += t * dx;
    cur = trial;
    warmP = cur.plus;
    warmM = cur.minus;
    resid = trialResid;
    history << " " << resid;
  }
  if (resid > tol.newtonTol)
    throw Error(ErrorCode::NewtonNonconvergence,
                "connection Newton did not reach tolerance; history: " +
                    history.str());

  ConnectionPoint cp;
  cp.q = start;
  Vec p = pStack;
  for (size_t i = 0; i < freeP.size(); ++i) p(freeP[i]) = x(i);
  cp.q.pPlus = p.head(N);
  cp.q.pMinus = p.tail(N);
  cp.aPlus = x.segment(freeP.size(), Rm);
  cp.aMinus = x.tail(Lp);
  cp.profile = assembleProfile(frame, cur);
  cp.residual = resid;
  return cp;
}

namespace {

// Column-pivoted selection of the alpha block: project the p-columns onto the
// orthogonal complement of the a-columns and take the strongest pivots.
std::pair<std::vector<int>, std::vector<int>> pivotSplit(const Mat& jacA,
                                                         const Mat& jacP,
                                                         int nAlpha) {
  Mat Qa = orthonormalize(jacA);
  Mat resid = jacP - Qa * (Qa.transpose() * jacP);
  Eigen::ColPivHouseholderQR<Mat> qr(resid);
  const auto perm = qr.colsPermutation().indices();
  std::vector<int> alpha, beta;
  for (int i = 0; i < nAlpha; ++i) alpha.push_back(perm(i));
  for (int i = nAlpha; i < perm.size(); ++i) beta.push_back(perm(i));
  std::sort(alpha.begin(), alpha.end());
  std::sort(beta.begin(), beta.end());
  return {alpha, beta};
}

struct PsiJacobians {
  Mat jacA;   // w.r.t. (a+, a-)
  Mat jacP;   // w.r.t. (p+, p-)
  Mat jacS;   // w.r.t. s
  Mat jacH;   // w.r.t. h
  Vec value;
};

PsiJacobians psiJacobians(const ConnectionPoint& cp, const Tolerances& tol) {
  const ShockFrame& frame = *cp.frame;
  const int N = frame.N();
  const int Rm = frame.Rminus, Lp = frame.Lplus;
  const int d = frame.d();

  // Warm starts rebuilt from the stored profile keep every evaluation on the
  // fast collocation path and on identical grids.
  TailSolution warmP, warmM;
  TailOptions opts;
  opts.tol = tol;
  if (cp.profile.zPlus.size() > 0) {
    warmP.side = +1;
    warmP.z = cp.profile.zPlus;
    warmP.u = cp.profile.wPlus;
    warmP.v = cp.profile.wpPlus;
    warmM.side = -1;
    warmM.z = cp.profile.zMinus;
    warmM.u = cp.profile.wMinus;
    warmM.v = cp.profile.wpMinus;
    opts.warmPlus = &warmP;
    opts.warmMinus = &warmM;
  }

  auto psiOf = [&](const Vec& pStack, double s, const Vec& h, const Vec& ap,
                   const Vec& am) {
    return evalPsi(frame, pStack.head(N), pStack.tail(N), s, h, ap, am, opts)
        .psiTilde;
  };

  const Vec p0 = stackP(cp.q.pPlus, cp.q.pMinus);
  PsiJacobians out;
  out.value = psiOf(p0, cp.q.s, cp.q.h, cp.aPlus, cp.aMinus);

  out.jacA.resize(2 * N + 1, Rm + Lp);
  for (int c = 0; c < Rm + Lp; ++c) {
    Vec ap = cp.aPlus, am = cp.aMinus;
    double* slot = c < Rm ? &ap(c) : &am(c - Rm);
    const double step = tol.fdStep * (1.0 + std::abs(*slot));
    const double base = *slot;
    *slot = base + step;
    const Vec fp = psiOf(p0, cp.q.s, cp.q.h, ap, am);
    *slot = base - step;
    const Vec fm = psiOf(p0, cp.q.s, cp.q.h, ap, am);
    out.jacA.col(c) = (fp - fm) / (2.0 * step);
  }
  out.jacP.resize(2 * N + 1, 2 * N);
  for (int c = 0; c < 2 * N; ++c) {
    const double step = tol.fdStep * (1.0 + std::abs(p0(c)));
    Vec pp = p0, pm = p0;
    pp(c) += step;
    pm(c) -= step;
    out.jacP.col(c) = (psiOf(pp, cp.q.s, cp.q.h, cp.aPlus, cp.aMinus) -
                       psiOf(pm, cp.q.s, cp.q.h, cp.aPlus, cp.aMinus)) /
                      (2.0 * step);
  }
  {
    const double step = tol.fdStep * (1.0 + std::abs(cp.q.s));
    out.jacS = (psiOf(p0, cp.q.s + step, cp.q.h, cp.aPlus, cp.aMinus) -
                psiOf(p0, cp.q.s - step, cp.q.h, cp.aPlus, cp.aMinus)) /
               (2.0 * step);
  }
  out.jacH.resize(2 * N + 1, d - 1);
  for (int c = 0; c < d - 1; ++c) {
    const double step = tol.fdStep * (1.0 + std::abs(cp.q.h(c)));
    Vec hp = cp.q.h, hm = cp.q.h;
    hp(c) += step;
    hm(c) -= step;
    out.jacH.col(c) = (psiOf(p0, cp.q.s, hp, cp.aPlus, cp.aMinus) -
                       psiOf(p0, cp.q.s, hm, cp.aPlus, cp.aMinus)) /
                      (2.0 * step);
  }
  return out;
}

}  // namespace

Mat psiTildeJacobian(const ConnectionPoint& cp, const Tolerances& tol) {
  PsiJacobians j = psiJacobians(cp, tol);
  Mat out(j.jacA.rows(), j.jacA.cols() + j.jacP.cols() + 1 + j.jacH.cols());
  out << j.jacA, j.jacP, j.jacS, j.jacH;
  return out;
}

MelnikovData transversalityReport(const ConnectionPoint& cp,
                                  const Tolerances& tol) {
  const ShockFrame& frame = *cp.frame;
  const int N = frame.N();
  PsiJacobians j = psiJacobians(cp, tol);

  MelnikovData md;
  md.psiTildeValue = j.value;
  md.jacA = j.jacA;
  md.jacAP.resize(2 * N + 1, j.jacA.cols() + 2 * N);
  md.jacAP << j.jacA, j.jacP;
  md.jacAPS.resize(2 * N + 1, md.jacAP.cols() + 1);
  md.jacAPS << md.jacAP, j.jacS;

  md.rankA = svdRank(md.jacA.cast<Complex>(), tol.rankRel, &md.gapA,
                     &md.singularA);
  md.rankAP = svdRank(md.jacAP.cast<Complex>(), tol.rankRel, &md.gapAP,
                      &md.singularAP);
  md.rankAPS = svdRank(md.jacAPS.cast<Complex>(), tol.rankRel, &md.gapAPS,
                       &md.singularAPS);

  const bool aOK = md.rankA == N + 1 - frame.k;
  const bool apOK = md.rankAP == 2 * N + 1;
  const bool apsOK = md.rankAPS == 2 * N + 1;
  if (!aOK)
    md.verdict = "degenerate";
  else if (apOK)
    md.verdict = "strongly-transversal";
  else if (apsOK)
    md.verdict = "transversal";
  else
    md.verdict = "a-transversal";
  return md;
}

ConnectionPoint referenceConnection(const std::shared_ptr<ShockFrame>& frame,
                                    const Builtin& builtin,
                                    const Tolerances& tol) {
  const std::string& id = builtin.model->name();
  std::function<Vec(double)> w, wz;
  if (id == "burgers" || id == "burgers2d") {
    w = [](double z) { return Vec::Constant(1, -std::tanh(z / 2)); };
    wz = [](double z) {
      const double c = std::cosh(z / 2);
      return Vec::Constant(1, -0.5 / (c * c));
    };
  } else if (id == "burgers-transport" || id == "nc-coupled") {
    const double c0 = builtin.referenceShock.pPlus(1);
    w = [c0](double z) {
      Vec v(2);
      v << -std::tanh(z / 2), c0;
      return v;
    };
    wz = [](double z) {
      const double c = std::cosh(z / 2);
      Vec v(2);
      v << -0.5 / (c * c), 0.0;
      return v;
    };
  } else if (id == "cubic-uc") {
    // First-integral profile x' = x^3 - s x - C with rest points at the
    // reference endstates; integrate once on a fine mesh and interpolate.
    const double s = builtin.referenceShock.s;
    const double C = -(std::pow(builtin.referenceShock.pPlus(0), 3) -
                       s * builtin.referenceShock.pPlus(0));
    const double c0 = builtin.referenceShock.pPlus(1);
    auto g = [s, C](double x) { return x * x * x - s * x + C; };
    const double h = 1.0 / 512.0;
    const double span = 4.0;
    const int M = int(2 * span / h) + 1;
    Vec zs(M);
    Mat xs(1, M), gs(1, M);
    double x = builtin.profileGuess0(0);
    const int mid = M / 2;
    zs(mid) = 0.0;
    xs(0, mid) = x;
    gs(0, mid) = g(x);
    auto rk4 = [&](double xc, double hh) {
      const double k1 = g(xc);
      const double k2 = g(xc + 0.5 * hh * k1);
      const double k3 = g(xc + 0.5 * hh * k2);
      const double k4 = g(xc + hh * k3);
      return xc + hh / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    };
    double xf = x;
    for (int i = mid + 1; i < M; ++i) {
      xf = rk4(xf, h);
      zs(i) = (i - mid) * h;
      xs(0, i) = xf;
      gs(0, i) = g(xf);
    }
    double xb = x;
    for (int i = mid - 1; i >= 0; --i) {
      xb = rk4(xb, -h);
      zs(i) = (i - mid) * h;
      xs(0, i) = xb;
      gs(0, i) = g(xb);
    }
    auto table = std::make_shared<HermiteTable>(zs, xs, gs);
    w = [table, c0](double z) {
      Vec v(2);
      v << table->eval(z)(0), c0;
      return v;
    };
    wz = [table](double z) {
      Vec v(2);
      v << table->evalDeriv(z)(0), 0.0;
      return v;
    };
  } else {
    throw Error(ErrorCode::ConfigError, "no reference data for " + id);
  }

  auto [a0p, a0m] = tailCoordinatesOf(*frame, w, wz);

  // Provisional alpha/beta split from the Jacobian at the seed.
  ConnectionPoint seed;
  seed.frame = frame;
  seed.q = builtin.referenceShock;
  seed.aPlus = a0p;
  seed.aMinus = a0m;
  PsiJacobians j = psiJacobians(seed, tol);
  auto [alphaIdx, betaIdx] =
      pivotSplit(j.jacA, j.jacP, frame->N() + frame->k);
  ConnectionPoint cp = findConnection(*frame, betaIdx, builtin.referenceShock,
                                      a0p, a0m, tol);
  cp.frame = frame;
  cp.q.indices = builtin.referenceShock.indices;
  return cp;
}

ManifoldChart buildChart(const ConnectionPoint& cp, const Tolerances& tol) {
  PsiJacobians j = psiJacobians(cp, tol);
  MelnikovData md = transversalityReport(cp, tol);
  if (md.verdict == "degenerate" || md.verdict == "a-transversal")
    throw Error(ErrorCode::TransversalityFailure,
                "chart construction requires at least a transversal profile, "
                "got verdict " + md.verdict);
  ManifoldChart chart;
  chart.frame = cp.frame;
  chart.base = cp;
  chart.tol = tol;
  std::tie(chart.alphaIdx, chart.betaIdx) =
      pivotSplit(j.jacA, j.jacP, cp.frame->N() + cp.frame->k);
  return chart;
}

ManifoldChart::Eval ManifoldChart::eval(const Vec& pBeta, double s,
                                        const Vec& h) const {
  PlanarShockPoint start = base.q;
  start.s = s;
  start.h = h;
  Vec pStack = stackP(base.q.pPlus, base.q.pMinus);
  for (size_t i = 0; i < betaIdx.size(); ++i) pStack(betaIdx[i]) = pBeta(i);
  const int N = frame->N();
  start.pPlus = pStack.head(N);
  start.pMinus = pStack.tail(N);
  ConnectionPoint cp;
  try {
    cp = findConnection(*frame, betaIdx, start, base.aPlus, base.aMinus, tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NewtonNonconvergence)
      throw Error(ErrorCode::ChartDomain,
                  "requested (p_beta, s, h) lies outside the chart's Newton "
                  "basin: " + std::string(e.what()));
    throw;
  }
  Eval out;
  Vec sol = stackP(cp.q.pPlus, cp.q.pMinus);
  out.pAlpha.resize(alphaIdx.size());
  for (size_t i = 0; i < alphaIdx.size(); ++i) out.pAlpha(i) = sol(alphaIdx[i]);
  out.aPlus = cp.aPlus;
  out.aMinus = cp.aMinus;
  out.q = cp.q;
  return out;
}

Vec ManifoldChart::chi(const PlanarShockPoint& q) const {
  Vec pStack = stackP(q.pPlus, q.pMinus);
  Vec pBeta(betaIdx.size());
  for (size_t i = 0; i < betaIdx.size(); ++i) pBeta(i) = pStack(betaIdx[i]);
  const Eval e = eval(pBeta, q.s, q.h);
  Vec out(alphaIdx.size());
  for (size_t i = 0; i < alphaIdx.size(); ++i)
    out(i) = pStack(alphaIdx[i]) - e.pAlpha(i);
  return out;
}

Mat ManifoldChart::chiPrime(const PlanarShockPoint& q) const {
  const int N = frame->N();
  const int d = frame->d();
  const int nA = int(alphaIdx.size());
  Mat out = Mat::Zero(nA, 2 * N + d);
  // d chi / d p_alpha = I exactly.
  for (int i = 0; i < nA; ++i) out(i, alphaIdx[i]) = 1.0;

  Vec pStack = stackP(q.pPlus, q.pMinus);
  Vec pBeta(betaIdx.size());
  for (size_t i = 0; i < betaIdx.size(); ++i) pBeta(i) = pStack(betaIdx[i]);

  auto alphaOf = [&](const Vec& pb, double s, const Vec& h) {
    return eval(pb, s, h).pAlpha;
  };
  for (size_t c = 0; c < betaIdx.size(); ++c) {
    const double step = tol.chartFdStep * (1.0 + std::abs(pBeta(c)));
    Vec bp = pBeta, bm = pBeta;
    bp(c) += step;
    bm(c) -= step;
    out.col(betaIdx[c]) =
        -(alphaOf(bp, q.s, q.h) - alphaOf(bm, q.s, q.h)) / (2.0 * step);
  }
  {
    const double step = tol.chartFdStep * (1.0 + std::abs(q.s));
    out.col(2 * N) = -(alphaOf(pBeta, q.s + step, q.h) -
                       alphaOf(pBeta, q.s - step, q.h)) /
                     (2.0 * step);
  }
  for (int c = 0; c < d - 1; ++c) {
    const double step = tol.chartFdStep * (1.0 + std::abs(q.h(c)));
    Vec hp = q.h, hm = q.h;
    hp(c) += step;
    hm(c) -= step;
    out.col(2 * N + 1 + c) =
        -(alphaOf(pBeta, q.s, hp) - alphaOf(pBeta, q.s, hm)) / (2.0 * step);
  }
  return out;
}

Mat ManifoldChart::tangentSpace() const {
  const int N = frame->N();
  const int d = frame->d();
  const int nB = int(betaIdx.size());
  const int dim = nB + d;
  Mat chiP = chiPrime(base.q);  // nA x (2N+d); columns for graph params
  Mat tangents = Mat::Zero(2 * N + d, dim);
  // Graph parameters are (p_beta, s, h); d p_alpha/d theta = -d chi/d theta.
  for (int c = 0; c < dim; ++c) {
    int col;  // index into the stacked (p, s, h) coordinates
    if (c < nB)
      col = betaIdx[c];
    else
      col = 2 * N + (c - nB);
    Vec t = Vec::Zero(2 * N + d);
    t(col) = 1.0;
    for (size_t i = 0; i < alphaIdx.size(); ++i)
      t(alphaIdx[i]) = -chiP(i, col);
    tangents.col(c) = t;
  }
  return orthonormalize(tangents);
}

double chartUniquenessProbe(const ManifoldChart& chart, double altZbar,
                            const std::function<double(double, const Vec&)>& g,
                            double boxHalfWidth, int pointsPerAxis) {
  const ShockFrame& f0 = *chart.frame;
  auto frame2 = makeFrame(f0.model, f0.qbar, altZbar, f0.anchorW0,
                          f0.anchorWz0, chart.tol);
  frame2->thirdCondition = g;
  if (frame2->Rminus != f0.Rminus || frame2->Lplus != f0.Lplus)
    throw Error(ErrorCode::SubspaceDimension,
                "alternative construction changes the tail dimensions");

  // Seed the rebuilt base connection from the existing profile.
  const ProfileGrid& prof = chart.base.profile;
  auto w = [&prof](double z) { return prof.wAt(z); };
  auto wz = [&prof](double z) { return prof.wpAt(z); };
  auto [a0p, a0m] = tailCoordinatesOf(*frame2, w, wz);
  ConnectionPoint base2 = findConnection(*frame2, chart.betaIdx, chart.base.q,
                                         a0p, a0m, chart.tol);
  base2.frame = frame2;

  ManifoldChart chart2;
  chart2.frame = frame2;
  chart2.base = base2;
  chart2.alphaIdx = chart.alphaIdx;
  chart2.betaIdx = chart.betaIdx;
  chart2.tol = chart.tol;

  // Verify the rank conditions survive the alternative construction.
  MelnikovData md2 = transversalityReport(base2, chart.tol);
  if (md2.verdict == "degenerate" || md2.verdict == "a-transversal")
    throw Error(ErrorCode::TransversalityFailure,
                "alternative construction violates the chart rank conditions");

  Vec pStack = stackP(chart.base.q.pPlus, chart.base.q.pMinus);
  Vec beta0(chart.betaIdx.size());
  for (size_t i = 0; i < chart.betaIdx.size(); ++i)
    beta0(i) = pStack(chart.betaIdx[i]);

  const int nB = int(chart.betaIdx.size());
  const int d = f0.d();
  const int dim = nB + d;
  std::vector<double> offsets;
  for (int i = 0; i < pointsPerAxis; ++i)
    offsets.push_back(pointsPerAxis == 1
                          ? 0.0
                          : -boxHalfWidth +
                                2.0 * boxHalfWidth * i / (pointsPerAxis - 1));

  double disc = 0.0;
  std::vector<int> idx(dim, 0);
  while (true) {
    Vec beta = beta0;
    double s = chart.base.q.s;
    Vec h = chart.base.q.h;
    for (int c = 0; c < dim; ++c) {
      const double off = offsets[idx[c]];
      if (c < nB)
        beta(c) += off;
      else if (c == nB)
        s += off;
      else
        h(c - nB - 1) += off;
    }
    const Vec a1 = chart.eval(beta, s, h).pAlpha;
    const Vec a2 = chart2.eval(beta, s, h).pAlpha;
    disc = std::max(disc, (a1 - a2).lpNorm<Eigen::Infinity>());
    int c = 0;
    for (; c < dim; ++c) {
      if (++idx[c] < pointsPerAxis) break;
      idx[c] = 0;
    }
    if (c == dim) break;
  }
  return disc;
}

void writeProfileCsv(const ProfileGrid& grid, const std::string& path) {
  const int N = int(grid.wPlus.rows());
  CsvTable t;
  t.header.push_back("z");
  for (int i = 1; i <= N; ++i) t.header.push_back("w_" + std::to_string(i));
  for (int i = 1; i <= N; ++i) t.header.push_back("wp_" + std::to_string(i));
  auto pushSide = [&](const Vec& z, const Mat& w, const Mat& wp) {
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      std::vector<std::string> row;
      row.push_back(formatDouble(z(j)));
      for (int i = 0; i < N; ++i) row.push_back(formatDouble(w(i, j)));
      for (int i = 0; i < N; ++i) row.push_back(formatDouble(wp(i, j)));
      t.rows.push_back(std::move(row));
    }
  };
  pushSide(grid.zMinus, grid.wMinus, grid.wpMinus);
  pushSide(grid.zPlus, grid.wPlus, grid.wpPlus);
  atomicWrite(path, t.serialize());
}

}  // namespace evanscope
