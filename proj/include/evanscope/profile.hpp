#ifndef EVANSCOPE_PROFILE_HPP
#define EVANSCOPE_PROFILE_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "evanscope/linalg.hpp"
#include "evanscope/model.hpp"
#include "evanscope/types.hpp"

namespace evanscope {

// Piecewise cubic Hermite data on a node set; used to evaluate profile
// quantities between mesh points at the order of the mesh schemes.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(Vec z, Mat values, Mat derivs);
  Vec eval(double z) const;
  Vec evalDeriv(double z) const;
  const Vec& nodes() const { return z_; }

 private:
  Eigen::Index cell(double z) const;
  Vec z_;
  Mat val_, der_;
};

// One-sided tail solution stored in the phi frame (the transmission frame
// with the interface at z = 0). The projected derivative condition sits at
// phi-frame z = -zbar (+ side) resp. z = +zbar (- side); the short segment
// between that point and the interface is the backward extension of the tail.
struct TailSolution {
  int side = +1;
  Vec z;      // phi-frame nodes, ascending; + side [0, L], - side [-L, 0]
  Mat u;      // N x M
  Mat v;      // N x M, v = du/dz
  double decayRate = 0.0;
  double decayPrefactor = 0.0;
  double maxDefect = 0.0;  // cross-scheme ODE defect per unit length
  bool usedPicard = false;
  int picardIterations = 0;

  Vec phiAt0() const;  // value at the interface node
  Vec phiPrimeAt0() const;
  Eigen::Index indexOf(double zval) const;
};

// Everything that stays frozen while connections near a given one are
// computed: the base shock, the translate zbar, the frozen subspace bases
// behind the alpha isomorphisms, the anchor profile values entering the
// third transmission condition, and the tail grids.
struct ShockFrame {
  std::shared_ptr<const SystemModel> model;
  PlanarShockPoint qbar;
  double zbar = 0.0;
  Mat frozenPlus;   // basis of E_-(G_d(pbar+, sbar, hbar)), dim R-
  Mat frozenMinus;  // basis of E_+(G_d(pbar-, sbar, hbar)), dim L+
  Vec anchorW0;     // wbar(0)
  Vec anchorWz0;    // wbar_z(0)
  Vec gridPlus;     // Phi-frame nodes for the + side, [zbar, L+]
  Vec gridMinus;    // mirrored-core nodes for the - side, [zbar, L-]
  int Rminus = 0, Lplus = 0, k = 0;
  // Third transmission condition: g(s,h) + phi+(0).wz0 - w0.wz0; g = s by
  // default, replaceable for the Appendix-B style uniqueness probes.
  std::function<double(double, const Vec&)> thirdCondition;

  double b(const Vec& h) const { return 1.0 / (1.0 + h.squaredNorm()); }
  int N() const { return model->N(); }
  int d() const { return model->d(); }
  int aDim() const { return Rminus + Lplus; }
};

struct TailOptions {
  Tolerances tol;
  bool forcePicard = false;  // run the damped Picard stage
  const TailSolution* warmPlus = nullptr;
  const TailSolution* warmMinus = nullptr;
};

// Tail grid covering [zbar, L] with L chosen from the spectral gap of
// G_d(p, s, h) so that e^{-delta L} <= decayTarget.
Vec makeTailGrid(const SystemModel& model, const Vec& p, double s, const Vec& h,
                 double zbar, const Tolerances& tol);

// Solves the one-sided tail problem of the profile transmission system with
// projected derivative data alpha(p,s,h;a) at the Phi-frame origin.
TailSolution solveTail(const ShockFrame& frame, int side, const Vec& p,
                       double s, const Vec& h, const Vec& a,
                       const TailOptions& opts = {});

struct PsiResult {
  Vec psi;       // R^{2N}
  Vec psiTilde;  // R^{2N+1}
  TailSolution plus, minus;
};

PsiResult evalPsi(const ShockFrame& frame, const Vec& pPlus, const Vec& pMinus,
                  double s, const Vec& h, const Vec& aPlus, const Vec& aMinus,
                  const TailOptions& opts = {});

// Sampled heteroclinic connection; w carries the two-sided profile.
struct ProfileGrid {
  Vec zMinus;  // [-L-, 0]
  Mat wMinus, wpMinus;
  Vec zPlus;  // [0, L+]
  Mat wPlus, wpPlus;
  double decayRateMinus = 0, decayRatePlus = 0;
  double truncationMinus = 0, truncationPlus = 0;
  double maxResidual = 0;   // tail ODE defect
  double jumpW = 0, jumpWz = 0;  // |[w]|, |[w_z]| at z = 0

  Vec wAt(double z) const;
  Vec wpAt(double z) const;
  HermiteTable tableW(int side) const;
  HermiteTable tableWp(const SystemModel& model, double s, const Vec& h,
                       int side) const;
};

struct ConnectionPoint {
  std::shared_ptr<const ShockFrame> frame;
  PlanarShockPoint q;
  Vec aPlus, aMinus;
  ProfileGrid profile;
  double residual = 0.0;  // |PsiTilde| at the solution
};

// Builds a frame for a builtin system (exact anchors and initial data).
std::shared_ptr<ShockFrame> makeFrame(const Builtin& builtin,
                                      const Tolerances& tol = {});

// Generic frame construction from user-supplied anchor data.
std::shared_ptr<ShockFrame> makeFrame(std::shared_ptr<const SystemModel> model,
                                      const PlanarShockPoint& qbar, double zbar,
                                      const Vec& anchorW0, const Vec& anchorWz0,
                                      const Tolerances& tol = {});

// Initial (a+, a-) coordinates of a candidate profile given w(.) sampled by
// callables; used to seed the base Newton solve.
std::pair<Vec, Vec> tailCoordinatesOf(const ShockFrame& frame,
                                      const std::function<Vec(double)>& w,
                                      const std::function<Vec(double)>& wz);

// Newton solve of PsiTilde = 0 with the listed p-components frozen (indices
// into the stacked vector [p+; p-]) together with (s, h).
ConnectionPoint findConnection(const ShockFrame& frame,
                               const std::vector<int>& frozenP,
                               const PlanarShockPoint& start, const Vec& aPlus0,
                               const Vec& aMinus0, const Tolerances& tol = {});

// Reference connection of a builtin (base Newton from the exact seed).
ConnectionPoint referenceConnection(const std::shared_ptr<ShockFrame>& frame,
                                    const Builtin& builtin,
                                    const Tolerances& tol = {});

struct MelnikovData {
  Vec psiTildeValue;
  Mat jacA;    // (2N+1) x (N+1-k)
  Mat jacAP;   // (2N+1) x (N+1-k+2N)
  Mat jacAPS;  // (2N+1) x (N+1-k+2N+1)
  int rankA = 0, rankAP = 0, rankAPS = 0;
  double gapA = 0, gapAP = 0, gapAPS = 0;
  std::vector<double> singularA, singularAP, singularAPS;
  std::string verdict;  // degenerate | a-transversal | transversal | strongly-transversal
};

MelnikovData transversalityReport(const ConnectionPoint& cp,
                                  const Tolerances& tol = {});

// Full parameter Jacobian of PsiTilde in the order [a+, a-, p+, p-, s, h].
Mat psiTildeJacobian(const ConnectionPoint& cp, const Tolerances& tol = {});

struct ManifoldChart {
  std::shared_ptr<const ShockFrame> frame;
  ConnectionPoint base;
  std::vector<int> alphaIdx, betaIdx;  // partition of [p+; p-] components
  Tolerances tol;

  struct Eval {
    Vec pAlpha;
    Vec aPlus, aMinus;
    PlanarShockPoint q;
  };
  Eval eval(const Vec& pBeta, double s, const Vec& h) const;
  Vec chi(const PlanarShockPoint& q) const;
  // d(chi) in the stacked order [p+, p-, s, h], central differences.
  Mat chiPrime(const PlanarShockPoint& q) const;
  // Orthonormal basis of T_q C_B at the base point, central differences of
  // the graph map; columns in the stacked order [p+, p-, s, h].
  Mat tangentSpace() const;
};

ManifoldChart buildChart(const ConnectionPoint& cp, const Tolerances& tol = {});

// Supremum over a sampled (p_beta, s, h) box of the chart discrepancy after
// rebuilding with a shifted translate and/or a different third condition.
double chartUniquenessProbe(const ManifoldChart& chart, double altZbar,
                            const std::function<double(double, const Vec&)>& g,
                            double boxHalfWidth = 0.04, int pointsPerAxis = 3);

void writeProfileCsv(const ProfileGrid& grid, const std::string& path);

}  // namespace evanscope

#endif
