#ifndef EVANSCOPE_CONJUGATION_HPP
#define EVANSCOPE_CONJUGATION_HPP

#include <memory>

#include "evanscope/profile.hpp"

namespace evanscope {

// Laplace-Fourier frequency zeta = (tau, gamma, eta); polar zeta = rho*zetaHat
// with zetaHat on the closed hemisphere gammaHat >= 0.
struct Frequency {
  double tau = 0.0;
  double gamma = 0.0;
  Vec eta;  // dimension d-1

  double rho() const {
    return std::sqrt(tau * tau + gamma * gamma + eta.squaredNorm());
  }
  static Frequency polar(const Vec& zetaHat, double rho) {
    Frequency f;
    f.tau = rho * zetaHat(0);
    f.gamma = rho * zetaHat(1);
    f.eta = rho * zetaHat.tail(zetaHat.size() - 2);
    return f;
  }
};

// First-order form of the linearized interior operator about a profile:
// dU/dz = G(z, q, zeta) U with the characteristic block structure
// G = [[0, I], [G21, G22]].
class LinearizedSymbol {
 public:
  LinearizedSymbol(const ConnectionPoint& cp);

  const SystemModel& model() const { return *cp_->frame->model; }
  const ConnectionPoint& connection() const { return *cp_; }
  const PlanarShockPoint& q() const { return cp_->q; }
  double b() const { return bh_; }
  int N() const { return cp_->frame->N(); }

  // z in the phi frame; side picks the profile table (matters only at z = 0).
  CMat G(int side, double z, const Frequency& zeta) const;
  CMat GLimit(int side, const Frequency& zeta) const;
  CMat G22Limit(int side, const Frequency& zeta) const;

  Vec W(int side, double z) const;
  Vec Wz(int side, double z) const;
  Vec Wzz(int side, double z) const;

  const Vec& grid(int side) const;

 private:
  std::shared_ptr<const ConnectionPoint> cp_;
  double bh_;
  HermiteTable wPlus_, wMinus_, wpPlus_, wpMinus_;
};

LinearizedSymbol assembleSymbol(const ConnectionPoint& cp);

// Conjugator Y with dY/dz = G Y - Y Ginf on one side, Y(+-inf) = I, sampled
// on the profile grid of that side.
struct ConjugatorGrid {
  int side = +1;
  Vec z;                 // profile nodes
  std::vector<CMat> Y;   // per node
  double devPrefactor = 0.0;  // fit ||Y - I|| <= C e^{-delta' |z|}
  double devRate = 0.0;
  double maxDefect = 0.0;     // cross-scheme ODE defect per unit length
  double maxCondition = 0.0;  // max_z cond_2(Y(z))

  const CMat& at0() const { return side > 0 ? Y.front() : Y.back(); }
};

ConjugatorGrid computeConjugator(const LinearizedSymbol& sym, int side,
                                 const Frequency& zeta,
                                 const Tolerances& tol = {});

// HP (slow/fast) block form of the limiting symbol G_{+-}(q, zeta).
struct HPBlocks {
  CMat Lambda;   // 2N x 2N change of frame, anchored at the rho = 0 form
  CMat H;        // N x N slow block (O(rho))
  CMat P;        // N x N fast block (O(1))
  double clusterGap = 0.0;     // distance between slow and fast clusters
  double clusterRadius = 0.0;  // max |mu| over the slow cluster
  bool gapOK = true;           // clusterGap >= hpGapFactor * clusterRadius
  double similarityResidual = 0.0;
};

HPBlocks hpSplit(const LinearizedSymbol& sym, int side, const Frequency& zeta,
                 const Tolerances& tol = {});

// Total conjugator T = Y * Lambda for one side and frequency.
struct TotalConjugator {
  ConjugatorGrid Y;
  HPBlocks hp;

  CMat at(Eigen::Index node) const { return Y.Y[node] * hp.Lambda; }
  CMat at0() const { return Y.at0() * hp.Lambda; }
  // Blocks of T(0): T11, T12, T21, T22 (N x N each).
  CMat block0(int row, int col) const;
};

TotalConjugator totalConjugator(const LinearizedSymbol& sym, int side,
                                const Frequency& zeta,
                                const Tolerances& tol = {});

}  // namespace evanscope

#endif
