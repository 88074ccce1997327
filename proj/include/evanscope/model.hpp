#ifndef EVANSCOPE_MODEL_HPP
#define EVANSCOPE_MODEL_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evanscope/types.hpp"

namespace evanscope {

// A_j evaluator: j = 0..d, u in R^N -> R^{NxN}.
using MatrixEvaluator = std::function<Mat(int j, const Vec& u)>;
// dA_j/du: returns the directional derivative (d_u A_j(u)) . v as a matrix.
using MatrixDirDerivative = std::function<Mat(int j, const Vec& u, const Vec& v)>;

// Hyperbolic-parabolic system with Laplacian (artificial) viscosity:
//   sum_j A_j(u) d_j u - eps * Lap u = 0.
// Immutable after construction; evaluators must be pure.
class SystemModel {
 public:
  SystemModel(std::string name, int N, int d, MatrixEvaluator evalA,
              MatrixDirDerivative evalDA, Vec domainLo, Vec domainHi);

  // When no analytic derivative is supplied, d_u A_j is taken by central
  // differences with step 1e-6 * (1 + |u|).
  SystemModel(std::string name, int N, int d, MatrixEvaluator evalA,
              Vec domainLo, Vec domainHi);

  const std::string& name() const { return name_; }
  int N() const { return N_; }
  int d() const { return d_; }

  Mat A(int j, const Vec& u) const;          // A_j(u), with domain check
  Mat dA(int j, const Vec& u, const Vec& v) const;  // (d_u A_j(u)) . v
  Mat A0inv(const Vec& u) const;             // A_0(u)^{-1}, checks (H0)
  Mat Abar(const Vec& u, const Vec& xi) const;   // A_0^{-1} sum xi_j A_j
  Mat Bbar(const Vec& u, const Vec& xi) const;   // A_0^{-1} |xi|^2 (Laplacian)

  // curly A_d(u, s, h) = A_d(u) - s A_0(u) - sum h_i A_i(u).
  Mat curlyAd(const Vec& u, double s, const Vec& h) const;
  Mat curlyAdBar(const Vec& u, double s, const Vec& h) const;  // A_0^{-1} curlyAd
  // (d_u curlyAd(u,s,h)) . v
  Mat dCurlyAd(const Vec& u, double s, const Vec& h, const Vec& v) const;

  const Vec& domainLo() const { return domainLo_; }
  const Vec& domainHi() const { return domainHi_; }

 private:
  void checkDomain(const Vec& u) const;

  std::string name_;
  int N_, d_;
  MatrixEvaluator evalA_;
  MatrixDirDerivative evalDA_;
  Vec domainLo_, domainHi_;
};

// Planar shock data point q = (p+, p-, s, h).
struct PlanarShockPoint {
  Vec pPlus;
  Vec pMinus;
  double s = 0.0;
  Vec h;  // dimension d-1
  std::optional<std::array<int, 3>> indices;  // (R-, L+, k)
};

struct StructuralSample {
  Vec u;
  Vec xi;
};

struct StructuralCheckReport {
  bool hyperbolicityOK = false;
  double hyperbolicityMargin = 0.0;  // max |Im lambda(Abar)| over samples
  StructuralSample hyperbolicityWorst;
  Complex hyperbolicityWorstEig;

  double parabolicityMargin = 0.0;   // min Re mu(Bbar)/|xi|^2
  StructuralSample parabolicityWorst;
  double dissipativityMargin = 0.0;  // min Re mu(i Abar + Bbar)/|xi|^2
  StructuralSample dissipativityWorst;

  bool h0OK = true;  // A_0 invertible at all samples
  std::vector<StructuralSample> samples;
};

// Tensor sampling of (H1)-(H3) over domainHint x unit xi-sphere.
StructuralCheckReport structuralChecks(const SystemModel& model,
                                       const std::vector<Vec>& uSamples,
                                       const std::vector<Vec>& xiSamples,
                                       double imagTol = 1e-8);

// Default sample sets: tensor grid, `perAxis` points per state axis and a
// uniform angular grid on the xi-sphere.
std::vector<Vec> defaultStateSamples(const SystemModel& model, int perAxis = 9);
std::vector<Vec> defaultFrequencySamples(int d, int perAxis = 9);

// (R-, L+, k) from the spectra of curlyAdBar at the endstates. Throws a
// characteristic-shock error when an eigenvalue sits on the axis.
std::array<int, 3> compressiveIndices(const SystemModel& model,
                                      const PlanarShockPoint& q,
                                      double axisRel = 1e-8);

// Built-in benchmark systems (ids: burgers, burgers2d, burgers-transport,
// nc-coupled, cubic-uc) together with their reference shocks.
struct Builtin {
  std::shared_ptr<const SystemModel> model;
  PlanarShockPoint referenceShock;
  double zbar;        // base translate used by the tail parametrization
  Vec profileGuess0;  // w(0) guess for the reference connection
};

Builtin makeBuiltin(const std::string& id);
std::vector<std::string> builtinIds();

}  // namespace evanscope

#endif
