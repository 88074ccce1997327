#ifndef EVANSCOPE_TYPES_HPP
#define EVANSCOPE_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace evanscope {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Machine-readable failure codes; serialized into CLI reports as-is.
enum class ErrorCode {
  DomainError,
  AxisEigenvalue,
  CharacteristicShock,
  RadiusError,
  TruncationError,
  NewtonNonconvergence,
  TransversalityFailure,
  ChartDomain,
  ConjugationGrowth,
  HpGap,
  DegenerateProfile,
  SubspaceDimension,
  ContinuationNeeded,
  ConfigError,
  Internal
};

const char* errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Numerical knobs. Defaults are the values used throughout the test suite;
// everything here is overridable from the CLI config.
struct Tolerances {
  double axisRel = 1e-8;        // eigenvalue-on-axis threshold, relative to ||M||
  double newtonTol = 1e-10;     // residual tolerance for connection Newton
  int newtonMaxIter = 50;
  double fdStep = 1e-6;         // central-difference step scale for Psi Jacobians
  double chartFdStep = 3e-6;    // central-difference step for chart derivatives
  double rankRel = 1e-6;        // singular value cutoff, relative to sigma_max
  double nullRel = 1e-8;        // SVD null-space threshold
  double decayTarget = 1e-10;   // e^{-delta L} target for grid truncation
  double tailStep = 0.02;       // base mesh width near the interface
  double tailGrowth = 1.04;     // geometric mesh ratio in the tails
  double picardDamping = 1.0;
  int picardMaxIter = 60;
  double hpGapFactor = 10.0;    // cluster gap >= factor * cluster radius
  double procrustesMin = 0.99;  // minimum continuation overlap
  double contAngleJump = 1e-3;  // basis jump flagging a continuity suspect
  double verdictFrac = 1e-4;    // verdict threshold as fraction of median modulus
};

struct BasisAnchor {
  std::string chainId;   // identifies the continuation chain a basis belongs to
  double overlap = 1.0;  // Procrustes overlap with the previous chain element
  bool suspect = false;  // continuation jump exceeded tolerance
};

}  // namespace evanscope

#endif
