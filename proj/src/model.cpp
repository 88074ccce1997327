#include "evanscope/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "evanscope/linalg.hpp"

namespace evanscope {

SystemModel::SystemModel(std::string name, int N, int d, MatrixEvaluator evalA,
                         MatrixDirDerivative evalDA, Vec domainLo, Vec domainHi)
    : name_(std::move(name)),
      N_(N),
      d_(d),
      evalA_(std::move(evalA)),
      evalDA_(std::move(evalDA)),
      domainLo_(std::move(domainLo)),
      domainHi_(std::move(domainHi)) {
  if (d_ < 1 || d_ > 2)
    throw Error(ErrorCode::ConfigError, "space dimension must be 1 or 2");
}

SystemModel::SystemModel(std::string name, int N, int d, MatrixEvaluator evalA,
                         Vec domainLo, Vec domainHi)
    : SystemModel(std::move(name), N, d, evalA, MatrixDirDerivative{},
                  std::move(domainLo), std::move(domainHi)) {
  MatrixEvaluator eval = evalA_;
  evalDA_ = [eval](int j, const Vec& u, const Vec& v) {
    const double step = 1e-6 * (1.0 + u.norm());
    return Mat(((eval(j, u + step * v) - eval(j, u - step * v)) / (2.0 * step)));
  };
}

void SystemModel::checkDomain(const Vec& u) const {
  if (u.size() != N_)
    throw Error(ErrorCode::DomainError, "state dimension mismatch");
  for (int i = 0; i < N_; ++i)
    if (u(i) < domainLo_(i) || u(i) > domainHi_(i))
      throw Error(ErrorCode::DomainError,
                  "state component " + std::to_string(i) +
                      " outside the evaluator domain");
}

Mat SystemModel::A(int j, const Vec& u) const {
  checkDomain(u);
  return evalA_(j, u);
}

Mat SystemModel::dA(int j, const Vec& u, const Vec& v) const {
  checkDomain(u);
  return evalDA_(j, u, v);
}

Mat SystemModel::A0inv(const Vec& u) const {
  Mat A0 = A(0, u);
  Eigen::FullPivLU<Mat> lu(A0);
  if (!lu.isInvertible())
    throw Error(ErrorCode::DomainError, "A_0(u) is singular (H0 violated)");
  return lu.inverse();
}

Mat SystemModel::Abar(const Vec& u, const Vec& xi) const {
  Mat sum = Mat::Zero(N_, N_);
  for (int j = 1; j <= d_; ++j) sum += xi(j - 1) * A(j, u);
  return A0inv(u) * sum;
}

Mat SystemModel::Bbar(const Vec& u, const Vec& xi) const {
  return A0inv(u) * xi.squaredNorm();
}

Mat SystemModel::curlyAd(const Vec& u, double s, const Vec& h) const {
  Mat out = A(d_, u) - s * A(0, u);
  for (int i = 1; i < d_; ++i) out -= h(i - 1) * A(i, u);
  return out;
}

Mat SystemModel::curlyAdBar(const Vec& u, double s, const Vec& h) const {
  return A0inv(u) * curlyAd(u, s, h);
}

Mat SystemModel::dCurlyAd(const Vec& u, double s, const Vec& h,
                          const Vec& v) const {
  Mat out = dA(d_, u, v) - s * dA(0, u, v);
  for (int i = 1; i < d_; ++i) out -= h(i - 1) * dA(i, u, v);
  return out;
}

StructuralCheckReport structuralChecks(const SystemModel& model,
                                       const std::vector<Vec>& uSamples,
                                       const std::vector<Vec>& xiSamples,
                                       double imagTol) {
  if (uSamples.empty() || xiSamples.empty())
    throw Error(ErrorCode::ConfigError, "structuralChecks needs nonempty samples");
  StructuralCheckReport rep;
  rep.hyperbolicityMargin = 0.0;
  rep.parabolicityMargin = std::numeric_limits<double>::infinity();
  rep.dissipativityMargin = std::numeric_limits<double>::infinity();

  for (const Vec& u : uSamples) {
    for (const Vec& xi : xiSamples) {
      if (xi.norm() == 0.0)
        throw Error(ErrorCode::ConfigError, "xi samples must exclude 0");
      rep.samples.push_back({u, xi});
      Mat Ab, Bb;
      try {
        Ab = model.Abar(u, xi);
        Bb = model.Bbar(u, xi);
      } catch (const Error&) {
        rep.h0OK = false;
        continue;
      }
      const double xi2 = xi.squaredNorm();

      Eigen::EigenSolver<Mat> esA(Ab, false);
      for (int k = 0; k < model.N(); ++k) {
        const double im = std::abs(esA.eigenvalues()(k).imag());
        if (im > rep.hyperbolicityMargin) {
          rep.hyperbolicityMargin = im;
          rep.hyperbolicityWorst = {u, xi};
          rep.hyperbolicityWorstEig = esA.eigenvalues()(k);
        }
      }

      Eigen::EigenSolver<Mat> esB(Bb, false);
      for (int k = 0; k < model.N(); ++k) {
        const double re = esB.eigenvalues()(k).real() / xi2;
        if (re < rep.parabolicityMargin) {
          rep.parabolicityMargin = re;
          rep.parabolicityWorst = {u, xi};
        }
      }

      CMat D = Complex(0.0, 1.0) * Ab.cast<Complex>() + Bb.cast<Complex>();
      Eigen::ComplexEigenSolver<CMat> esD(D, false);
      for (int k = 0; k < model.N(); ++k) {
        const double re = esD.eigenvalues()(k).real() / xi2;
        if (re < rep.dissipativityMargin) {
          rep.dissipativityMargin = re;
          rep.dissipativityWorst = {u, xi};
        }
      }
    }
  }
  rep.hyperbolicityOK = rep.hyperbolicityMargin <= imagTol;
  return rep;
}

std::vector<Vec> defaultStateSamples(const SystemModel& model, int perAxis) {
  std::vector<Vec> out;
  const int N = model.N();
  std::vector<int> idx(N, 0);
  while (true) {
    Vec u(N);
    for (int i = 0; i < N; ++i) {
      const double t = (perAxis == 1) ? 0.5 : double(idx[i]) / (perAxis - 1);
      u(i) = model.domainLo()(i) + t * (model.domainHi()(i) - model.domainLo()(i));
    }
    out.push_back(u);
    int i = 0;
    for (; i < N; ++i) {
      if (++idx[i] < perAxis) break;
      idx[i] = 0;
    }
    if (i == N) break;
  }
  return out;
}

std::vector<Vec> defaultFrequencySamples(int d, int perAxis) {
  std::vector<Vec> out;
  if (d == 1) {
    Vec a(1), b(1);
    a << 1.0;
    b << -1.0;
    out = {a, b};
  } else {
    for (int k = 0; k < 2 * perAxis; ++k) {
      const double th = 2.0 * M_PI * k / (2.0 * perAxis);
      Vec xi(2);
      xi << std::cos(th), std::sin(th);
      out.push_back(xi);
    }
  }
  return out;
}

std::array<int, 3> compressiveIndices(const SystemModel& model,
                                      const PlanarShockPoint& q,
                                      double axisRel) {
  auto countSide = [&](const Vec& p, bool negative) {
    Mat M = model.curlyAdBar(p, q.s, q.h);
    const double scale = std::max(M.norm(), 1e-300);
    Eigen::EigenSolver<Mat> es(M, false);
    int count = 0;
    for (int k = 0; k < model.N(); ++k) {
      const double re = es.eigenvalues()(k).real();
      if (std::abs(re) <= axisRel * scale)
        throw Error(ErrorCode::CharacteristicShock,
                    "curlyAd eigenvalue within " + std::to_string(std::abs(re)) +
                        " of the imaginary axis");
      if (negative ? re < 0 : re > 0) ++count;
    }
    return count;
  };
  const int Rminus = countSide(q.pPlus, true);
  const int Lplus = countSide(q.pMinus, false);
  const int k = model.N() + 1 - (Rminus + Lplus);
  return {Rminus, Lplus, k};
}

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

std::vector<std::string> builtinIds() {
  return {"burgers", "burgers2d", "burgers-transport", "nc-coupled", "cubic-uc"};
}

Builtin makeBuiltin(const std::string& id) {
  Builtin b;
  if (id == "burgers" || id == "burgers2d") {
    const int d = (id == "burgers") ? 1 : 2;
    auto evalA = [](int j, const Vec& u) {
      Mat A(1, 1);
      A(0, 0) = (j == 0) ? 1.0 : u(0);
      return A;
    };
    auto evalDA = [](int j, const Vec& u, const Vec& v) {
      Mat D(1, 1);
      D(0, 0) = (j == 0) ? 0.0 : v(0);
      (void)u;
      return D;
    };
    Vec lo(1), hi(1);
    lo << -3.0;
    hi << 3.0;
    b.model = std::make_shared<SystemModel>(id, 1, d, evalA, evalDA, lo, hi);
    b.referenceShock.pPlus = Vec::Constant(1, -1.0);
    b.referenceShock.pMinus = Vec::Constant(1, 1.0);
    b.referenceShock.s = 0.0;
    b.referenceShock.h = Vec::Zero(d - 1);
    b.zbar = -2.0;
    b.profileGuess0 = Vec::Zero(1);
  } else if (id == "burgers-transport") {
    auto evalA = [](int j, const Vec& u) {
      Mat A = Mat::Zero(2, 2);
      if (j == 0) {
        A.setIdentity();
      } else {
        A(0, 0) = u(0);
        A(1, 1) = 0.7;
      }
      return A;
    };
    auto evalDA = [](int j, const Vec& u, const Vec& v) {
      Mat D = Mat::Zero(2, 2);
      if (j != 0) D(0, 0) = v(0);
      (void)u;
      return D;
    };
    Vec lo = vec2(-3.0, -3.0), hi = vec2(3.0, 3.0);
    b.model = std::make_shared<SystemModel>(id, 2, 1, evalA, evalDA, lo, hi);
    b.referenceShock.pPlus = vec2(-1.0, 0.5);
    b.referenceShock.pMinus = vec2(1.0, 0.5);
    b.referenceShock.s = 0.0;
    b.referenceShock.h = Vec::Zero(0);
    b.zbar = -2.0;
    b.profileGuess0 = vec2(0.0, 0.5);
  } else if (id == "nc-coupled") {
    auto evalA = [](int j, const Vec& u) {
      Mat A = Mat::Zero(2, 2);
      if (j == 0) {
        A.setIdentity();
      } else {
        A(0, 0) = u(0);
        A(0, 1) = 0.1 * u(1);
        A(1, 1) = 0.7;
      }
      return A;
    };
    auto evalDA = [](int j, const Vec& u, const Vec& v) {
      Mat D = Mat::Zero(2, 2);
      if (j != 0) {
        D(0, 0) = v(0);
        D(0, 1) = 0.1 * v(1);
      }
      (void)u;
      return D;
    };
    Vec lo = vec2(-3.0, -3.0), hi = vec2(3.0, 3.0);
    b.model = std::make_shared<SystemModel>(id, 2, 1, evalA, evalDA, lo, hi);
    b.referenceShock.pPlus = vec2(-1.0, 0.5);
    b.referenceShock.pMinus = vec2(1.0, 0.5);
    b.referenceShock.s = 0.0;
    b.referenceShock.h = Vec::Zero(0);
    b.zbar = -2.0;
    b.profileGuess0 = vec2(0.0, 0.5);
  } else if (id == "cubic-uc") {
    // Cubic leading flux with a stability-switching second field; carries an
    // undercompressive (k = 1) reference connection with explicit first
    // integral x' = x^3 - 1.24 x + 0.24 in the first component. The lower
    // left coupling vanishes on the reference profile (u_2 = 0.5) but keeps
    // the linearized transmission problem generic.
    auto evalA = [](int j, const Vec& u) {
      Mat A = Mat::Zero(2, 2);
      if (j == 0) {
        A.setIdentity();
      } else {
        A(0, 0) = 3.0 * u(0) * u(0);
        A(0, 1) = 0.2 * u(1);
        A(1, 0) = 0.15 * (u(1) - 0.5);
        A(1, 1) = 2.0 - u(0);
      }
      return A;
    };
    auto evalDA = [](int j, const Vec& u, const Vec& v) {
      Mat D = Mat::Zero(2, 2);
      if (j != 0) {
        D(0, 0) = 6.0 * u(0) * v(0);
        D(0, 1) = 0.2 * v(1);
        D(1, 0) = 0.15 * v(1);
        D(1, 1) = -v(0);
      }
      return D;
    };
    Vec lo = vec2(-2.0, -2.0), hi = vec2(2.0, 2.0);
    b.model = std::make_shared<SystemModel>(id, 2, 1, evalA, evalDA, lo, hi);
    b.referenceShock.pPlus = vec2(0.2, 0.5);
    b.referenceShock.pMinus = vec2(1.0, 0.5);
    b.referenceShock.s = 1.24;
    b.referenceShock.h = Vec::Zero(0);
    b.zbar = -2.0;
    b.profileGuess0 = vec2(0.6, 0.5);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown builtin system id: " + id);
  }
  b.referenceShock.indices = compressiveIndices(*b.model, b.referenceShock);
  return b;
}

}  // namespace evanscope
