#include "prs/glm.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "prs/error.hpp"

namespace prs {

namespace {

constexpr double kEtaBound = 30.0;
constexpr double kMuEps = 1e-12;

double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

double penalized_ll(const Eigen::MatrixXd& Xd, const Eigen::VectorXd& yv,
                    const Eigen::VectorXd& beta, double ridge) {
  double ll = 0.0;
  for (int i = 0; i < Xd.rows(); ++i) {
    const double e = clamp(Xd.row(i).dot(beta), -kEtaBound, kEtaBound);
    const double mu = clamp(1.0 - std::exp(-std::exp(e)), kMuEps, 1.0 - kMuEps);
    ll += yv(i) > 0.5 ? std::log(mu) : std::log(1.0 - mu);
  }
  if (ridge > 0.0)
    for (int j = 1; j < beta.size(); ++j) ll -= 0.5 * ridge * beta(j) * beta(j);
  return ll;
}

// Solves hess * x = rhs for a symmetric positive semi-definite hess.  LDLT
// reports Success even on a rank-deficient matrix, so deficiency is detected
// from the pivot spread and repaired with an escalating diagonal bump (x10
// per attempt, 6 attempts).  On a bumped solve, hess is replaced by the
// stabilized matrix so downstream consumers see the curvature actually used.
Eigen::MatrixXd solve_spd(Eigen::MatrixXd& hess, const Eigen::MatrixXd& rhs,
                          double jitter0, bool& jitter_applied,
                          double& jitter_used) {
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::MatrixXd h = hess;
    double bump = 0.0;
    if (attempt > 0) {
      bump = jitter0 * std::pow(10.0, attempt - 1);
      h.diagonal().array() += bump;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() != Eigen::Success) continue;
    const Eigen::VectorXd D = ldlt.vectorD();
    const double dmax = D.maxCoeff();
    if (!(dmax > 0.0) || D.minCoeff() <= dmax * 1e-12) continue;
    Eigen::MatrixXd x = ldlt.solve(rhs);
    if (!x.allFinite()) continue;
    if (attempt > 0) {
      jitter_applied = true;
      jitter_used = bump;
      hess = h;
    }
    return x;
  }
  throw PrsError("SingularHessian",
                 "cloglog scoring produced an unsolvable Hessian");
}

}  // namespace

FittedModel fit_cloglog(const ActionMatrix& m, const CloglogConfig& cfg) {
  const int H = m.rows();
  const int K = m.cols();
  if (H <= K + 1)
    throw PrsError("BadValue",
                   "cloglog fit needs more rows than parameters (" +
                       std::to_string(H) + " rows, " + std::to_string(K + 1) +
                       " parameters)");
  const int ones = m.y.sum();
  if (ones == 0 || ones == H)
    throw PrsError("SingleClass",
                   "cloglog fit requires both outcome classes");
  if (cfg.ridge < 0.0)
    throw PrsError("BadValue", "ridge penalty must be >= 0");

  const int p = K + 1;
  Eigen::MatrixXd Xd(H, p);
  Xd.col(0).setOnes();
  if (K > 0) Xd.rightCols(K) = m.X;
  Eigen::VectorXd yv = m.y.cast<double>();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  // Start from the intercept-only solution; keeps early iterations in the
  // link's well-behaved range.
  const double ybar = static_cast<double>(ones) / H;
  beta(0) = std::log(-std::log(1.0 - ybar));

  bool converged = false;
  bool jitter_applied = false;
  double jitter_used = 0.0;
  bool stalled = false;
  int iter = 0;

  Eigen::VectorXd eta(H), mu(H), dmu(H), u(H), w(H);
  Eigen::MatrixXd hess(p, p);
  double ll = penalized_ll(Xd, yv, beta, cfg.ridge);

  for (iter = 1; iter <= cfg.max_iter; ++iter) {
    for (int i = 0; i < H; ++i) {
      const double e = clamp(Xd.row(i).dot(beta), -kEtaBound, kEtaBound);
      eta(i) = e;
      const double ee = std::exp(e);
      mu(i) = clamp(1.0 - std::exp(-ee), kMuEps, 1.0 - kMuEps);
      dmu(i) = std::exp(e - ee);  // d mu / d eta
      const double v = mu(i) * (1.0 - mu(i));
      u(i) = (yv(i) - mu(i)) * dmu(i) / v;
      w(i) = dmu(i) * dmu(i) / v;
    }

    Eigen::VectorXd grad = Xd.transpose() * u;
    hess = Xd.transpose() * w.asDiagonal() * Xd;
    if (cfg.ridge > 0.0) {
      // Penalty on the slope coefficients only; the intercept stays free.
      for (int j = 1; j < p; ++j) {
        grad(j) -= cfg.ridge * beta(j);
        hess(j, j) += cfg.ridge;
      }
    }

    const Eigen::VectorXd delta =
        solve_spd(hess, grad, cfg.jitter, jitter_applied, jitter_used);

    // Scoring far from the optimum can overshoot (the link saturates and the
    // overshot rows stop pulling back), so the step is halved until the
    // penalized likelihood stops getting worse.
    double step = 1.0;
    Eigen::VectorXd cand;
    double cand_ll = -std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int half = 0; half < 30; ++half) {
      cand = beta + step * delta;
      cand_ll = penalized_ll(Xd, yv, cand, cfg.ridge);
      if (std::isfinite(cand_ll) && cand_ll >= ll - 1e-12) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      stalled = true;
      break;
    }

    const double move = (step * delta).cwiseAbs().maxCoeff();
    beta = cand;
    ll = cand_ll;
    if (move < cfg.tol) {
      converged = true;
      break;
    }
  }

  FittedModel model;
  model.kind = ModelKind::Cloglog;
  model.spec = m.spec;
  model.threshold = ybar;
  model.glm.config = cfg;
  model.glm.coefficients.assign(beta.data(), beta.data() + p);

  // Wald standard errors from the curvature at the reported coefficients.
  for (int i = 0; i < H; ++i) {
    const double e = clamp(Xd.row(i).dot(beta), -kEtaBound, kEtaBound);
    const double ee = std::exp(e);
    const double mui = clamp(1.0 - std::exp(-ee), kMuEps, 1.0 - kMuEps);
    const double dmui = std::exp(e - ee);
    w(i) = dmui * dmui / (mui * (1.0 - mui));
  }
  hess = Xd.transpose() * w.asDiagonal() * Xd;
  if (cfg.ridge > 0.0)
    for (int j = 1; j < p; ++j) hess(j, j) += cfg.ridge;
  const Eigen::MatrixXd cov = solve_spd(hess, Eigen::MatrixXd::Identity(p, p),
                                        cfg.jitter, jitter_applied,
                                        jitter_used);
  model.glm.std_errors.resize(p);
  for (int j = 0; j < p; ++j)
    model.glm.std_errors[j] = std::sqrt(std::max(cov(j, j), 0.0));

  model.train_meta.iterations = std::min(iter, cfg.max_iter);
  model.train_meta.converged = converged;
  model.train_meta.hessian_jitter_applied = jitter_applied;
  model.train_meta.hessian_jitter = jitter_used;
  for (int j = 0; j < p; ++j)
    if (std::fabs(beta(j)) > cfg.coef_bound) {
      model.train_meta.separation_detected = true;
      break;
    }
  if (stalled)
    model.train_meta.notes = "step halving could not improve the likelihood";
  else if (!converged)
    model.train_meta.notes = "scoring hit max_iter before tolerance";
  return model;
}

}  // namespace prs
