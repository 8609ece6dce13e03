#pragma once

// Ridge-stabilised binary logistic regression fitted by IRLS (Newton-Raphson
// on the Bernoulli log-likelihood) with step halving.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "baytta/error.hpp"
#include "baytta/math.hpp"
#include "baytta/table.hpp"

namespace baytta {

/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before any log.
inline constexpr double kProbClamp = 1e-12;

/// Predictor values (N x p, no intercept column) and binary labels.
class DesignMatrix {
 public:
  DesignMatrix(Eigen::MatrixXd predictors, std::vector<std::uint8_t> labels)
      : x_(std::move(predictors)), y_(std::move(labels)) {
    if (static_cast<std::size_t>(x_.rows()) != y_.size())
      throw Error(ErrorKind::DimensionMismatch,
                  "design has " + std::to_string(x_.rows()) + " rows but " +
                      std::to_string(y_.size()) + " labels");
    if (!x_.allFinite()) throw Error(ErrorKind::NonFinite, "design contains non-finite values");
    for (auto v : y_)
      if (v > 1) throw Error(ErrorKind::NonBinaryLabel, "design labels must be 0 or 1");
  }

  /// Gathers the given table columns (in the given order) into a design.
  static DesignMatrix from_table(const PredictionTable& table,
                                 std::span<const std::size_t> columns) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(table.n_rows()),
                      static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto col = table.column(columns[c]);
      for (std::size_t r = 0; r < col.size(); ++r)
        x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
    }
    const auto labels = table.labels();
    return DesignMatrix(std::move(x), {labels.begin(), labels.end()});
  }

  std::size_t n_rows() const noexcept { return y_.size(); }
  std::size_t n_predictors() const noexcept { return static_cast<std::size_t>(x_.cols()); }
  const Eigen::MatrixXd& predictors() const noexcept { return x_; }
  std::span<const std::uint8_t> labels() const noexcept { return y_; }

 private:
  Eigen::MatrixXd x_;
  std::vector<std::uint8_t> y_;
};

struct FitConfig {
  int max_iterations = 100;
  double convergence_tol = 1e-8;  // max absolute coefficient change
  double grad_tol = 1e-6;         // infinity norm of the penalised gradient
  double ridge = 1e-6;            // L2 penalty on non-intercept coefficients

  void validate() const {
    if (max_iterations < 1 || !(convergence_tol > 0.0) || !(grad_tol > 0.0) ||
        !(ridge >= 0.0) || !std::isfinite(ridge))
      throw Error(ErrorKind::InvalidArgument, "invalid FitConfig");
  }
};

struct FittedModel {
  double intercept = 0.0;
  std::vector<double> coefficients;
  double max_log_likelihood = 0.0;  // unpenalised, clamped
  int iterations = 0;
  bool converged = false;

  double linear_predictor(std::span<const double> x) const {
    if (x.size() != coefficients.size())
      throw Error(ErrorKind::DimensionMismatch,
                  "row has " + std::to_string(x.size()) + " values, model expects " +
                      std::to_string(coefficients.size()));
    double eta = intercept;
    for (std::size_t j = 0; j < x.size(); ++j) eta += coefficients[j] * x[j];
    return eta;
  }

  double predict_probability(std::span<const double> x) const {
    return sigmoid(linear_predictor(x));
  }
};

namespace detail {

// log(1 + exp(z)) without overflow.
inline double log1p_exp(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline Eigen::VectorXd linear_predictors(const DesignMatrix& d, const Eigen::VectorXd& beta) {
  const auto p = static_cast<Eigen::Index>(d.n_predictors());
  Eigen::VectorXd eta = Eigen::VectorXd::Constant(d.predictors().rows(), beta(0));
  if (p > 0) eta.noalias() += d.predictors() * beta.tail(p);
  return eta;
}

// Ridge-penalised log-likelihood, unclamped; this is the IRLS objective.
inline double penalized_objective(const DesignMatrix& d, const Eigen::VectorXd& beta,
                                  double ridge) {
  const Eigen::VectorXd eta = linear_predictors(d, beta);
  const auto y = d.labels();
  double ll = 0.0;
  for (Eigen::Index n = 0; n < eta.size(); ++n)
    ll += (y[static_cast<std::size_t>(n)] ? eta(n) : 0.0) - log1p_exp(eta(n));
  return ll - 0.5 * ridge * beta.tail(beta.size() - 1).squaredNorm();
}

inline double clamped_log_likelihood(const DesignMatrix& d, const Eigen::VectorXd& eta) {
  const auto y = d.labels();
  double ll = 0.0;
  for (Eigen::Index n = 0; n < eta.size(); ++n) {
    const double p = std::clamp(sigmoid(eta(n)), kProbClamp, 1.0 - kProbClamp);
    ll += y[static_cast<std::size_t>(n)] ? std::log(p) : std::log1p(-p);
  }
  return ll;
}

}  // namespace detail

/// Maximises the ridge-penalised Bernoulli log-likelihood. The intercept is
/// never penalised. A run that exhausts max_iterations returns the last
/// (best, since every accepted step is non-decreasing) iterate with
/// `converged == false`.
inline FittedModel fit_logistic(const DesignMatrix& design, const FitConfig& config = {}) {
  config.validate();
  const auto labels = design.labels();
  const auto n_pos = std::count(labels.begin(), labels.end(), std::uint8_t{1});
  if (design.n_rows() < 2 || n_pos == 0 || n_pos == static_cast<long>(design.n_rows()))
    throw Error(ErrorKind::SingleClass, "fitting needs at least one label of each class");

  const auto& x = design.predictors();
  const auto p = x.cols();
  const auto n = x.rows();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)];

  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(p + 1, config.ridge);
  penalty(0) = 0.0;

  // Penalised gradient and negative Hessian at beta.
  Eigen::VectorXd grad(p + 1);
  Eigen::MatrixXd info(p + 1, p + 1);
  const auto derivatives = [&](const Eigen::VectorXd& beta, bool with_hessian) {
    const Eigen::VectorXd eta = detail::linear_predictors(design, beta);
    Eigen::VectorXd mu(n);
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      mu(i) = sigmoid(eta(i));
      w(i) = mu(i) * (1.0 - mu(i));
    }
    const Eigen::VectorXd resid = y - mu;
    grad(0) = resid.sum();
    if (p > 0) grad.tail(p).noalias() = x.transpose() * resid;
    grad -= penalty.cwiseProduct(beta);
    if (!with_hessian) return;
    info(0, 0) = w.sum();
    if (p > 0) {
      const Eigen::VectorXd xw = x.transpose() * w;
      info.block(1, 0, p, 1) = xw;
      info.block(0, 1, 1, p) = xw.transpose();
      info.block(1, 1, p, p).noalias() = x.transpose() * w.asDiagonal() * x;
    }
    info.diagonal() += penalty;
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
  double objective = detail::penalized_objective(design, beta, config.ridge);
  FittedModel out;
  bool converged = false;
  int iter = 0;
  while (iter < config.max_iterations) {
    ++iter;
    derivatives(beta, true);
    const Eigen::LDLT<Eigen::MatrixXd> solver(info);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorKind::NonFinite, "weighted normal equations could not be factorised");
    const Eigen::VectorXd step = solver.solve(grad);
    if (!step.allFinite())
      throw Error(ErrorKind::NonFinite, "weighted normal equations are singular");

    // Step halving keeps the objective non-decreasing.
    double scale = 1.0;
    Eigen::VectorXd candidate;
    double cand_obj = 0.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 40; ++halvings, scale *= 0.5) {
      candidate = beta + scale * step;
      cand_obj = detail::penalized_objective(design, candidate, config.ridge);
      if (std::isfinite(cand_obj) && cand_obj >= objective - 1e-12 * std::abs(objective)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      derivatives(beta, false);
      converged = grad.lpNorm<Eigen::Infinity>() <= config.grad_tol;
      break;
    }
    const double change = (scale * step).lpNorm<Eigen::Infinity>();
    beta = candidate;
    objective = cand_obj;
    if (change <= config.convergence_tol) {
      derivatives(beta, false);
      if (grad.lpNorm<Eigen::Infinity>() <= config.grad_tol) {
        converged = true;
        break;
      }
    }
  }
  if (!beta.allFinite()) throw Error(ErrorKind::NonFinite, "coefficients diverged");

  out.intercept = beta(0);
  out.coefficients.assign(beta.data() + 1, beta.data() + 1 + p);
  out.iterations = iter;
  out.converged = converged;
  out.max_log_likelihood =
      detail::clamped_log_likelihood(design, detail::linear_predictors(design, beta));
  return out;
}

/// Sum over rows of y ln p + (1 - y) ln(1 - p), with p clamped away from 0/1.
inline double log_likelihood(const FittedModel& model, const DesignMatrix& design) {
  if (model.coefficients.size() != design.n_predictors())
    throw Error(ErrorKind::DimensionMismatch,
                "model has " + std::to_string(model.coefficients.size()) +
                    " coefficients, design has " + std::to_string(design.n_predictors()) +
                    " predictors");
  Eigen::VectorXd beta(static_cast<Eigen::Index>(model.coefficients.size() + 1));
  beta(0) = model.intercept;
  for (std::size_t j = 0; j < model.coefficients.size(); ++j)
    beta(static_cast<Eigen::Index>(j + 1)) = model.coefficients[j];
  return detail::clamped_log_likelihood(design, detail::linear_predictors(design, beta));
}

/// p ln(N) - 2 ln(L). `n_params` includes the intercept.
inline double bic(double max_log_likelihood, std::size_t n_params, std::size_t n_samples) {
  return static_cast<double>(n_params) * std::log(static_cast<double>(n_samples)) -
         2.0 * max_log_likelihood;
}

}  // namespace baytta
