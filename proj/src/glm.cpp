#include "otpml/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/QR>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "otpml/error.hpp"
#include "otpml/stats.hpp"

namespace otpml {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kZ975 = 1.959963984540054;

// Column centring/scaling applied before optimisation.
struct Scaling {
  bool intercept = true;
  std::vector<double> centers;
  std::vector<double> scales;
};

Scaling fit_scaling(const FeatureView& x, bool intercept, ErrorKind degenerate) {
  Scaling s;
  s.intercept = intercept;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    auto col = x.column(c);
    double center = 0.0;
    double scale = 0.0;
    if (intercept) {
      center = mean(col);
      scale = std::sqrt(sample_variance(col));
    } else {
      double ss = 0.0;
      for (double v : col) ss += v * v;
      scale = std::sqrt(ss / static_cast<double>(col.size()));
    }
    if (!(scale > 0.0)) {
      throw Error(degenerate, fmt::format("feature {} is {}", c, intercept ? "constant (collinear with the intercept)" : "all zero"));
    }
    s.centers.push_back(center);
    s.scales.push_back(scale);
  }
  return s;
}

MatrixXd design(const FeatureView& x, bool intercept, const Scaling* scaling) {
  const auto k = static_cast<Eigen::Index>(x.cols() + (intercept ? 1 : 0));
  MatrixXd z(static_cast<Eigen::Index>(x.rows()), k);
  Eigen::Index c0 = 0;
  if (intercept) {
    z.col(0).setOnes();
    c0 = 1;
  }
  for (std::size_t c = 0; c < x.cols(); ++c) {
    auto col = x.column(c);
    const double center = scaling ? scaling->centers[c] : 0.0;
    const double scale = scaling ? scaling->scales[c] : 1.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      z(static_cast<Eigen::Index>(r), c0 + static_cast<Eigen::Index>(c)) = (col[r] - center) / scale;
    }
  }
  return z;
}

// beta = A * gamma maps standardized coefficients back to the raw scale.
MatrixXd back_transform(const Scaling& s) {
  const auto p = static_cast<Eigen::Index>(s.scales.size());
  const Eigen::Index off = s.intercept ? 1 : 0;
  MatrixXd a = MatrixXd::Zero(p + off, p + off);
  if (s.intercept) a(0, 0) = 1.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    a(off + j, off + j) = 1.0 / s.scales[static_cast<std::size_t>(j)];
    if (s.intercept) a(0, off + j) = -s.centers[static_cast<std::size_t>(j)] / s.scales[static_cast<std::size_t>(j)];
  }
  return a;
}

double log1p_exp(double eta) { return std::max(eta, 0.0) + std::log1p(std::exp(-std::abs(eta))); }

double sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double mean_of(Family f, double eta) {
  switch (f) {
    case Family::gaussian_identity: return eta;
    case Family::bernoulli_logit: return sigmoid(eta);
    case Family::poisson_log: return std::exp(eta);
  }
  return eta;
}

double loglik(Family f, const VectorXd& eta, const VectorXd& y) {
  double ll = 0.0;
  switch (f) {
    case Family::gaussian_identity: {
      const double rss = (y - eta).squaredNorm();
      const double n = static_cast<double>(y.size());
      if (rss == 0.0) return std::numeric_limits<double>::infinity();
      return -0.5 * n * (std::log(2.0 * std::numbers::pi * rss / n) + 1.0);
    }
    case Family::bernoulli_logit:
      for (Eigen::Index i = 0; i < y.size(); ++i) ll += y[i] * eta[i] - log1p_exp(eta[i]);
      return ll;
    case Family::poisson_log:
      for (Eigen::Index i = 0; i < y.size(); ++i) ll += y[i] * eta[i] - std::exp(eta[i]) - std::lgamma(y[i] + 1.0);
      return ll;
  }
  return ll;
}

double saturated_loglik(Family f, const VectorXd& y) {
  double ll = 0.0;
  if (f == Family::poisson_log) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      ll += (y[i] > 0.0 ? y[i] * std::log(y[i]) - y[i] : 0.0) - std::lgamma(y[i] + 1.0);
    }
  }
  return ll;  // 0 for 0/1 responses
}

VectorXd gradient_of(Family f, const MatrixXd& z, const VectorXd& eta, const VectorXd& y) {
  VectorXd resid(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) resid[i] = y[i] - mean_of(f, eta[i]);
  VectorXd g = z.transpose() * resid;
  if (f == Family::gaussian_identity) g *= static_cast<double>(y.size()) / resid.squaredNorm();
  return g;
}

double deviance_of(Family f, const VectorXd& mu, const VectorXd& y) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    switch (f) {
      case Family::gaussian_identity: d += (y[i] - mu[i]) * (y[i] - mu[i]); break;
      case Family::bernoulli_logit:
        d += -2.0 * (y[i] > 0.5 ? std::log(mu[i]) : std::log1p(-mu[i]));
        break;
      case Family::poisson_log:
        d += 2.0 * ((y[i] > 0.0 ? y[i] * std::log(y[i] / mu[i]) : 0.0) - (y[i] - mu[i]));
        break;
    }
  }
  return d;
}

double pearson_of(Family f, const VectorXd& mu, const VectorXd& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double r = y[i] - mu[i];
    switch (f) {
      case Family::gaussian_identity: s += r * r; break;
      case Family::bernoulli_logit: s += r * r / (mu[i] * (1.0 - mu[i])); break;
      case Family::poisson_log: s += r * r / mu[i]; break;
    }
  }
  return s;
}

VectorXd means(Family f, const VectorXd& eta) {
  VectorXd mu(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) mu[i] = mean_of(f, eta[i]);
  return mu;
}

struct NewtonResult {
  VectorXd gamma;
  MatrixXd information;  // Z' W Z at gamma
  std::size_t iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  std::vector<double> deviance_trace;
};

MatrixXd information_of(Family f, const MatrixXd& z, const VectorXd& eta) {
  VectorXd w(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double mu = mean_of(f, eta[i]);
    w[i] = f == Family::bernoulli_logit ? mu * (1.0 - mu) : mu;
  }
  return z.transpose() * w.asDiagonal() * z;
}

NewtonResult newton(Family f, const MatrixXd& z, const VectorXd& y, VectorXd gamma, const GlmOptions& opts) {
  NewtonResult res;
  VectorXd eta = z * gamma;
  double ll = loglik(f, eta, y);
  const MatrixXd info0 = information_of(f, z, eta);
  const double reference = info0.diagonal().mean();

  // Deviance is tracked as 2 (LL_saturated - LL) from the same LL values the
  // step acceptance compares, so the trace can only fall.
  const double ll_saturated = saturated_loglik(f, y);

  for (;;) {
    const VectorXd g = gradient_of(f, z, eta, y);
    res.gradient_norm = g.lpNorm<Eigen::Infinity>();
    if (res.gradient_norm < opts.tolerance) {
      res.converged = true;
      break;
    }
    if (res.iterations >= opts.max_iterations) break;

    const MatrixXd info = information_of(f, z, eta);
    Eigen::LDLT<MatrixXd> ldlt(info);
    const double min_pivot = ldlt.info() == Eigen::Success ? ldlt.vectorD().minCoeff() : 0.0;
    if (!(min_pivot > 1e-7 * reference)) {
      throw Error(ErrorKind::SingularHessian,
                  f == Family::bernoulli_logit
                      ? "information matrix is singular; the classes may be perfectly separated"
                      : "information matrix is singular");
    }
    const VectorXd step = ldlt.solve(g);

    // Below the resolution of LL itself a comparison is meaningless; the
    // quadratic model says the full step gains 0.5 g'H^-1 g, which rounds to
    // nothing, so take it and leave LL as is.
    if (0.5 * g.dot(step) <= 1e-12 * (1.0 + std::abs(ll))) {
      gamma += step;
      eta = z * gamma;
      ++res.iterations;
      res.deviance_trace.push_back(2.0 * (ll_saturated - ll));
      continue;
    }

    double t = 1.0;
    bool accepted = false;
    VectorXd candidate;
    VectorXd candidate_eta;
    double candidate_ll = 0.0;
    for (std::size_t h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
      candidate = gamma + t * step;
      candidate_eta = z * candidate;
      candidate_ll = loglik(f, candidate_eta, y);
      if (std::isfinite(candidate_ll) && candidate_ll >= ll) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no ascent direction left at working precision
    gamma = std::move(candidate);
    eta = std::move(candidate_eta);
    ll = candidate_ll;
    ++res.iterations;
    res.deviance_trace.push_back(2.0 * (ll_saturated - ll));
  }
  res.gamma = std::move(gamma);
  res.information = information_of(f, z, eta);
  return res;
}

void check_rows(const FeatureView& x, std::span<const double> y, std::size_t k) {
  if (y.size() != x.rows()) {
    throw Error(ErrorKind::ShapeMismatch, fmt::format("{} responses for {} rows", y.size(), x.rows()));
  }
  if (x.rows() <= k) {
    throw Error(ErrorKind::TooFewRows, fmt::format("{} rows for {} coefficients", x.rows(), k));
  }
}

VectorXd to_vector(std::span<const double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

std::vector<double> to_std(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Fills coefficient statistics from standardized estimates and covariance.
void finish(GlmFit& fit, const Scaling& scaling, const VectorXd& gamma, const MatrixXd& cov_gamma) {
  const MatrixXd a = back_transform(scaling);
  const VectorXd beta = a * gamma;
  const MatrixXd cov = a * cov_gamma * a.transpose();
  const auto k = beta.size();
  fit.coefficients = to_std(beta);
  fit.std_errors.resize(static_cast<std::size_t>(k));
  fit.z_scores.resize(static_cast<std::size_t>(k));
  fit.p_values.resize(static_cast<std::size_t>(k));
  fit.ci_lower.resize(static_cast<std::size_t>(k));
  fit.ci_upper.resize(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double se = std::sqrt(std::max(0.0, cov(i, i)));
    fit.std_errors[u] = se;
    fit.z_scores[u] = se > 0.0 ? beta[i] / se : std::numeric_limits<double>::quiet_NaN();
    fit.p_values[u] = se > 0.0 ? normal_two_sided_p(fit.z_scores[u]) : std::numeric_limits<double>::quiet_NaN();
    fit.ci_lower[u] = beta[i] - kZ975 * se;
    fit.ci_upper[u] = beta[i] + kZ975 * se;
  }
  const Eigen::Index off = scaling.intercept ? 1 : 0;
  fit.standardized_slopes.assign(gamma.data() + off, gamma.data() + gamma.size());
}

GlmFit fit_newton_family(Family family, const FeatureView& x, std::span<const double> y, bool intercept,
                         const GlmOptions& opts) {
  const Scaling scaling = fit_scaling(x, intercept, ErrorKind::SingularHessian);
  const MatrixXd z = design(x, intercept, &scaling);
  const VectorXd yv = to_vector(y);

  VectorXd start = VectorXd::Zero(z.cols());
  if (family == Family::poisson_log && intercept) start[0] = std::log(std::max(yv.mean(), 1e-10));
  const NewtonResult res = newton(family, z, yv, start, opts);

  GlmFit fit;
  fit.family = family;
  fit.intercept = intercept;
  fit.n_obs = x.rows();
  fit.df_model = x.cols();
  fit.df_resid = x.rows() - static_cast<std::size_t>(z.cols());
  fit.iterations = res.iterations;
  fit.converged = res.converged;
  fit.gradient_norm = res.gradient_norm;
  fit.deviance_trace = res.deviance_trace;

  Eigen::LDLT<MatrixXd> ldlt(res.information);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::SingularHessian, "information matrix at the optimum");
  const MatrixXd cov = ldlt.solve(MatrixXd::Identity(z.cols(), z.cols()));
  finish(fit, scaling, res.gamma, cov);

  const VectorXd eta = z * res.gamma;
  const VectorXd mu = means(family, eta);
  fit.log_likelihood = loglik(family, eta, yv);
  fit.deviance = deviance_of(family, mu, yv);
  fit.pearson_chi2 = pearson_of(family, mu, yv);
  fit.scale = 1.0;
  fit.r_squared = std::numeric_limits<double>::quiet_NaN();

  // Null model: an actual intercept-only fit through the same solver.
  if (intercept) {
    const MatrixXd ones = MatrixXd::Ones(z.rows(), 1);
    VectorXd null_start = VectorXd::Zero(1);
    if (family == Family::poisson_log) null_start[0] = start[0];
    const NewtonResult null_res = newton(family, ones, yv, null_start, opts);
    fit.null_log_likelihood = loglik(family, ones * null_res.gamma, yv);
  } else {
    fit.null_log_likelihood = loglik(family, VectorXd::Zero(z.rows()), yv);
  }
  fit.mcfadden_pseudo_r2 = 1.0 - fit.log_likelihood / fit.null_log_likelihood;
  fit.llr_p_value = chi2_survival(std::max(0.0, 2.0 * (fit.log_likelihood - fit.null_log_likelihood)),
                                  static_cast<double>(fit.df_model));
  return fit;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  const double a = std::abs(v);
  if (a == 0.0 || (a >= 1e-3 && a < 1e7)) return fmt::format("{:.4f}", v);
  return fmt::format("{:.3e}", v);
}

std::string pval(double p) { return std::isnan(p) ? "nan" : fmt::format("{:.3f}", p); }

}  // namespace

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::gaussian_identity: return "gaussian-identity";
    case Family::bernoulli_logit: return "bernoulli-logit";
    case Family::poisson_log: return "poisson-log";
  }
  return "unknown";
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::numbers::sqrt2); }

double chi2_survival(double x, double df) {
  if (df <= 0.0) return x > 0.0 ? 0.0 : 1.0;
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

GlmFit fit_ols(const FeatureView& x, std::span<const double> y, bool intercept) {
  const std::size_t k = x.cols() + (intercept ? 1 : 0);
  check_rows(x, y, k);
  const Scaling scaling = fit_scaling(x, intercept, ErrorKind::RankDeficient);
  const MatrixXd z = design(x, intercept, &scaling);
  const VectorXd yv = to_vector(y);

  Eigen::ColPivHouseholderQR<MatrixXd> rank_check(z);
  rank_check.setThreshold(1e-10);
  if (rank_check.rank() < z.cols()) {
    throw Error(ErrorKind::RankDeficient, fmt::format("design rank {} < {} columns", rank_check.rank(), z.cols()));
  }
  const Eigen::HouseholderQR<MatrixXd> qr(z);
  const VectorXd gamma = qr.solve(yv);
  const auto kk = z.cols();
  const MatrixXd r = qr.matrixQR().topRows(kk).triangularView<Eigen::Upper>();
  const MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(MatrixXd::Identity(kk, kk));
  const MatrixXd xtx_inv = r_inv * r_inv.transpose();

  const VectorXd fitted = z * gamma;
  const double rss = (yv - fitted).squaredNorm();
  GlmFit fit;
  fit.family = Family::gaussian_identity;
  fit.intercept = intercept;
  fit.n_obs = x.rows();
  fit.df_model = x.cols();
  fit.df_resid = x.rows() - k;
  fit.scale = rss / static_cast<double>(fit.df_resid);
  finish(fit, scaling, gamma, fit.scale * xtx_inv);

  fit.iterations = 1;
  fit.converged = true;
  fit.gradient_norm = (z.transpose() * (yv - fitted)).lpNorm<Eigen::Infinity>();
  fit.log_likelihood = loglik(Family::gaussian_identity, fitted, yv);
  fit.deviance = rss;
  fit.pearson_chi2 = rss;
  fit.deviance_trace = {rss};
  const double ybar = yv.mean();
  const double tss = intercept ? (yv.array() - ybar).matrix().squaredNorm() : yv.squaredNorm();
  fit.r_squared = tss > 0.0 ? 1.0 - rss / tss : std::numeric_limits<double>::quiet_NaN();
  const VectorXd null_fit = intercept ? VectorXd::Constant(yv.size(), ybar) : VectorXd::Zero(yv.size());
  fit.null_log_likelihood = loglik(Family::gaussian_identity, null_fit, yv);
  fit.mcfadden_pseudo_r2 = std::numeric_limits<double>::quiet_NaN();
  fit.llr_p_value = chi2_survival(std::max(0.0, 2.0 * (fit.log_likelihood - fit.null_log_likelihood)),
                                  static_cast<double>(fit.df_model));
  return fit;
}

GlmFit fit_logistic(const FeatureView& x, std::span<const double> y, bool intercept, const GlmOptions& opts) {
  check_rows(x, y, x.cols() + (intercept ? 1 : 0));
  bool has0 = false, has1 = false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) {
      has0 = true;
    } else if (y[i] == 1.0) {
      has1 = true;
    } else {
      throw Error(ErrorKind::LabelOutOfRange, fmt::format("response {} at row {}", y[i], i));
    }
  }
  if (!has0 || !has1) throw Error(ErrorKind::SingleClassInput, "logistic regression needs both classes");
  return fit_newton_family(Family::bernoulli_logit, x, y, intercept, opts);
}

GlmFit fit_poisson(const FeatureView& x, std::span<const double> y, bool intercept, const GlmOptions& opts) {
  check_rows(x, y, x.cols() + (intercept ? 1 : 0));
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] >= 0.0) || !std::isfinite(y[i])) {
      throw Error(ErrorKind::NegativeResponse, fmt::format("response {} at row {}", y[i], i));
    }
  }
  return fit_newton_family(Family::poisson_log, x, y, intercept, opts);
}

double predict_glm(const GlmFit& f, std::span<const double> row) {
  if (row.size() != f.n_features()) {
    throw Error(ErrorKind::ShapeMismatch, fmt::format("row has {} values, model expects {}", row.size(), f.n_features()));
  }
  std::size_t j = 0;
  double eta = 0.0;
  if (f.intercept) eta = f.coefficients[j++];
  for (double v : row) eta += f.coefficients[j++] * v;
  return mean_of(f.family, eta);
}

std::vector<double> predict_glm(const GlmFit& f, const FeatureView& x) {
  std::vector<double> out(x.rows());
  std::vector<double> row(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    x.copy_row(r, row);
    out[r] = predict_glm(f, row);
  }
  return out;
}

double glm_log_likelihood(Family family, const FeatureView& x, std::span<const double> y, std::span<const double> beta,
                          bool intercept) {
  const MatrixXd z = design(x, intercept, nullptr);
  if (static_cast<std::size_t>(z.cols()) != beta.size() || y.size() != x.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "coefficient or response length");
  }
  return loglik(family, z * to_vector(beta), to_vector(y));
}

std::vector<double> glm_gradient(Family family, const FeatureView& x, std::span<const double> y,
                                 std::span<const double> beta, bool intercept) {
  const MatrixXd z = design(x, intercept, nullptr);
  if (static_cast<std::size_t>(z.cols()) != beta.size() || y.size() != x.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "coefficient or response length");
  }
  return to_std(gradient_of(family, z, z * to_vector(beta), to_vector(y)));
}

std::string summary_table(const GlmFit& f, std::span<const std::string> feature_names, std::string_view dependent) {
  std::vector<std::string> names(feature_names.begin(), feature_names.end());
  if (f.intercept && names.size() + 1 == f.coefficients.size()) names.insert(names.begin(), "const");
  if (names.size() != f.coefficients.size()) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("{} names for {} coefficients", feature_names.size(), f.coefficients.size()));
  }
  const std::string rule(78, '=');
  const std::string thin(78, '-');
  std::string title;
  std::string model;
  std::string family;
  std::string link;
  std::string method;
  switch (f.family) {
    case Family::gaussian_identity:
      title = "OLS Regression Results";
      model = "OLS";
      family = "Gaussian";
      link = "identity";
      method = "QR";
      break;
    case Family::bernoulli_logit:
      title = "Logit Regression Results";
      model = "Logit";
      family = "Binomial";
      link = "logit";
      method = "MLE";
      break;
    case Family::poisson_log:
      title = "Generalized Linear Model Regression Results";
      model = "GLM";
      family = "Poisson";
      link = "log";
      method = "IRLS";
      break;
  }

  using Item = std::pair<std::string, std::string>;
  std::vector<Item> left = {
      {"Dep. Variable:", std::string(dependent)},
      {"Model:", model},
      {"Model Family:", family},
      {"Link Function:", link},
      {"Method:", method},
      {"converged:", f.converged ? "True" : "False"},
      {"No. Iterations:", std::to_string(f.iterations)},
  };
  std::vector<Item> right = {
      {"No. Observations:", std::to_string(f.n_obs)},
      {"Df Residuals:", std::to_string(f.df_resid)},
      {"Df Model:", std::to_string(f.df_model)},
      {"Log-Likelihood:", num(f.log_likelihood)},
  };
  switch (f.family) {
    case Family::gaussian_identity:
      right.push_back({"R-squared:", num(f.r_squared)});
      right.push_back({"Deviance:", num(f.deviance)});
      right.push_back({"Scale:", num(f.scale)});
      break;
    case Family::bernoulli_logit:
      right.push_back({"LL-Null:", num(f.null_log_likelihood)});
      right.push_back({"Pseudo R-squ.:", num(f.mcfadden_pseudo_r2)});
      right.push_back({"LLR p-value:", pval(f.llr_p_value)});
      break;
    case Family::poisson_log:
      right.push_back({"Deviance:", num(f.deviance)});
      right.push_back({"Pearson chi2:", num(f.pearson_chi2)});
      right.push_back({"Scale:", num(f.scale)});
      break;
  }

  std::string out = fmt::format("{:^78}\n{}\n", title, rule);
  const std::size_t lines = std::max(left.size(), right.size());
  for (std::size_t i = 0; i < lines; ++i) {
    std::string l = i < left.size() ? fmt::format("{:<18}{:>20}", left[i].first, left[i].second) : std::string(38, ' ');
    std::string r = i < right.size() ? fmt::format("{:<20}{:>18}", right[i].first, right[i].second) : std::string();
    std::string line = l + "  " + r;
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  out += rule + '\n';
  std::size_t name_width = 16;
  for (const auto& n : names) name_width = std::max(name_width, n.size());
  out += fmt::format("{:<{}}{:>11}{:>11}{:>11}{:>9}{:>11}{:>11}\n", "", name_width, "coef", "std err", "z", "P>|z|",
                     "[0.025", "0.975]");
  out += thin + '\n';
  for (std::size_t i = 0; i < names.size(); ++i) {
    out += fmt::format("{:<{}}{:>11}{:>11}{:>11}{:>9}{:>11}{:>11}\n", names[i], name_width, num(f.coefficients[i]),
                       num(f.std_errors[i]), num(f.z_scores[i]), pval(f.p_values[i]), num(f.ci_lower[i]),
                       num(f.ci_upper[i]));
  }
  out += rule + '\n';
  return out;
}

}  // namespace otpml
