#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otpml/matrix.hpp"

namespace otpml {

enum class Family { gaussian_identity, bernoulli_logit, poisson_log };

std::string_view family_name(Family f) noexcept;

struct GlmOptions {
  double tolerance = 1e-8;  // on the gradient inf-norm, standardized scale
  std::size_t max_iterations = 100;
  std::size_t max_halvings = 20;
};

/// A fitted linear model. Coefficients are on the caller's feature scale
/// (intercept first when present); the optimisation itself runs on
/// standardized columns.
struct GlmFit {
  Family family = Family::gaussian_identity;
  bool intercept = true;
  std::size_t n_obs = 0;
  std::size_t df_model = 0;
  std::size_t df_resid = 0;

  std::vector<double> coefficients;
  std::vector<double> std_errors;
  std::vector<double> z_scores;
  std::vector<double> p_values;
  std::vector<double> ci_lower;  // 95%
  std::vector<double> ci_upper;
  /// Slopes per standard deviation of each feature (no intercept entry).
  std::vector<double> standardized_slopes;

  double log_likelihood = 0.0;
  double null_log_likelihood = 0.0;
  double mcfadden_pseudo_r2 = 0.0;  // NaN for the gaussian family
  double r_squared = 0.0;           // gaussian only, NaN otherwise
  double llr_p_value = 0.0;
  double deviance = 0.0;
  double pearson_chi2 = 0.0;
  double scale = 1.0;

  std::size_t iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  /// Deviance after each iteration (IRLS families).
  std::vector<double> deviance_trace;

  std::size_t n_features() const noexcept { return coefficients.size() - (intercept ? 1 : 0); }
};

/// Least squares via Householder QR. Errors: ShapeMismatch, TooFewRows,
/// RankDeficient.
GlmFit fit_ols(const FeatureView& x, std::span<const double> y, bool intercept = true);

/// Bernoulli-logit maximum likelihood by Newton-Raphson with step halving.
/// A run that exhausts its iterations is returned with converged = false.
/// Errors: ShapeMismatch, TooFewRows, LabelOutOfRange, SingleClassInput,
/// SingularHessian (including perfect separation).
GlmFit fit_logistic(const FeatureView& x, std::span<const double> y, bool intercept = true,
                    const GlmOptions& opts = {});

/// Poisson-log GLM by IRLS. Errors: ShapeMismatch, TooFewRows,
/// NegativeResponse, SingularHessian.
GlmFit fit_poisson(const FeatureView& x, std::span<const double> y, bool intercept = true,
                   const GlmOptions& opts = {});

/// Mean response: identity, logistic sigmoid or exp of the linear predictor.
double predict_glm(const GlmFit& f, std::span<const double> row);
std::vector<double> predict_glm(const GlmFit& f, const FeatureView& x);

/// Fixed-width report: header block, then coef / std err / z / P>|z| / 95% CI
/// per coefficient. `names` lists the features; the intercept row is labelled
/// "const" (a full per-coefficient list is also accepted).
std::string summary_table(const GlmFit& f, std::span<const std::string> names, std::string_view dependent = "y");

/// Log-likelihood of `beta` on the raw design (intercept column prepended
/// when `intercept`). Gaussian uses the variance-concentrated form
/// -n/2 (ln(2 pi RSS / n) + 1).
double glm_log_likelihood(Family family, const FeatureView& x, std::span<const double> y,
                          std::span<const double> beta, bool intercept);

/// Analytic gradient of glm_log_likelihood with respect to beta.
std::vector<double> glm_gradient(Family family, const FeatureView& x, std::span<const double> y,
                                 std::span<const double> beta, bool intercept);

/// 2 * (1 - Phi(|z|)).
double normal_two_sided_p(double z);

/// Upper tail of the chi-square distribution.
double chi2_survival(double x, double df);

}  // namespace otpml
