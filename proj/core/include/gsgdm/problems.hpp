#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gsgdm/rng.hpp"
#include "gsgdm/types.hpp"

namespace gsgdm {

enum class ProblemKind { kQuadratic, kLogistic, kPlSine };

/// A differentiable objective with an exact gradient.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual Vec gradient(const Vec& x) const = 0;

  /// Number of samples in a finite-sum objective, 0 when there is no
  /// per-sample structure.
  virtual std::size_t sample_count() const { return 0; }

  /// Average of per-sample gradients over `indices` (repeats allowed).
  virtual Vec batch_gradient(const Vec& x, std::span<const std::size_t> indices) const;
};

/// f(x) = 1/2 sum_i lambda_i x_i^2.
class QuadraticObjective final : public Objective {
 public:
  explicit QuadraticObjective(std::vector<double> lambdas);

  std::size_t dim() const override { return static_cast<std::size_t>(lambdas_.size()); }
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;

  const Vec& lambdas() const { return lambdas_; }

 private:
  Vec lambdas_;
};

/// f(x) = (1/n) sum_i log(1 + exp(-b_i <x, a_i>)) with b_i in {-1, +1}.
class LogisticObjective final : public Objective {
 public:
  LogisticObjective(Eigen::MatrixXd features, Eigen::VectorXd labels);

  std::size_t dim() const override { return static_cast<std::size_t>(features_.cols()); }
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  std::size_t sample_count() const override { return static_cast<std::size_t>(features_.rows()); }
  Vec batch_gradient(const Vec& x, std::span<const std::size_t> indices) const override;

  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXd& labels() const { return labels_; }

 private:
  Eigen::MatrixXd features_;
  Eigen::VectorXd labels_;
};

/// f(x) = x^2 + 3 sin^2 x: nonconvex, satisfies the PL inequality.
class PlSineObjective final : public Objective {
 public:
  std::size_t dim() const override { return 1; }
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::kQuadratic;
  std::shared_ptr<const Objective> objective;
  double L = 0.0;
  std::optional<double> mu;
  std::optional<double> f_star;
  std::optional<Vec> x_star;
  bool convex = true;

  std::size_t dim() const { return objective->dim(); }
  double eval(const Vec& x) const { return objective->value(x); }
  Vec grad(const Vec& x) const { return objective->gradient(x); }
};

ProblemSpec quadratic(std::vector<double> lambdas);
ProblemSpec logistic(Eigen::MatrixXd features, Eigen::VectorXd labels);
ProblemSpec pl_sine();

struct LogisticData {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;
};

/// n rows drawn i.i.d. standard normal and scaled to unit l2 norm; labels are
/// sign(<w, a>) for a planted unit direction w, each flipped with probability
/// `flip_prob`.
LogisticData synthetic_logistic(std::size_t n, std::size_t d, RngStream& stream,
                                double flip_prob = 0.1);

/// Whitespace-separated "label f1 ... fd", one sample per line. Label 0 is
/// read as -1; anything other than 0, -1, +1 is rejected.
LogisticData read_logistic_dataset(std::istream& in);

enum class NoiseKind { kGaussianAdditive, kMinibatch };

struct NoiseModel {
  NoiseKind kind = NoiseKind::kGaussianAdditive;
  double sigma = 0.0;       // gaussian_additive: E|g - grad f|^2 = sigma^2
  std::size_t batch = 0;    // minibatch: indices drawn per step, with replacement
};

struct GradientSample {
  Vec g;
  std::vector<std::size_t> indices;  // minibatch provenance, empty otherwise
};

/// Draw g with E[g] = grad f(x). Gaussian noise adds N(0, sigma^2/d) per
/// coordinate (nothing is drawn when sigma == 0). A minibatch at least as large
/// as the dataset returns the exact gradient.
GradientSample sample_gradient(const ProblemSpec& problem, const NoiseModel& noise, const Vec& x,
                               RngStream& stream);

/// Smoothness constant from the problem structure; logistic uses power
/// iteration on A^T A (relative tolerance 1e-8, at most 1e4 iterations).
double estimate_L(const ProblemSpec& problem);

/// Grid estimate of the PL constant inf |grad f|^2 / (2 (f - f*)).
double estimate_mu(const ProblemSpec& problem);

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power
/// iteration; throws std::runtime_error when it does not converge.
double power_iteration(const Eigen::MatrixXd& sym, double rel_tol = 1e-8,
                       std::size_t max_iter = 10000);

}  // namespace gsgdm
