#include "gsgdm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gsgdm {
namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// 1 / (1 + exp(-t)) without overflow.
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

constexpr double kPlSineSmoothness = 8.0;
constexpr double kPlGridHalfWidth = 10.0;
constexpr double kPlGridSpacing = 1e-3;
constexpr double kPlGapFloor = 1e-12;

}  // namespace

Vec Objective::batch_gradient(const Vec&, std::span<const std::size_t>) const {
  throw std::logic_error("objective has no per-sample structure");
}

QuadraticObjective::QuadraticObjective(std::vector<double> lambdas) {
  if (lambdas.empty()) throw std::invalid_argument("quadratic: need at least one eigenvalue");
  for (double lambda : lambdas) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("quadratic: eigenvalues must be positive and finite");
    }
  }
  lambdas_ = Eigen::Map<const Vec>(lambdas.data(), static_cast<Eigen::Index>(lambdas.size()));
}

double QuadraticObjective::value(const Vec& x) const {
  return 0.5 * (lambdas_.array() * x.array().square()).sum();
}

Vec QuadraticObjective::gradient(const Vec& x) const {
  return (lambdas_.array() * x.array()).matrix();
}

LogisticObjective::LogisticObjective(Eigen::MatrixXd features, Eigen::VectorXd labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() == 0 || features_.cols() == 0) {
    throw std::invalid_argument("logistic: empty dataset");
  }
  if (labels_.size() != features_.rows()) {
    throw std::invalid_argument("logistic: label count does not match sample count");
  }
  if (!features_.allFinite()) throw std::invalid_argument("logistic: non-finite feature");
  for (Eigen::Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 1.0 && labels_[i] != -1.0) {
      throw std::invalid_argument("logistic: labels must be -1 or +1 (sample " +
                                  std::to_string(i) + ")");
    }
  }
}

double LogisticObjective::value(const Vec& x) const {
  const Eigen::VectorXd margins = labels_.cwiseProduct(features_ * x);
  double total = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) total += softplus(-margins[i]);
  return total / static_cast<double>(margins.size());
}

Vec LogisticObjective::gradient(const Vec& x) const {
  const Eigen::VectorXd margins = labels_.cwiseProduct(features_ * x);
  Eigen::VectorXd weights(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    weights[i] = -labels_[i] * sigmoid(-margins[i]);
  }
  return features_.transpose() * weights / static_cast<double>(margins.size());
}

Vec LogisticObjective::batch_gradient(const Vec& x, std::span<const std::size_t> indices) const {
  if (indices.empty()) throw std::invalid_argument("logistic: empty minibatch");
  Vec g = Vec::Zero(features_.cols());
  for (std::size_t idx : indices) {
    const auto i = static_cast<Eigen::Index>(idx);
    const double margin = labels_[i] * features_.row(i).dot(x);
    g.noalias() += (-labels_[i] * sigmoid(-margin)) * features_.row(i).transpose();
  }
  return g / static_cast<double>(indices.size());
}

double PlSineObjective::value(const Vec& x) const {
  const double s = std::sin(x[0]);
  return x[0] * x[0] + 3.0 * s * s;
}

Vec PlSineObjective::gradient(const Vec& x) const {
  Vec g(1);
  g[0] = 2.0 * x[0] + 3.0 * std::sin(2.0 * x[0]);
  return g;
}

ProblemSpec quadratic(std::vector<double> lambdas) {
  auto objective = std::make_shared<QuadraticObjective>(std::move(lambdas));
  ProblemSpec spec;
  spec.kind = ProblemKind::kQuadratic;
  spec.L = objective->lambdas().maxCoeff();
  spec.mu = objective->lambdas().minCoeff();
  spec.f_star = 0.0;
  spec.x_star = Vec::Zero(objective->lambdas().size());
  spec.convex = true;
  spec.objective = std::move(objective);
  return spec;
}

ProblemSpec logistic(Eigen::MatrixXd features, Eigen::VectorXd labels) {
  ProblemSpec spec;
  spec.kind = ProblemKind::kLogistic;
  spec.objective = std::make_shared<LogisticObjective>(std::move(features), std::move(labels));
  spec.convex = true;
  spec.L = estimate_L(spec);
  return spec;
}

ProblemSpec pl_sine() {
  ProblemSpec spec;
  spec.kind = ProblemKind::kPlSine;
  spec.objective = std::make_shared<PlSineObjective>();
  spec.L = kPlSineSmoothness;
  spec.f_star = 0.0;
  spec.x_star = Vec::Zero(1);
  spec.convex = false;
  spec.mu = estimate_mu(spec);
  return spec;
}

LogisticData synthetic_logistic(std::size_t n, std::size_t d, RngStream& stream,
                                double flip_prob) {
  if (n == 0 || d == 0) throw std::invalid_argument("synthetic_logistic: n and d must be positive");
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(d);

  Vec planted(cols);
  do {
    stream.fill_gaussian(planted);
  } while (planted.norm() == 0.0);
  planted.normalize();

  LogisticData data{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
  Vec row(cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    do {
      stream.fill_gaussian(row);
    } while (row.norm() == 0.0);
    row.normalize();
    data.features.row(i) = row.transpose();
    double label = planted.dot(row) >= 0.0 ? 1.0 : -1.0;
    if (stream.uniform() < flip_prob) label = -label;
    data.labels[i] = label;
  }
  return data;
}

LogisticData read_logistic_dataset(std::istream& in) {
  std::vector<double> labels;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    double label = 0.0;
    if (!(fields >> label)) continue;  // blank line
    if (label == 0.0) label = -1.0;
    if (label != 1.0 && label != -1.0) {
      throw std::invalid_argument("dataset line " + std::to_string(line_no) +
                                  ": label must be -1, 0 or +1");
    }
    std::vector<double> row;
    double value = 0.0;
    while (fields >> value) row.push_back(value);
    if (!fields.eof()) {
      throw std::invalid_argument("dataset line " + std::to_string(line_no) + ": bad feature");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("dataset line " + std::to_string(line_no) +
                                  ": inconsistent feature count");
    }
    labels.push_back(label);
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("dataset: no samples");

  LogisticData data{Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()),
                                    static_cast<Eigen::Index>(rows.front().size())),
                    Eigen::VectorXd(static_cast<Eigen::Index>(rows.size()))};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    data.labels[r] = labels[i];
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      data.features(r, static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return data;
}

GradientSample sample_gradient(const ProblemSpec& problem, const NoiseModel& noise, const Vec& x,
                               RngStream& stream) {
  if (static_cast<std::size_t>(x.size()) != problem.dim()) {
    throw std::invalid_argument("sample_gradient: dimension mismatch");
  }
  GradientSample sample;
  switch (noise.kind) {
    case NoiseKind::kGaussianAdditive: {
      if (noise.sigma < 0.0) throw std::invalid_argument("sample_gradient: sigma must be >= 0");
      sample.g = problem.grad(x);
      if (noise.sigma > 0.0) {
        Vec eps(x.size());
        stream.fill_gaussian(eps, noise.sigma / std::sqrt(static_cast<double>(x.size())));
        sample.g += eps;
      }
      break;
    }
    case NoiseKind::kMinibatch: {
      const std::size_t n = problem.objective->sample_count();
      if (n == 0) {
        throw std::invalid_argument("sample_gradient: minibatch needs a finite-sum problem");
      }
      if (noise.batch == 0) throw std::invalid_argument("sample_gradient: batch size is zero");
      if (noise.batch >= n) {
        sample.g = problem.grad(x);
        break;
      }
      sample.indices.resize(noise.batch);
      for (auto& idx : sample.indices) idx = stream.index(n);
      sample.g = problem.objective->batch_gradient(x, sample.indices);
      break;
    }
  }
  return sample;
}

double power_iteration(const Eigen::MatrixXd& sym, double rel_tol, std::size_t max_iter) {
  if (sym.rows() == 0 || sym.rows() != sym.cols()) {
    throw std::invalid_argument("power_iteration: need a non-empty square matrix");
  }
  Vec v = Vec::Ones(sym.rows()).normalized();
  double estimate = v.dot(sym * v);
  for (std::size_t it = 0; it < max_iter; ++it) {
    Vec w = sym * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double next = v.dot(sym * v);
    if (std::abs(next - estimate) <= rel_tol * std::abs(next)) return next;
    estimate = next;
  }
  throw std::runtime_error("power_iteration: no convergence within iteration cap");
}

double estimate_L(const ProblemSpec& problem) {
  switch (problem.kind) {
    case ProblemKind::kQuadratic: {
      const auto& q = dynamic_cast<const QuadraticObjective&>(*problem.objective);
      return q.lambdas().maxCoeff();
    }
    case ProblemKind::kLogistic: {
      const auto& lg = dynamic_cast<const LogisticObjective&>(*problem.objective);
      const Eigen::MatrixXd gram = lg.features().transpose() * lg.features();
      return power_iteration(gram) / (4.0 * static_cast<double>(lg.sample_count()));
    }
    case ProblemKind::kPlSine:
      return kPlSineSmoothness;
  }
  throw std::logic_error("estimate_L: unknown problem kind");
}

double estimate_mu(const ProblemSpec& problem) {
  if (!problem.f_star) throw std::invalid_argument("estimate_mu: f* is unknown");
  switch (problem.kind) {
    case ProblemKind::kQuadratic: {
      const auto& q = dynamic_cast<const QuadraticObjective&>(*problem.objective);
      return q.lambdas().minCoeff();
    }
    case ProblemKind::kPlSine: {
      const double f_star = *problem.f_star;
      const auto steps = static_cast<long>(std::lround(2.0 * kPlGridHalfWidth / kPlGridSpacing));
      double best = std::numeric_limits<double>::infinity();
      Vec x(1);
      for (long i = 0; i <= steps; ++i) {
        x[0] = -kPlGridHalfWidth + static_cast<double>(i) * kPlGridSpacing;
        const double gap = problem.eval(x) - f_star;
        if (gap < kPlGapFloor) continue;
        best = std::min(best, problem.grad(x).squaredNorm() / (2.0 * gap));
      }
      return best;
    }
    case ProblemKind::kLogistic:
      throw std::invalid_argument("estimate_mu: no PL grid defined for logistic problems");
  }
  throw std::logic_error("estimate_mu: unknown problem kind");
}

}  // namespace gsgdm
