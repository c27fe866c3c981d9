#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "gsgdm/problems.hpp"
#include "gsgdm/schedules.hpp"
#include "gsgdm/types.hpp"

namespace gsgdm {

enum class Method { kSgd, kHb, kNag, kNagClassic, kSum, kQhm, kMass, kGsgdm };

std::string_view method_name(Method m);
/// Throws std::invalid_argument for an unknown name.
Method parse_method(std::string_view name);

/// Native parameters; each method reads its own subset.
///   sgd: gamma          hb: beta, eta           nag: beta, eta (gamma derived)
///   nag-classic: gamma  sum: alpha, beta, s     qhm: alpha, beta, nu
///   mass: alpha, beta, lambda                   gsgdm: beta, gamma, eta
struct NativeParams {
  Method method = Method::kGsgdm;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  double s = 0.0;
  double nu = 0.0;
  double lambda = 0.0;
};

/// (beta, gamma, eta) for the constant-parameter methods. Throws
/// std::invalid_argument when the native parameters are out of range
/// (nag needs beta > 0 and eta > 0; sum needs s in [0, 1/(1-beta)]; qhm needs
/// nu in [0, 1]; alpha, lambda > 0) or the method is nag-classic.
ConstantSchedule map_to_constant(const NativeParams& p);

/// Schedule for any method; nag-classic is materialized for `horizon`.
Schedule map_to_gsgdm(const NativeParams& p, std::size_t horizon);

/// State of a native recursion. x_prev (hb), y (nag, nag-classic, mass),
/// z (sum) and m (qhm, gsgdm) start so that the first native step equals the
/// first G-SGDM step: x_0 = x_1, y_1 = z_1 = x_1, m_0 = 0.
struct VariantState {
  Method method = Method::kGsgdm;
  std::size_t k = 1;
  Vec x;
  Vec x_prev;
  Vec y;
  Vec z;
  Vec m;
};

VariantState init_variant(const NativeParams& p, const Vec& x1);

/// One step of the method's own recursion.
void variant_step(VariantState& state, const NativeParams& p, const Vec& g);

struct TwinResult {
  double max_deviation = 0.0;  // max_k |x_k^G - x_k^V|
  double max_norm = 0.0;       // max_k max(|x_k^G|, |x_k^V|)
};

/// Run G-SGDM under map_to_gsgdm and the native recursion side by side for
/// `steps` steps, each drawing its gradients from its own copy of one stream.
TwinResult twin_run(const ProblemSpec& problem, const NoiseModel& noise, const NativeParams& p,
                    const Vec& x1, std::size_t steps, std::uint64_t stream_seed);

}  // namespace gsgdm
