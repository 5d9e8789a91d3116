#include "support/synthetic.hpp"

#include <cmath>
#include <vector>

#include "qosrec/rng.hpp"

namespace qosrec::testing {

namespace {

// Box-Muller on the library Rng keeps the generator seed-stable.
double gaussian(Rng& rng) {
  double u1 = rng.uniform();
  while (u1 <= 0.0) u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

QosMatrix synthetic_wsdream(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  const double per_factor =
      spec.rank > 0 ? spec.factor_sigma / std::sqrt(static_cast<double>(spec.rank)) : 0.0;

  std::vector<double> user_effect(spec.users), service_effect(spec.services);
  for (auto& v : user_effect) v = spec.user_sigma * gaussian(rng);
  for (auto& v : service_effect) v = spec.service_sigma * gaussian(rng);

  std::vector<double> x(spec.users * spec.rank), y(spec.services * spec.rank);
  for (auto& v : x) v = per_factor * gaussian(rng);
  for (auto& v : y) v = per_factor * gaussian(rng);

  QosMatrix m(spec.users, spec.services);
  for (std::size_t u = 0; u < spec.users; ++u) {
    for (std::size_t s = 0; s < spec.services; ++s) {
      const bool seen = rng.uniform() < spec.observe_rate;
      double interaction = 0.0;
      for (std::size_t f = 0; f < spec.rank; ++f) {
        interaction += x[u * spec.rank + f] * y[s * spec.rank + f];
      }
      const double noise = spec.noise_sigma * gaussian(rng);
      if (!seen) continue;
      double q = std::exp(spec.base_log + user_effect[u] + service_effect[s] + interaction + noise);
      if (q > spec.max_value) q = spec.max_value;
      if (q <= 0.0) continue;  // cannot happen with exp, kept as a guard
      m.set(u, s, q);
    }
  }
  return m;
}

}  // namespace qosrec::testing
