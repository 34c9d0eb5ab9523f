#include "doeblin/pmf.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "doeblin/error.hpp"

namespace doeblin {

Pmf::Pmf(std::vector<double> probs, std::vector<std::string> labels)
    : probs_(std::move(probs)), labels_(std::move(labels)) {
  if (probs_.empty()) throw ValidationError("pmf: alphabet must be nonempty");
  if (!labels_.empty() && labels_.size() != probs_.size())
    throw ValidationError("pmf: label count does not match alphabet size");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p)) throw ValidationError("pmf: non-finite entry");
    if (p < 0.0) {
      std::ostringstream os;
      os << "pmf: negative entry " << p << " at index " << i;
      throw ValidationError(os.str());
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol::kInput) {
    std::ostringstream os;
    os.precision(17);
    os << "pmf: entries sum to " << sum << ", not 1 within " << tol::kInput;
    throw ValidationError(os.str());
  }
  for (double& p : probs_) p /= sum;
}

Pmf Pmf::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw ValidationError("pmf: alphabet must be nonempty");
  double sum = 0.0;
  for (double& w : weights) {
    if (!std::isfinite(w) || w < -1e-12) throw ValidationError("pmf: invalid weight");
    if (w < 0.0) w = 0.0;
    sum += w;
  }
  if (!(sum > 0.0)) throw ValidationError("pmf: weights have zero total mass");
  for (double& w : weights) w /= sum;
  return Pmf(Trusted{}, std::move(weights));
}

Pmf Pmf::uniform(std::size_t m) {
  if (m == 0) throw ValidationError("pmf: alphabet must be nonempty");
  return Pmf(Trusted{}, std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

Pmf Pmf::point_mass(std::size_t m, std::size_t symbol) {
  if (symbol >= m) throw ValidationError("pmf: point mass outside alphabet");
  std::vector<double> p(m, 0.0);
  p[symbol] = 1.0;
  return Pmf(Trusted{}, std::move(p));
}

double total_variation(const Pmf& p, const Pmf& q) {
  if (p.size() != q.size()) throw ValidationError("total_variation: alphabet mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("max_abs_diff: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace doeblin
