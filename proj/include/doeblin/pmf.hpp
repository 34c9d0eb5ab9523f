#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace doeblin {

/// Probability mass function on the finite alphabet {0, ..., m-1}.
///
/// The validating constructor rejects negative entries and sums further
/// than tol::kInput from one, then divides by the sum so the stored
/// vector is normalized to working precision. Labels are cosmetic.
class Pmf {
 public:
  Pmf() = default;
  explicit Pmf(std::vector<double> probs, std::vector<std::string> labels = {});

  /// Builds a PMF from nonnegative weights of arbitrary total mass.
  /// Entries in [-1e-12, 0) are treated as rounding noise and clamped.
  /// Throws ValidationError when the total mass is zero.
  static Pmf from_weights(std::vector<double> weights);

  static Pmf uniform(std::size_t m);
  static Pmf point_mass(std::size_t m, std::size_t symbol);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  struct Trusted {};
  Pmf(Trusted, std::vector<double> probs) : probs_(std::move(probs)) {}

  std::vector<double> probs_;
  std::vector<std::string> labels_;
};

/// Total variation distance, half the l1 distance.
double total_variation(const Pmf& p, const Pmf& q);

/// Entrywise maximum absolute difference.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace doeblin
