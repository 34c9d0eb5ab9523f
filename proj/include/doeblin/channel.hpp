#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "doeblin/pmf.hpp"

namespace doeblin {

/// Row-stochastic n x m matrix, stored dense and row-major.
/// Row i is the conditional PMF of the output given input i.
class Channel {
 public:
  Channel() = default;

  /// Validates every row like Pmf does (nonnegative, sum within 1e-9 of
  /// one) and renormalizes each row.
  explicit Channel(const std::vector<std::vector<double>>& rows,
                   std::vector<std::string> input_labels = {},
                   std::vector<std::string> output_labels = {});

  static Channel from_pmfs(const std::vector<Pmf>& rows);

  /// For results of internal arithmetic: rows must be within 1e-12 of
  /// stochastic (tiny negatives are clamped) and are renormalized.
  static Channel from_computed(std::size_t n, std::size_t m, std::vector<double> data);

  static Channel identity(std::size_t n);
  /// n x m channel with every row equal to p.
  static Channel constant(std::size_t n, const Pmf& p);
  /// Binary symmetric channel with crossover probability p.
  static Channel bsc(double p);
  /// q-ary symmetric channel: 1 - delta on the diagonal, delta/(q-1) elsewhere.
  static Channel q_ary_symmetric(std::size_t q, double delta);
  /// Erasure channel on n inputs: [(1-eps) I | eps 1], output n is the erasure.
  static Channel erasure(std::size_t n, double eps);

  std::size_t inputs() const noexcept { return n_; }
  std::size_t outputs() const noexcept { return m_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * m_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * m_, m_}; }
  Pmf row_pmf(std::size_t i) const;
  std::vector<Pmf> rows() const;
  std::span<const double> data() const noexcept { return data_; }

  const std::vector<std::string>& input_labels() const noexcept { return input_labels_; }
  const std::vector<std::string>& output_labels() const noexcept { return output_labels_; }

 private:
  std::size_t n_ = 0, m_ = 0;
  std::vector<double> data_;
  std::vector<std::string> input_labels_, output_labels_;
};

/// Matrix product V W (V is k x n, W is n x m).
Channel compose(const Channel& v, const Channel& w);

/// Kronecker product. With V of shape l x k, input pair (i, a) is row
/// i * l + a and output pair (j, b) is column j * k + b.
Channel tensor(const Channel& w, const Channel& v);

/// Convex combination lambda V + (1 - lambda) W of same-shape channels.
Channel mix(double lambda, const Channel& v, const Channel& w);

/// Transpose-free product of an input distribution with a channel.
Pmf output_distribution(const Pmf& input, const Channel& w);

}  // namespace doeblin
