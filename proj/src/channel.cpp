#include "doeblin/channel.hpp"

#include <cmath>
#include <sstream>

#include "doeblin/error.hpp"

namespace doeblin {

Channel::Channel(const std::vector<std::vector<double>>& rows,
                 std::vector<std::string> input_labels,
                 std::vector<std::string> output_labels)
    : input_labels_(std::move(input_labels)), output_labels_(std::move(output_labels)) {
  if (rows.empty()) throw ValidationError("channel: needs at least one row");
  n_ = rows.size();
  m_ = rows.front().size();
  if (m_ == 0) throw ValidationError("channel: output alphabet must be nonempty");
  data_.reserve(n_ * m_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (rows[i].size() != m_) {
      std::ostringstream os;
      os << "channel: row " << i << " has " << rows[i].size() << " entries, expected " << m_;
      throw ValidationError(os.str());
    }
    try {
      Pmf p(rows[i]);
      data_.insert(data_.end(), p.probs().begin(), p.probs().end());
    } catch (const ValidationError& e) {
      std::ostringstream os;
      os << "channel row " << i << ": " << e.what();
      throw ValidationError(os.str());
    }
  }
  if (!input_labels_.empty() && input_labels_.size() != n_)
    throw ValidationError("channel: input label count does not match row count");
  if (!output_labels_.empty() && output_labels_.size() != m_)
    throw ValidationError("channel: output label count does not match column count");
}

Channel Channel::from_pmfs(const std::vector<Pmf>& rows) {
  if (rows.empty()) throw ValidationError("channel: needs at least one row");
  Channel c;
  c.n_ = rows.size();
  c.m_ = rows.front().size();
  for (const auto& p : rows) {
    if (p.size() != c.m_) throw ValidationError("channel: PMFs have different alphabet sizes");
    c.data_.insert(c.data_.end(), p.probs().begin(), p.probs().end());
  }
  return c;
}

Channel Channel::from_computed(std::size_t n, std::size_t m, std::vector<double> data) {
  if (n == 0 || m == 0 || data.size() != n * m) throw ValidationError("channel: bad shape");
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double& x = data[i * m + j];
      if (!(x >= -1e-12)) throw ValidationError("channel: computed entry is negative");
      if (x < 0.0) x = 0.0;
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-12 * static_cast<double>(m) + 1e-12)
      throw ValidationError("channel: computed row is not stochastic");
    for (std::size_t j = 0; j < m; ++j) data[i * m + j] /= s;
  }
  Channel c;
  c.n_ = n;
  c.m_ = m;
  c.data_ = std::move(data);
  return c;
}

Channel Channel::identity(std::size_t n) {
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
  return from_computed(n, n, std::move(d));
}

Channel Channel::constant(std::size_t n, const Pmf& p) {
  return from_pmfs(std::vector<Pmf>(n, p));
}

Channel Channel::bsc(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("bsc: crossover outside [0,1]");
  return Channel({{1.0 - p, p}, {p, 1.0 - p}});
}

Channel Channel::q_ary_symmetric(std::size_t q, double delta) {
  if (q < 2) throw ValidationError("q-ary symmetric channel needs q >= 2");
  if (!(delta >= 0.0 && delta <= 1.0)) throw ValidationError("q-ary symmetric: delta outside [0,1]");
  std::vector<std::vector<double>> rows(q, std::vector<double>(q, delta / static_cast<double>(q - 1)));
  for (std::size_t i = 0; i < q; ++i) rows[i][i] = 1.0 - delta;
  return Channel(rows);
}

Channel Channel::erasure(std::size_t n, double eps) {
  if (n == 0) throw ValidationError("erasure channel needs n >= 1");
  if (!(eps >= 0.0 && eps <= 1.0)) throw ValidationError("erasure probability outside [0,1]");
  std::vector<double> d(n * (n + 1), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    d[i * (n + 1) + i] = 1.0 - eps;
    d[i * (n + 1) + n] = eps;
  }
  return from_computed(n, n + 1, std::move(d));
}

Pmf Channel::row_pmf(std::size_t i) const {
  return Pmf::from_weights(std::vector<double>(row(i).begin(), row(i).end()));
}

std::vector<Pmf> Channel::rows() const {
  std::vector<Pmf> out;
  out.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) out.push_back(row_pmf(i));
  return out;
}

Channel compose(const Channel& v, const Channel& w) {
  if (v.outputs() != w.inputs()) {
    std::ostringstream os;
    os << "compose: inner dimensions differ (" << v.outputs() << " vs " << w.inputs() << ")";
    throw ValidationError(os.str());
  }
  const std::size_t k = v.inputs(), n = w.inputs(), m = w.outputs();
  std::vector<double> d(k * m, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double x = v(a, b);
      if (x == 0.0) continue;
      for (std::size_t c = 0; c < m; ++c) d[a * m + c] += x * w(b, c);
    }
  return Channel::from_computed(k, m, std::move(d));
}

Channel tensor(const Channel& w, const Channel& v) {
  const std::size_t n = w.inputs(), m = w.outputs(), l = v.inputs(), k = v.outputs();
  std::vector<double> d(n * l * m * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t b = 0; b < k; ++b)
          d[(i * l + a) * (m * k) + j * k + b] = w(i, j) * v(a, b);
  return Channel::from_computed(n * l, m * k, std::move(d));
}

Channel mix(double lambda, const Channel& v, const Channel& w) {
  if (v.inputs() != w.inputs() || v.outputs() != w.outputs())
    throw ValidationError("mix: channel shapes differ");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("mix: weight outside [0,1]");
  std::vector<double> d(v.data().size());
  for (std::size_t t = 0; t < d.size(); ++t) d[t] = lambda * v.data()[t] + (1.0 - lambda) * w.data()[t];
  return Channel::from_computed(v.inputs(), v.outputs(), std::move(d));
}

Pmf output_distribution(const Pmf& input, const Channel& w) {
  if (input.size() != w.inputs()) throw ValidationError("output_distribution: size mismatch");
  std::vector<double> out(w.outputs(), 0.0);
  for (std::size_t i = 0; i < w.inputs(); ++i)
    for (std::size_t j = 0; j < w.outputs(); ++j) out[j] += input[i] * w(i, j);
  return Pmf::from_weights(std::move(out));
}

}  // namespace doeblin
