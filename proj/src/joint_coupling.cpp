#include <algorithm>
#include <sstream>

#include "doeblin/coupling.hpp"
#include "doeblin/error.hpp"
#include "doeblin/kernels.hpp"

namespace doeblin {

JointCoupling simultaneous_joint_coupling(const std::vector<JointPmf>& joints, std::size_t cap) {
  if (joints.size() < 2) throw ValidationError("joint coupling needs at least two joint distributions");
  const std::size_t n = joints.size(), nx = joints.front().nx, ny = joints.front().ny;
  for (const auto& j : joints)
    if (j.nx != nx || j.ny != ny) throw ValidationError("joint coupling: X or Y alphabets differ");
  const std::size_t k = nx * ny;
  if (cap == 0) cap = expansion_cap();
  if (table_size(k, n) > cap) {
    std::ostringstream os;
    os << "joint coupling: (|X||Y|)^n exceeds expansion cap of " << cap;
    throw CapExceededError(os.str());
  }

  // pmin(x, y): pointwise min of the joints; xmin(x): pointwise min of X-marginals.
  std::vector<double> pmin(k, 1.0), xmin(nx, 1.0), row_pmin(nx, 0.0);
  std::vector<std::vector<double>> xm(n);
  for (std::size_t i = 0; i < n; ++i) {
    xm[i] = joints[i].x_marginal();
    for (std::size_t t = 0; t < k; ++t) pmin[t] = std::min(pmin[t], joints[i].flat[t]);
    for (std::size_t x = 0; x < nx; ++x) xmin[x] = std::min(xmin[x], xm[i][x]);
  }
  double c_xy = 0.0, c_x = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) row_pmin[x] += pmin[x * ny + y];
    c_xy += row_pmin[x];
    c_x += xmin[x];
  }

  JointCoupling jc;
  jc.arity = n;
  jc.nx = nx;
  jc.ny = ny;
  jc.trivial = c_x - c_xy <= 1e-12;
  jc.w_diagonal = c_xy;
  jc.w_x_glued = jc.trivial ? 0.0 : c_x - c_xy;
  jc.w_product = 1.0 - c_x;

  // glue_x(x): mass of the x-glued part at x. resid_i(x, y): residual of
  // joint i above the pointwise min; den_i(x) its row sum.
  std::vector<double> glue_x(nx, 0.0);
  if (!jc.trivial)
    for (std::size_t x = 0; x < nx; ++x) glue_x[x] = std::max(0.0, xmin[x] - row_pmin[x]);
  std::vector<std::vector<double>> cond(n, std::vector<double>(k, 0.0));
  std::vector<std::vector<double>> xfree(n, std::vector<double>(nx, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t x = 0; x < nx; ++x) {
      double den = 0.0;
      for (std::size_t y = 0; y < ny; ++y) den += joints[i](x, y) - pmin[x * ny + y];
      if (den > 0.0)
        for (std::size_t y = 0; y < ny; ++y)
          cond[i][x * ny + y] = std::max(0.0, joints[i](x, y) - pmin[x * ny + y]) / den;
      xfree[i][x] = std::max(0.0, xm[i][x] - xmin[x]);
    }
  // The product part has weight 1 - c_x; each coordinate's x-factor is
  // its excess over xmin, normalized by its own sum.
  const bool has_product = jc.w_product > 1e-14;
  if (has_product)
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (double v : xfree[i]) s += v;
      for (double& v : xfree[i]) v = s > 0.0 ? v / s : 0.0;
    }

  const std::size_t total = table_size(k, n);
  std::vector<double> dense(total, 0.0);
  std::vector<std::size_t> t(n);
  for (std::size_t key = 0; key < total; ++key) {
    std::size_t rem = key;
    for (std::size_t i = n; i-- > 0;) {
      t[i] = rem % k;
      rem /= k;
    }
    const std::size_t x0 = t[0] / ny;
    bool same_pair = true, same_x = true;
    for (std::size_t i = 1; i < n; ++i) {
      same_pair = same_pair && t[i] == t[0];
      same_x = same_x && t[i] / ny == x0;
    }
    double mass = 0.0;
    if (same_pair) mass += pmin[t[0]];
    if (same_x && glue_x[x0] > 0.0) {
      double g = glue_x[x0];
      for (std::size_t i = 0; i < n && g > 0.0; ++i) g *= cond[i][t[i]];
      mass += g;
    }
    if (has_product) {
      double p = jc.w_product;
      for (std::size_t i = 0; i < n && p > 0.0; ++i) p *= xfree[i][t[i] / ny] * cond[i][t[i]];
      mass += p;
    }
    dense[key] = mass;
  }
  for (std::size_t key = 0; key < total; ++key)
    if (dense[key] > 0.0) jc.table.emplace_back(key, dense[key]);
  return jc;
}

}  // namespace doeblin
