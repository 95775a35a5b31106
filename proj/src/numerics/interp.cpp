#include "fbu/numerics/interp.hpp"

#include <algorithm>

namespace fbu {

CubicStencil cubic_stencil(const std::vector<double>& nodes, double q) {
  CubicStencil s;
  const std::size_t n = nodes.size();
  if (n < 4 || q < nodes.front() || q > nodes.back()) return s;
  // cell index j with nodes[j] <= q
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), q);
  std::int64_t j = static_cast<std::int64_t>(it - nodes.begin()) - 1;
  std::int64_t st = std::clamp<std::int64_t>(j - 1, 0, static_cast<std::int64_t>(n) - 4);
  s.start = static_cast<std::int32_t>(st);
  const double* x = nodes.data() + st;
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) w *= (q - x[b]) / (x[a] - x[b]);
    s.w[a] = w;
  }
  return s;
}

double interp_cubic(const std::vector<double>& nodes,
                    const std::vector<double>& values, double q) {
  const CubicStencil s = cubic_stencil(nodes, q);
  if (s.start < 0) return 0.0;
  const double* v = values.data() + s.start;
  return s.w[0] * v[0] + s.w[1] * v[1] + s.w[2] * v[2] + s.w[3] * v[3];
}

}  // namespace fbu
