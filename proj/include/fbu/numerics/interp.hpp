#ifndef FBU_NUMERICS_INTERP_HPP
#define FBU_NUMERICS_INTERP_HPP

#include <cstdint>
#include <vector>

namespace fbu {

/// Four-point (piecewise-cubic Lagrange) interpolation stencil on a sorted,
/// strictly increasing node array. Targets outside [nodes.front(),
/// nodes.back()] get start = -1 and must be treated as zero (bound states
/// decay at infinity).
struct CubicStencil {
  std::int32_t start = -1;
  double w[4] = {0, 0, 0, 0};
};

CubicStencil cubic_stencil(const std::vector<double>& nodes, double q);

/// Interpolated value of (nodes, values) at q; zero outside the node range.
double interp_cubic(const std::vector<double>& nodes,
                    const std::vector<double>& values, double q);

}  // namespace fbu

#endif
