#pragma once

// Marching squares over a boolean field sampled on a rectilinear grid.
// Edge crossings are located by bisecting the membership predicate along the
// edge, so their accuracy is set by `tol`, not by the grid spacing.

#include <functional>
#include <span>
#include <vector>

namespace bhcav {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

using Polyline = std::vector<Point>;

using Membership = std::function<bool(double x, double y)>;

// `inside` is row-major with ys.size() rows of xs.size() entries and must
// equal member(xs[i], ys[j]) at every node. Open chains start and end on the
// grid border; closed loops repeat their first point at the end.
std::vector<Polyline> trace_boundaries(std::span<const double> xs, std::span<const double> ys,
                                       const std::vector<char>& inside, const Membership& member,
                                       double tol = 1e-6);

}  // namespace bhcav
