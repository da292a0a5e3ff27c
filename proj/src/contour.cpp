#include "bhcav/contour.hpp"

#include <array>
#include <stdexcept>
#include <unordered_map>

namespace bhcav {

namespace {

struct Segment {
    long a;
    long b;
};

class EdgeGrid {
public:
    EdgeGrid(std::span<const double> xs, std::span<const double> ys, const std::vector<char>& inside,
             const Membership& member, double tol)
        : xs_(xs), ys_(ys), inside_(inside), member_(member), tol_(tol),
          nx_(static_cast<long>(xs.size())), ny_(static_cast<long>(ys.size())),
          horizontal_count_((nx_ - 1) * ny_) {}

    long horizontal(long i, long j) const { return j * (nx_ - 1) + i; }
    long vertical(long i, long j) const { return horizontal_count_ + j * nx_ + i; }
    long edge_count() const { return horizontal_count_ + nx_ * (ny_ - 1); }

    bool at(long i, long j) const { return inside_[j * nx_ + i] != 0; }

    const Point& crossing(long edge) {
        auto it = cache_.find(edge);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(edge, locate(edge)).first->second;
    }

private:
    Point locate(long edge) const {
        if (edge < horizontal_count_) {
            const long j = edge / (nx_ - 1);
            const long i = edge % (nx_ - 1);
            const double y = ys_[j];
            double lo = xs_[i];
            double hi = xs_[i + 1];
            const bool state_lo = at(i, j);
            while (hi - lo > tol_) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                (member_(mid, y) == state_lo ? lo : hi) = mid;
            }
            return {0.5 * (lo + hi), y};
        }
        const long k = edge - horizontal_count_;
        const long j = k / nx_;
        const long i = k % nx_;
        const double x = xs_[i];
        double lo = ys_[j];
        double hi = ys_[j + 1];
        const bool state_lo = at(i, j);
        while (hi - lo > tol_) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (member_(x, mid) == state_lo ? lo : hi) = mid;
        }
        return {x, 0.5 * (lo + hi)};
    }

    std::span<const double> xs_;
    std::span<const double> ys_;
    const std::vector<char>& inside_;
    const Membership& member_;
    double tol_;
    long nx_;
    long ny_;
    long horizontal_count_;
    std::unordered_map<long, Point> cache_;
};

}  // namespace

std::vector<Polyline> trace_boundaries(std::span<const double> xs, std::span<const double> ys,
                                       const std::vector<char>& inside, const Membership& member,
                                       double tol) {
    if (xs.size() < 2 || ys.size() < 2) throw std::invalid_argument("trace_boundaries: grid < 2x2");
    if (inside.size() != xs.size() * ys.size())
        throw std::invalid_argument("trace_boundaries: field size mismatch");

    EdgeGrid grid(xs, ys, inside, member, tol);
    const long nx = static_cast<long>(xs.size());
    const long ny = static_cast<long>(ys.size());

    std::vector<Segment> segments;
    for (long j = 0; j + 1 < ny; ++j) {
        for (long i = 0; i + 1 < nx; ++i) {
            const bool bl = grid.at(i, j);
            const bool br = grid.at(i + 1, j);
            const bool tr = grid.at(i + 1, j + 1);
            const bool tl = grid.at(i, j + 1);
            const long bottom = grid.horizontal(i, j);
            const long top = grid.horizontal(i, j + 1);
            const long left = grid.vertical(i, j);
            const long right = grid.vertical(i + 1, j);

            std::vector<long> cut;
            if (bl != br) cut.push_back(bottom);
            if (br != tr) cut.push_back(right);
            if (tr != tl) cut.push_back(top);
            if (tl != bl) cut.push_back(left);

            if (cut.size() == 2) {
                segments.push_back({cut[0], cut[1]});
            } else if (cut.size() == 4) {
                // Saddle: the centre decides whether bl and tr are joined.
                const bool centre = member(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
                if (centre == bl) {
                    segments.push_back({bottom, right});
                    segments.push_back({top, left});
                } else {
                    segments.push_back({bottom, left});
                    segments.push_back({top, right});
                }
            }
        }
    }

    std::vector<std::array<int, 2>> incident(static_cast<std::size_t>(grid.edge_count()),
                                             std::array<int, 2>{-1, -1});
    auto attach = [&](long edge, int seg) {
        auto& slot = incident[static_cast<std::size_t>(edge)];
        (slot[0] < 0 ? slot[0] : slot[1]) = seg;
    };
    for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
        attach(segments[s].a, s);
        attach(segments[s].b, s);
    }

    std::vector<char> used(segments.size(), 0);
    std::vector<Polyline> out;

    auto walk = [&](long start) {
        Polyline line;
        long edge = start;
        line.push_back(grid.crossing(edge));
        for (;;) {
            const auto& slot = incident[static_cast<std::size_t>(edge)];
            int next = -1;
            for (int s : slot)
                if (s >= 0 && !used[s]) {
                    next = s;
                    break;
                }
            if (next < 0) break;
            used[next] = 1;
            edge = segments[next].a == edge ? segments[next].b : segments[next].a;
            line.push_back(grid.crossing(edge));
        }
        out.push_back(std::move(line));
    };

    // Open chains first (edges with one incident segment lie on the border).
    for (long e = 0; e < grid.edge_count(); ++e) {
        const auto& slot = incident[static_cast<std::size_t>(e)];
        if (slot[0] >= 0 && slot[1] < 0 && !used[slot[0]]) walk(e);
    }
    for (std::size_t s = 0; s < segments.size(); ++s)
        if (!used[s]) walk(segments[s].a);
    return out;
}

}  // namespace bhcav
