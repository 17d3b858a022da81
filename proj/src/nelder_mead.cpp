#include "rabicd/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rabicd/errors.hpp"

namespace rabicd {

namespace {

using Point = std::vector<double>;

Point clamp(Point p, double lo, double hi) {
    for (double& v : p) v = std::clamp(v, lo, hi);
    return p;
}

Point lerp(const Point& a, const Point& b, double t) {
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
}

double distance(const Point& a, const Point& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          const SimplexOptions& o) {
    const std::size_t dim = x0.size();
    if (dim == 0) throw DomainError("nelder_mead: empty start point");
    x0 = clamp(std::move(x0), o.lower, o.upper);

    std::vector<Point> v{x0};
    for (std::size_t i = 0; i < dim; ++i) {
        Point p = x0;
        p[i] += (p[i] + o.initial_step <= o.upper) ? o.initial_step : -o.initial_step;
        v.push_back(clamp(p, o.lower, o.upper));
    }
    std::vector<double> fv(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) fv[i] = f(v[i]);

    std::vector<std::size_t> order(v.size());
    SimplexResult res;
    for (res.iterations = 0; res.iterations < o.max_iterations; ++res.iterations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];

        double size = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) size = std::max(size, distance(v[i], v[best]));
        const double spread = fv[worst] - fv[best];
        if ((spread <= o.ftol * std::max(1.0, std::abs(fv[best])) && size <= o.xtol) || size == 0.0) {
            res.converged = true;
            break;
        }

        Point centroid(dim, 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += v[i][d] / static_cast<double>(dim);
        }
        const Point xr = clamp(lerp(centroid, v[worst], -1.0), o.lower, o.upper);
        const double fr = f(xr);
        if (fr < fv[best]) {
            const Point xe = clamp(lerp(centroid, v[worst], -2.0), o.lower, o.upper);
            const double fe = f(xe);
            if (fe < fr) {
                v[worst] = xe;
                fv[worst] = fe;
            } else {
                v[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            v[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        const Point xc = outside ? lerp(centroid, xr, 0.5) : lerp(centroid, v[worst], 0.5);
        const double fc = f(xc);
        if (fc < (outside ? fr : fv[worst])) {
            v[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i == best) continue;
            v[i] = lerp(v[best], v[i], 0.5);
            fv[i] = f(v[i]);
        }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    res.x = v[static_cast<std::size_t>(it - fv.begin())];
    res.f = *it;
    return res;
}

}  // namespace rabicd
