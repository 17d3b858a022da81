#pragma once

#include <functional>
#include <vector>

namespace rabicd {

struct SimplexOptions {
    double initial_step = 0.5;
    double lower = -5.0;
    double upper = 5.0;
    double ftol = 1e-8;   // objective spread, relative to max(1, |f_best|)
    double xtol = 1e-9;   // largest vertex distance from the best vertex
    int max_iterations = 500;
};

struct SimplexResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Derivative-free simplex descent; trial points are clamped to the box.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          const SimplexOptions& options);

}  // namespace rabicd
