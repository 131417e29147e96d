#pragma once

#include <functional>
#include <span>
#include <vector>

namespace secrecy {

// Composite Simpson on a sorted, possibly nonuniform grid. Each pair of
// intervals is integrated exactly for the interpolating parabola; an odd
// trailing interval uses the parabola through the last three points.
double simpson_nonuniform(std::span<const double> x, std::span<const double> y);

// Adaptive Gauss-Kronrod on [a, b], split at the given interior breakpoints so
// that kinks of a piecewise integrand never fall inside a panel.
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breaks, double rel_tol = 1e-9);

} // namespace secrecy
