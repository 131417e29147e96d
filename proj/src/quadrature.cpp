#include "secrecy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace secrecy {

namespace {

// Integral over [x0, x2] of the parabola through three points.
double parabola_pair(double x0, double x1, double x2, double y0, double y1, double y2)
{
    const double h0 = x1 - x0;
    const double h1 = x2 - x1;
    const double h = h0 + h1;
    return h / 6.0 * ((2.0 - h1 / h0) * y0 + h * h / (h0 * h1) * y1 + (2.0 - h0 / h1) * y2);
}

// Integral over [x1, x2] of the parabola through (x0, x1, x2).
double parabola_tail(double x0, double x1, double x2, double y0, double y1, double y2)
{
    const double h0 = x1 - x0;
    const double h1 = x2 - x1;
    const double c0 = -h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    const double c1 = h1 * (h1 + 3.0 * h0) / (6.0 * h0);
    const double c2 = h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1));
    return c0 * y0 + c1 * y1 + c2 * y2;
}

} // namespace

double simpson_nonuniform(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("simpson_nonuniform: size mismatch");
    const std::size_t n = x.size();
    if (n < 2)
        return 0.0;
    if (n == 2)
        return 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
    double total = 0.0;
    std::size_t i = 0;
    for (; i + 2 < n; i += 2)
        total += parabola_pair(x[i], x[i + 1], x[i + 2], y[i], y[i + 1], y[i + 2]);
    if (i + 1 < n)
        total += parabola_tail(x[i - 1], x[i], x[i + 1], y[i - 1], y[i], y[i + 1]);
    return total;
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b, std::vector<double> breaks,
                           double rel_tol)
{
    if (!(b > a))
        return 0.0;
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double t) { return t < a || t > b; }), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    using Gk = boost::math::quadrature::gauss_kronrod<double, 21>;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i];
        const double hi = breaks[i + 1];
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi)))
            continue;
        total += Gk::integrate(f, lo, hi, 15, rel_tol);
    }
    return total;
}

} // namespace secrecy
