#include "secrecy/search.hpp"

#include <cmath>
#include <stdexcept>

namespace secrecy {

ArgMin grid_argmin(std::span<const double> xs, std::span<const double> values)
{
    if (xs.empty() || xs.size() != values.size())
        throw std::invalid_argument("grid_argmin: need matching, nonempty grids");
    ArgMin best{xs[0], values[0], 0};
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (values[i] < best.value)
            best = {xs[i], values[i], i};
    return best;
}

ArgMin golden_section(const std::function<double(double)>& f, double a, double b, double tol)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? ArgMin{c, fc, 0} : ArgMin{d, fd, 0};
}

std::vector<double> linspace(double a, double b, std::size_t n)
{
    if (n == 0)
        return {};
    if (n == 1)
        return {a};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = b;
    return out;
}

std::vector<double> step_grid(double a, double b, double step)
{
    if (!(step > 0.0))
        throw std::invalid_argument("step_grid: step must be positive");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i)
        out.push_back(a + step * static_cast<double>(i));
    if (b - out.back() > 1e-12 * std::max(1.0, std::abs(b)))
        out.push_back(b);
    return out;
}

} // namespace secrecy
