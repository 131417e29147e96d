#pragma once

#include <functional>
#include <span>
#include <vector>

namespace secrecy {

struct ArgMin {
    double x = 0.0;
    double value = 0.0;
    std::size_t index = 0;
};

// Smallest value on the grid; ties go to the smaller index.
ArgMin grid_argmin(std::span<const double> xs, std::span<const double> values);

// Golden-section minimization on [a, b] to absolute tolerance tol in x.
ArgMin golden_section(const std::function<double(double)>& f, double a, double b, double tol);

std::vector<double> linspace(double a, double b, std::size_t n);

// a, a + step, ... up to and including b (b appended when not on the lattice).
std::vector<double> step_grid(double a, double b, double step);

} // namespace secrecy
