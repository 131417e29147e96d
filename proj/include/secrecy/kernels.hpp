#pragma once

// Data-parallel inner loops. Every kernel exists twice: a plain serial
// reference and an OpenMP version. Both write element i from the same
// expression, so results are bit-identical regardless of thread count.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace secrecy {

struct UniformTerms {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double alpha = 3.0;
};

namespace serial {

// radius_i = (c1 s_i - c2)^(1/alpha) when s_i > c3, else 0.
void uniform_radii(std::span<const double> s, const UniformTerms& t, std::span<double> out);

// radius_i = [signal_i - sum_b response(i, b) p_b]^+ ^(1/alpha).
void directional_radii(std::span<const double> signal, const Eigen::MatrixXd& response,
                       std::span<const double> p_tilde, double alpha, std::span<double> out);

// out_i = f(x_i).
void map(std::span<const double> x, const std::function<double(double)>& f, std::span<double> out);

// flags_i = trial(i) for i in [0, n).
void map_trials(std::int64_t n, const std::function<std::uint8_t(std::int64_t)>& trial,
                std::span<std::uint8_t> flags);

// out_i = f(i) for i in [0, n).
void map_index(std::int64_t n, const std::function<double(std::int64_t)>& f, std::span<double> out);

} // namespace serial

namespace omp {

void uniform_radii(std::span<const double> s, const UniformTerms& t, std::span<double> out);
void directional_radii(std::span<const double> signal, const Eigen::MatrixXd& response,
                       std::span<const double> p_tilde, double alpha, std::span<double> out);
void map(std::span<const double> x, const std::function<double(double)>& f, std::span<double> out);
void map_trials(std::int64_t n, const std::function<std::uint8_t(std::int64_t)>& trial,
                std::span<std::uint8_t> flags);
void map_index(std::int64_t n, const std::function<double(std::int64_t)>& f, std::span<double> out);

} // namespace omp

// Fixed-shape pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> x);
std::int64_t count_set(std::span<const std::uint8_t> flags);

// Dispatch used by the library; OpenMP unless switched to serial.
void use_serial_kernels(bool serial);
bool serial_kernels();

void uniform_radii(std::span<const double> s, const UniformTerms& t, std::span<double> out);
void directional_radii(std::span<const double> signal, const Eigen::MatrixXd& response,
                       std::span<const double> p_tilde, double alpha, std::span<double> out);
std::vector<double> map(std::span<const double> x, const std::function<double(double)>& f);
std::vector<std::uint8_t> map_trials(std::int64_t n, const std::function<std::uint8_t(std::int64_t)>& trial);
std::vector<double> map_index(std::int64_t n, const std::function<double(std::int64_t)>& f);

int thread_count();
void set_thread_count(int n);

} // namespace secrecy
