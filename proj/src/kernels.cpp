#include "secrecy/kernels.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>

#include <omp.h>

namespace secrecy {

namespace {

std::atomic<bool> g_serial{false};

// Exceptions must not escape an OpenMP region; the first one is kept and
// rethrown after the loop.
class ErrorSlot {
public:
    template <class F>
    void run(F&& f)
    {
        try {
            f();
        } catch (...) {
            std::lock_guard lock(mutex_);
            if (!error_)
                error_ = std::current_exception();
        }
    }
    void rethrow()
    {
        if (error_)
            std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

inline double uniform_radius(double s, const UniformTerms& t)
{
    if (!(s > t.c3))
        return 0.0;
    const double v = t.c1 * s - t.c2;
    return v > 0.0 ? std::pow(v, 1.0 / t.alpha) : 0.0;
}

inline double directional_radius(std::size_t i, std::span<const double> signal, const Eigen::MatrixXd& response,
                                 std::span<const double> p, double alpha)
{
    double v = signal[i];
    const auto row = static_cast<Eigen::Index>(i);
    for (std::size_t b = 0; b < p.size(); ++b)
        v -= response(row, static_cast<Eigen::Index>(b)) * p[b];
    return v > 0.0 ? std::pow(v, 1.0 / alpha) : 0.0;
}

void check_sizes(std::size_t a, std::size_t b, const char* what)
{
    if (a != b)
        throw std::invalid_argument(what);
}

void check_directional(std::span<const double> signal, const Eigen::MatrixXd& response,
                       std::span<const double> p, std::span<double> out)
{
    check_sizes(signal.size(), out.size(), "directional_radii: output size mismatch");
    check_sizes(static_cast<std::size_t>(response.rows()), signal.size(), "directional_radii: response rows");
    check_sizes(static_cast<std::size_t>(response.cols()), p.size(), "directional_radii: response cols");
}

} // namespace

namespace serial {

void uniform_radii(std::span<const double> s, const UniformTerms& t, std::span<double> out)
{
    check_sizes(s.size(), out.size(), "uniform_radii: output size mismatch");
    for (std::size_t i = 0; i < s.size(); ++i)
        out[i] = uniform_radius(s[i], t);
}

void directional_radii(std::span<const double> signal, const Eigen::MatrixXd& response,
                       std::span<const double> p_tilde, double alpha, std::span<double> out)
{
    check_directional(signal, response, p_tilde, out);
    for (std::size_t i = 0; i < signal.size(); ++i)
        out[i] = directional_radius(i, signal, response, p_tilde, alpha);
}

void map(std::span<const double> x, const std::function<double(double)>& f, std::span<double> out)
{
    check_sizes(x.size(), out.size(), "map: output size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = f(x[i]);
}

void map_trials(std::int64_t n, const std::function<std::uint8_t(std::int64_t)>& trial,
                std::span<std::uint8_t> flags)
{
    check_sizes(static_cast<std::size_t>(n), flags.size(), "map_trials: output size mismatch");
    for (std::int64_t i = 0; i < n; ++i)
        flags[static_cast<std::size_t>(i)] = trial(i);
}

void map_index(std::int64_t n, const std::function<double(std::int64_t)>& f, std::span<double> out)
{
    check_sizes(static_cast<std::size_t>(n), out.size(), "map_index: output size mismatch");
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = f(i);
}

} // namespace serial

namespace omp {

void uniform_radii(std::span<const double> s, const UniformTerms& t, std::span<double> out)
{
    check_sizes(s.size(), out.size(), "uniform_radii: output size mismatch");
    const auto n = static_cast<std::int64_t>(s.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = uniform_radius(s[static_cast<std::size_t>(i)], t);
}

void directional_radii(std::span<const double> signal, const Eigen::MatrixXd& response,
                       std::span<const double> p_tilde, double alpha, std::span<double> out)
{
    check_directional(signal, response, p_tilde, out);
    const auto n = static_cast<std::int64_t>(signal.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            directional_radius(static_cast<std::size_t>(i), signal, response, p_tilde, alpha);
}

void map(std::span<const double> x, const std::function<double(double)>& f, std::span<double> out)
{
    check_sizes(x.size(), out.size(), "map: output size mismatch");
    const auto n = static_cast<std::int64_t>(x.size());
    ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i)
        err.run([&] { out[static_cast<std::size_t>(i)] = f(x[static_cast<std::size_t>(i)]); });
    err.rethrow();
}

void map_trials(std::int64_t n, const std::function<std::uint8_t(std::int64_t)>& trial,
                std::span<std::uint8_t> flags)
{
    check_sizes(static_cast<std::size_t>(n), flags.size(), "map_trials: output size mismatch");
    ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i)
        err.run([&] { flags[static_cast<std::size_t>(i)] = trial(i); });
    err.rethrow();
}

void map_index(std::int64_t n, const std::function<double(std::int64_t)>& f, std::span<double> out)
{
    check_sizes(static_cast<std::size_t>(n), out.size(), "map_index: output size mismatch");
    ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i)
        err.run([&] { out[static_cast<std::size_t>(i)] = f(i); });
    err.rethrow();
}

} // namespace omp

double pairwise_sum(std::span<const double> x)
{
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x)
            s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

std::int64_t count_set(std::span<const std::uint8_t> flags)
{
    std::int64_t c = 0;
    for (auto f : flags)
        c += f != 0;
    return c;
}

void use_serial_kernels(bool serial) { g_serial = serial; }
bool serial_kernels() { return g_serial; }

void uniform_radii(std::span<const double> s, const UniformTerms& t, std::span<double> out)
{
    if (g_serial)
        serial::uniform_radii(s, t, out);
    else
        omp::uniform_radii(s, t, out);
}

void directional_radii(std::span<const double> signal, const Eigen::MatrixXd& response,
                       std::span<const double> p_tilde, double alpha, std::span<double> out)
{
    if (g_serial)
        serial::directional_radii(signal, response, p_tilde, alpha, out);
    else
        omp::directional_radii(signal, response, p_tilde, alpha, out);
}

std::vector<double> map(std::span<const double> x, const std::function<double(double)>& f)
{
    std::vector<double> out(x.size());
    if (g_serial)
        serial::map(x, f, out);
    else
        omp::map(x, f, out);
    return out;
}

std::vector<std::uint8_t> map_trials(std::int64_t n, const std::function<std::uint8_t(std::int64_t)>& trial)
{
    std::vector<std::uint8_t> out(static_cast<std::size_t>(n));
    if (g_serial)
        serial::map_trials(n, trial, out);
    else
        omp::map_trials(n, trial, out);
    return out;
}

std::vector<double> map_index(std::int64_t n, const std::function<double(std::int64_t)>& f)
{
    std::vector<double> out(static_cast<std::size_t>(n));
    if (g_serial)
        serial::map_index(n, f, out);
    else
        omp::map_index(n, f, out);
    return out;
}

int thread_count() { return omp_get_max_threads(); }

void set_thread_count(int n)
{
    if (n < 1)
        throw std::invalid_argument("set_thread_count: need at least one thread");
    omp_set_num_threads(n);
}

} // namespace secrecy
