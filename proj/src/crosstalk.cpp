#include "secrecy/crosstalk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>

namespace secrecy {

namespace {

constexpr double kAngleSlack = 1e-12;
constexpr double kBisectTol = 1e-14;

double ratio(double k) { return std::isinf(k) ? 1.0 : k / (1.0 + k); }

} // namespace

void ArrayGeometry::validate() const
{
    if (n_antennas < 2)
        throw std::invalid_argument("ArrayGeometry: n_antennas must be >= 2, got " + std::to_string(n_antennas));
    if (!(spacing > 0.0 && spacing <= 1.0))
        throw std::invalid_argument("ArrayGeometry: spacing must lie in (0, 1] wavelengths");
}

void AngleRange::validate() const
{
    if (!(lo < hi))
        throw std::domain_error("AngleRange: empty angle range");
    if (lo < -kHalfPi - kAngleSlack || hi > kHalfPi + kAngleSlack)
        throw std::domain_error("AngleRange: bounds must lie within [-pi/2, pi/2]");
}

double deg_to_rad(double deg) { return deg * kPi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

int max_lobe_index(const ArrayGeometry& geom)
{
    return static_cast<int>(std::ceil(2.0 * geom.n_antennas * geom.spacing - 1e-9)) - 1;
}

int default_side_lobe_count(const ArrayGeometry& geom, double theta_ref)
{
    const double span = geom.n_antennas * geom.spacing * (1.0 + std::abs(std::sin(theta_ref)));
    const int m = static_cast<int>(std::ceil(span - 1e-9)) - 1;
    return std::clamp(m, 1, std::max(1, max_lobe_index(geom)));
}

CrosstalkProfile CrosstalkProfile::make(const ArrayGeometry& geom, double theta_ref, double k_factor_product)
{
    CrosstalkProfile p;
    p.geometry = geom;
    p.theta_ref = theta_ref;
    p.k_factor_product = k_factor_product;
    p.n_side_lobes = default_side_lobe_count(geom, theta_ref);
    p.validate();
    return p;
}

void CrosstalkProfile::validate() const
{
    geometry.validate();
    if (std::abs(theta_ref) > kHalfPi + kAngleSlack)
        throw std::domain_error("CrosstalkProfile: |theta_ref| must not exceed pi/2");
    if (!(k_factor_product >= 0.0 && k_factor_product <= 1.0))
        throw std::invalid_argument("CrosstalkProfile: K product must lie in [0, 1]");
    if (n_side_lobes < 1)
        throw std::invalid_argument("CrosstalkProfile: need at least one side lobe");
}

double k_factor_product(double k_i, double k_j)
{
    if (k_i < 0.0 || k_j < 0.0)
        throw std::invalid_argument("k_factor_product: Rician K-factors must be non-negative");
    return ratio(k_i) * ratio(k_j);
}

std::vector<std::complex<double>> steering_vector(double theta, const ArrayGeometry& geom)
{
    geom.validate();
    if (!(std::abs(theta) <= kHalfPi + kAngleSlack))
        throw std::domain_error("steering_vector: angle outside [-pi/2, pi/2]");
    const double step = -2.0 * kPi * geom.spacing * std::sin(theta);
    std::vector<std::complex<double>> v(static_cast<std::size_t>(geom.n_antennas));
    for (int n = 0; n < geom.n_antennas; ++n)
        v[static_cast<std::size_t>(n)] = std::polar(1.0, step * n);
    return v;
}

double s_kernel(double x, const ArrayGeometry& geom)
{
    if (x == 0.0)
        return 1.0;
    const double a = kPi * geom.spacing * x;
    const double den = std::sin(a);
    if (std::abs(den) < 1e-12)
        return 1.0;  // grating lobe
    const double n = geom.n_antennas;
    const double num = std::sin(n * a);
    return std::min(1.0, (num * num) / (n * n * den * den));
}

double s_kernel_derivative(double x, const ArrayGeometry& geom)
{
    const double a = kPi * geom.spacing * x;
    const double g = std::sin(a);
    if (std::abs(g) < 1e-12)
        return 0.0;
    const double n = geom.n_antennas;
    const double f = std::sin(n * a);
    const double inner = n * std::cos(n * a) * g - f * std::cos(a);
    return kPi * geom.spacing * 2.0 * f * inner / (n * n * g * g * g);
}

double normalized_crosstalk(double theta_i, const CrosstalkProfile& profile)
{
    if (!(std::abs(theta_i) <= kHalfPi + kAngleSlack))
        throw std::domain_error("normalized_crosstalk: angle outside [-pi/2, pi/2]");
    const double delta = std::abs(std::sin(theta_i) - std::sin(profile.theta_ref));
    return profile.k_factor_product * s_kernel(delta, profile.geometry);
}

double peak_value(int m, const ArrayGeometry& geom, PeakForm form)
{
    if (m < 0)
        throw std::domain_error("peak_value: lobe index must be non-negative");
    if (m > max_lobe_index(geom))
        throw std::out_of_range("peak_value: lobe " + std::to_string(m) + " lies beyond the representable offsets");
    if (m == 0)
        return 1.0;
    const double half = m + 0.5;
    if (form == PeakForm::large_array)
        return 1.0 / (kPi * kPi * half * half);
    const double n = geom.n_antennas;
    const double s = std::sin(kPi * half / n);
    return 1.0 / (n * n * s * s);
}

std::pair<double, double> lobe_interval(int m, const ArrayGeometry& geom)
{
    const double w = geom.lobe_width();
    return {m * w, (m + 1) * w};
}

LobeApex lobe_apex(int m, const ArrayGeometry& geom)
{
    if (m == 0)
        return {0.0, 1.0};
    const auto [lo, hi] = lobe_interval(m, geom);
    const double eps = 1e-9 * (hi - lo);
    const double d_lo = s_kernel_derivative(lo + eps, geom);
    const double d_hi = s_kernel_derivative(hi - eps, geom);
    if (!(d_lo > 0.0 && d_hi < 0.0)) {
        // Monotone half of a grating lobe.
        const double s_lo = s_kernel(lo, geom);
        const double s_hi = s_kernel(hi, geom);
        return s_lo >= s_hi ? LobeApex{lo, s_lo} : LobeApex{hi, s_hi};
    }
    auto sign = [&](double x) { return s_kernel_derivative(x, geom); };
    auto tol = [](double a, double b) { return std::abs(b - a) < kBisectTol; };
    const auto br = boost::math::tools::bisect(sign, lo + eps, hi - eps, tol);
    const double x = 0.5 * (br.first + br.second);
    return {x, s_kernel(x, geom)};
}

double s_max_on_interval(double lo, double hi, const ArrayGeometry& geom)
{
    if (lo > hi)
        std::swap(lo, hi);
    double best = std::max(s_kernel(lo, geom), s_kernel(hi, geom));
    const double w = geom.lobe_width();
    const int first = static_cast<int>(std::floor(lo / w));
    const int last = std::min(static_cast<int>(std::floor(hi / w)), max_lobe_index(geom));
    for (int m = std::max(first, 0); m <= last; ++m) {
        const auto apex = lobe_apex(m, geom);
        if (apex.x >= lo && apex.x <= hi)
            best = std::max(best, apex.value);
    }
    return best;
}

double solve_monotone_piece(double u, double a, double b, bool rising, const ArrayGeometry& geom)
{
    const double sa = s_kernel(a, geom);
    const double sb = s_kernel(b, geom);
    if (rising) {
        if (sa >= u) return a;
        if (sb <= u) return b;
    } else {
        if (sa <= u) return a;
        if (sb >= u) return b;
    }
    auto f = [&](double x) { return s_kernel(x, geom) - u; };
    auto tol = [](double lo, double hi) { return std::abs(hi - lo) < kBisectTol; };
    const auto br = boost::math::tools::bisect(f, a, b, tol);
    return 0.5 * (br.first + br.second);
}

LobeLandmarks cross_points(double u, const CrosstalkProfile& profile)
{
    profile.validate();
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("cross_points: threshold must lie in (0, 1)");
    const auto& geom = profile.geometry;
    const int m_cap = std::min(profile.n_side_lobes, max_lobe_index(geom));

    LobeLandmarks out;
    out.peak_values.reserve(static_cast<std::size_t>(m_cap) + 1);
    for (int m = 0; m <= m_cap; ++m)
        out.peak_values.push_back(peak_value(m, geom));

    out.cross_point_main = solve_monotone_piece(u, 0.0, geom.lobe_width(), false, geom);
    for (int m = 1; m <= m_cap; ++m) {
        const auto apex = lobe_apex(m, geom);
        if (apex.value <= u)
            continue;
        const auto [lo, hi] = lobe_interval(m, geom);
        SideLobeCrossing c;
        c.lobe = m;
        c.lower = solve_monotone_piece(u, lo, apex.x, true, geom);
        c.upper = solve_monotone_piece(u, apex.x, hi, false, geom);
        out.cross_points_side.push_back(c);
    }
    return out;
}

double delta_cdf(double z, double theta_ref, const AngleRange& range)
{
    range.validate();
    const double sr = std::sin(theta_ref);
    const double upper = std::min(std::asin(std::min(1.0, z + sr)), range.hi);
    const double lower = std::max(std::asin(std::max(-1.0, -z + sr)), range.lo);
    return std::max(0.0, upper - lower) / (range.hi - range.lo);
}

std::pair<double, double> feasible_delta(double theta_ref, const AngleRange& range)
{
    const double sr = std::sin(theta_ref);
    const double a = std::sin(range.lo) - sr;
    const double b = std::sin(range.hi) - sr;
    const double hi = std::max(std::abs(a), std::abs(b));
    const double lo = (a <= 0.0 && b >= 0.0) ? 0.0 : std::min(std::abs(a), std::abs(b));
    return {lo, hi};
}

CrosstalkCdf::CrosstalkCdf(const CrosstalkProfile& profile, const AngleRange& range)
    : profile_(profile), range_(range)
{
    profile_.validate();
    range_.validate();
    std::tie(delta_lo_, delta_hi_) = feasible_delta(profile_.theta_ref, range_);
    const auto& geom = profile_.geometry;
    const int m_cap = std::min(profile_.n_side_lobes, max_lobe_index(geom));
    for (int m = 0; m <= m_cap; ++m) {
        const auto [lo, hi] = lobe_interval(m, geom);
        if (hi < delta_lo_ || lo > delta_hi_)
            continue;
        lobes_.push_back({m, lo, hi, lobe_apex(m, geom)});
    }
}

double CrosstalkCdf::prob_above(double u) const
{
    const auto& geom = profile_.geometry;
    double p = 0.0;
    for (const auto& lobe : lobes_) {
        if (lobe.apex.value <= u)
            continue;
        const double lower = solve_monotone_piece(u, lobe.lo, lobe.apex.x, true, geom);
        const double upper = solve_monotone_piece(u, lobe.apex.x, lobe.hi, false, geom);
        p += delta_cdf(upper, profile_.theta_ref, range_) - delta_cdf(lower, profile_.theta_ref, range_);
    }
    return p;
}

double CrosstalkCdf::operator()(double x) const
{
    const double k = profile_.k_factor_product;
    if (x < 0.0)
        return 0.0;
    if (k == 0.0 || x >= k)
        return 1.0;
    return std::clamp(1.0 - prob_above(x / k), 0.0, 1.0);
}

std::vector<double> CrosstalkCdf::kinks() const
{
    const auto& geom = profile_.geometry;
    const double k = profile_.k_factor_product;
    const double sr = std::sin(profile_.theta_ref);
    std::vector<double> u;
    for (const auto& lobe : lobes_)
        u.push_back(lobe.apex.value);
    const double deltas[] = {delta_lo_, delta_hi_,
                             std::abs(std::sin(range_.lo) - sr), std::abs(std::sin(range_.hi) - sr),
                             1.0 - sr, 1.0 + sr};
    for (double d : deltas)
        if (d >= delta_lo_ && d <= delta_hi_)
            u.push_back(s_kernel(d, geom));
    std::vector<double> out;
    for (double v : u) {
        const double x = k * v;
        if (x > 0.0 && x < k)
            out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double CrosstalkCdf::s_max() const
{
    return profile_.k_factor_product * s_max_on_interval(delta_lo_, delta_hi_, profile_.geometry);
}

double crosstalk_cdf(double x, const CrosstalkProfile& profile, const AngleRange& range)
{
    return CrosstalkCdf(profile, range)(x);
}

double s_max_feasible(const CrosstalkProfile& profile, const AngleRange& range)
{
    return CrosstalkCdf(profile, range).s_max();
}

} // namespace secrecy
