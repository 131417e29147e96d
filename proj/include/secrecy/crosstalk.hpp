#pragma once

// Steering vectors of a uniform linear array and the normalized crosstalk
// between two LOS directions.
//
// All "x" arguments live in the sine domain: x = |sin(theta_i) - sin(theta_j)|.
// The kernel s(x) has nulls at x = k / (N d) and lobe m spans
// [m / (N d), (m + 1) / (N d)]; lobe 0 is the main lobe.

#include <complex>
#include <utility>
#include <vector>

namespace secrecy {

struct ArrayGeometry {
    int n_antennas = 100;
    double spacing = 0.5;   // wavelengths

    void validate() const;
    double lobe_width() const { return 1.0 / (n_antennas * spacing); }
};

struct AngleRange {
    double lo = 0.0;
    double hi = 0.0;

    void validate() const;
    double width() const { return hi - lo; }
    bool contains(double theta) const { return theta >= lo && theta <= hi; }
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

inline AngleRange half_space() { return {-kHalfPi, kHalfPi}; }

double deg_to_rad(double deg);
double rad_to_deg(double rad);

struct CrosstalkProfile {
    ArrayGeometry geometry;
    double theta_ref = 0.0;
    double k_factor_product = 1.0;  // K_{i;j}
    int n_side_lobes = 1;           // M

    // Fills n_side_lobes with the number of side lobes whose support meets
    // [0, 1 + |sin theta_ref|].
    static CrosstalkProfile make(const ArrayGeometry& geom, double theta_ref, double k_factor_product);

    void validate() const;
};

int default_side_lobe_count(const ArrayGeometry& geom, double theta_ref);

// Product factor K_i K_j / ((1 + K_i)(1 + K_j)); infinite K means pure LOS.
double k_factor_product(double k_i, double k_j);

std::vector<std::complex<double>> steering_vector(double theta, const ArrayGeometry& geom);

double s_kernel(double x, const ArrayGeometry& geom);

// d s / d x, used by lobe apex refinement.
double s_kernel_derivative(double x, const ArrayGeometry& geom);

double normalized_crosstalk(double theta_i, const CrosstalkProfile& profile);

enum class PeakForm { exact, large_array };

double peak_value(int m, const ArrayGeometry& geom, PeakForm form = PeakForm::exact);

// Highest lobe index whose support intersects the largest possible offset,
// |sin a - sin b| <= 2.
int max_lobe_index(const ArrayGeometry& geom);

struct LobeApex {
    double x;      // location of the true maximum of s on the lobe
    double value;  // s at that location
};

std::pair<double, double> lobe_interval(int m, const ArrayGeometry& geom);

// True maximum of s(x) over lobe m, located by bisection on the sign of s'.
LobeApex lobe_apex(int m, const ArrayGeometry& geom);

// Maximum of s over [lo, hi] (sine domain), exact up to apex tolerance.
double s_max_on_interval(double lo, double hi, const ArrayGeometry& geom);

struct SideLobeCrossing {
    int lobe = 0;
    double lower = 0.0;  // CP_{m,1}
    double upper = 0.0;  // CP_{m,2}
};

struct LobeLandmarks {
    std::vector<double> peak_values;            // PV_0 .. PV_M
    double cross_point_main = 0.0;              // CP_0(u)
    std::vector<SideLobeCrossing> cross_points_side;  // lobes whose apex exceeds u
};

LobeLandmarks cross_points(double u, const CrosstalkProfile& profile);

// CDF of Delta = |sin theta - sin theta_ref| for theta uniform on the range.
double delta_cdf(double z, double theta_ref, const AngleRange& range);

// Range of Delta reachable from theta in range.
std::pair<double, double> feasible_delta(double theta_ref, const AngleRange& range);

// Piecewise CDF of the normalized crosstalk K * s(Delta) with theta uniform on
// the range. Lobe apexes are computed once per instance, so repeated evaluation
// (quadrature, phi sweeps) is cheap.
class CrosstalkCdf {
public:
    CrosstalkCdf(const CrosstalkProfile& profile, const AngleRange& range);

    double operator()(double x) const;

    const CrosstalkProfile& profile() const { return profile_; }
    const AngleRange& range() const { return range_; }

    // Values of x where the CDF has a kink: lobe apexes and the images of the
    // range boundaries. Sorted, within (0, K).
    std::vector<double> kinks() const;

    double s_max() const;

private:
    struct Lobe {
        int index;
        double lo, hi;
        LobeApex apex;
    };

    double prob_above(double u) const;

    CrosstalkProfile profile_;
    AngleRange range_;
    double delta_lo_ = 0.0;
    double delta_hi_ = 0.0;
    std::vector<Lobe> lobes_;  // only lobes meeting [delta_lo, delta_hi]
};

double crosstalk_cdf(double x, const CrosstalkProfile& profile, const AngleRange& range);

double s_max_feasible(const CrosstalkProfile& profile, const AngleRange& range);

// Solves s(x) = u on a monotone piece [a, b] of the kernel by bisection to
// 1e-12 in x. rising selects the orientation.
double solve_monotone_piece(double u, double a, double b, bool rising, const ArrayGeometry& geom);

} // namespace secrecy
