#include "catch_amalgamated.hpp"

#include <cmath>
#include <vector>

#include "qabsorb/box.hpp"

using namespace qabsorb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kHalf = std::sqrt(0.5);

EigenExpansion two_mode(ModeConvention modes = ModeConvention::Harmonic, double a = 1.0) {
    return EigenExpansion(BoxSpec{a, modes}, {kHalf, kHalf});
}

// Simpson estimate of int_{-a}^{a} f(x)^2 dx.
template <class F>
double simpson_sq(F f, double a, int n = 20000) {
    const double h = 2.0 * a / n;
    double sum = f(-a) * f(-a) + f(a) * f(a);
    for (int i = 1; i < n; ++i) {
        const double v = f(-a + i * h);
        sum += (i % 2 ? 4.0 : 2.0) * v * v;
    }
    return sum * h / 3.0;
}

// Independent wall slope of the Harmonic family: d/dx sin(n pi x / a) / sqrt(a) at x = a.
double harmonic_slope(int n, double a) { return n * kPi * std::cos(n * kPi) / (a * std::sqrt(a)); }

// Trapezoid quadrature of |sum_n A_n exp(-i E_n s) s_n|^2 over [0, t] with
// E_n = n^2 pi^2 / (2 a^2) (hbar = m = 1).
double flux_quadrature(const std::vector<cplx>& amps, double a, double t, int samples) {
    auto flux = [&](double s) {
        cplx d{};
        for (std::size_t i = 0; i < amps.size(); ++i) {
            const int n = static_cast<int>(i) + 1;
            const double e = n * n * kPi * kPi / (2.0 * a * a);
            d += amps[i] * std::polar(1.0, -e * s) * harmonic_slope(n, a);
        }
        return std::norm(d);
    };
    const double h = t / samples;
    double sum = 0.5 * (flux(0.0) + flux(t));
    for (int i = 1; i < samples; ++i) sum += flux(i * h);
    return sum * h;
}

}  // namespace

TEST_CASE("eigenmodes vanish at the walls and are unit normalized") {
    for (ModeConvention mc : {ModeConvention::Harmonic, ModeConvention::FullWell}) {
        const BoxSpec box{1.7, mc};
        for (std::size_t n : {1u, 2u, 5u}) {
            CHECK(eigenmode(n, box.half_width, box) == 0.0);
            CHECK(eigenmode(n, -box.half_width, box) == 0.0);
            const double norm = simpson_sq([&](double x) { return eigenmode(n, x, box); }, box.half_width);
            CHECK_THAT(norm, WithinRel(1.0, 1e-10));
        }
    }
}

TEST_CASE("Harmonic ground mode peaks at a/2 with the unit-norm amplitude") {
    const double a = 2.0;
    const BoxSpec box{a, ModeConvention::Harmonic};
    // int_{-a}^{a} sin^2(pi x / a) dx = a
    CHECK_THAT(eigenmode(1, a / 2.0, box), WithinRel(1.0 / std::sqrt(a), 1e-15));
    CHECK(eigenmode(1, a / 2.0, box) > eigenmode(1, a / 2.0 + 1e-3, box));
    CHECK(eigenmode(1, a / 2.0, box) > eigenmode(1, a / 2.0 - 1e-3, box));
}

TEST_CASE("FullWell ground mode peaks at the centre") {
    const BoxSpec box{1.0, ModeConvention::FullWell};
    const double peak = eigenmode(1, 0.0, box);
    CHECK_THAT(peak, WithinRel(1.0, 1e-15));
    for (double x : {-0.5, -0.01, 0.01, 0.5}) CHECK(eigenmode(1, x, box) < peak);
}

TEST_CASE("mode energies and wavenumbers per convention") {
    const PhysicalParams p{1.3, 0.7};
    const double a = 1.9;
    const BoxSpec h{a, ModeConvention::Harmonic}, f{a, ModeConvention::FullWell};
    CHECK_THAT(mode_energy(3, h, p), WithinRel(p.hbar * p.hbar * 9 * kPi * kPi / (2 * p.mass * a * a), 1e-14));
    CHECK_THAT(mode_energy(3, f, p), WithinRel(p.hbar * p.hbar * 9 * kPi * kPi / (8 * p.mass * a * a), 1e-14));
}

TEST_CASE("eigenmode argument checks") {
    const BoxSpec box{};
    CHECK_THROWS_AS(eigenmode(0, 0.1, box), ArgumentError);
    CHECK_THROWS_AS(eigenmode(1, 1.5, box), ArgumentError);
    CHECK_THROWS_AS(EigenExpansion(box, {}), ArgumentError);
    CHECK_THROWS_AS(EigenExpansion(box, {1.0, 1.0}), ArgumentError);
    CHECK_NOTHROW(EigenExpansion::normalized(box, {1.0, 1.0}));
    CHECK_THROWS_AS(BoxSpec({-1.0}).validate(), ArgumentError);
}

TEST_CASE("mode wall slopes match finite differences") {
    for (ModeConvention mc : {ModeConvention::Harmonic, ModeConvention::FullWell}) {
        const BoxSpec box{1.3, mc};
        const double a = box.half_width, h = 1e-6;
        for (std::size_t n : {1u, 2u, 3u}) {
            const double right = (eigenmode(n, a, box) - eigenmode(n, a - h, box)) / h;
            const double left = (eigenmode(n, -a + h, box) - eigenmode(n, -a, box)) / h;
            CHECK_THAT(mode_wall_slope(n, Wall::Right, box), WithinRel(right, 1e-5));
            CHECK_THAT(mode_wall_slope(n, Wall::Left, box), WithinRel(left, 1e-5));
        }
    }
}

TEST_CASE("box_kernel phase behaviour") {
    const PhysicalParams p{};
    const EigenExpansion single(BoxSpec{}, {0.0, 1.0});
    const EigenExpansion pair = two_mode();

    SECTION("t = 0 gives the initial superposition") {
        for (double x : {-0.7, 0.2, 0.9})
            CHECK(std::abs(box_kernel(pair, x, 0.0, p) - kHalf * (eigenmode(1, x, pair.box()) + eigenmode(2, x, pair.box()))) <
                  1e-15);
    }
    SECTION("stationary modulus for a single mode") {
        for (double x : {-0.3, 0.4})
            for (double t : {0.1, 1.7, 25.0})
                CHECK_THAT(std::abs(box_kernel(single, x, t, p)), WithinRel(std::abs(box_kernel(single, x, 0.0, p)), 1e-13));
    }
    SECTION("two-mode field recurs after one beat period up to a global phase") {
        const double period = 2.0 * kPi * p.hbar / (mode_energy(2, pair.box(), p) - mode_energy(1, pair.box(), p));
        const cplx ratio = box_kernel(pair, 0.3, period, p) / box_kernel(pair, 0.3, 0.0, p);
        CHECK_THAT(std::abs(ratio), WithinAbs(1.0, 1e-12));
        for (double x : {-0.8, -0.1, 0.55})
            CHECK(std::abs(box_kernel(pair, x, period, p) - ratio * box_kernel(pair, x, 0.0, p)) < 1e-12);
    }
}

TEST_CASE("sample_box_kernel requires a grid spanning the box") {
    const EigenExpansion s = two_mode();
    CHECK_THROWS_AS(sample_box_kernel(s, make_grid({0.0, 1.0}, 65), 0.0, {}), ArgumentError);
    const WaveField f = sample_box_kernel(s, make_grid({-1.0, 1.0}, 65), 0.4, {});
    CHECK(f.values.front() == cplx{});
    CHECK(f.values.back() == cplx{});
    CHECK(f.time == 0.4);
}

TEST_CASE("flux_integral_closed") {
    const PhysicalParams p{};
    SECTION("t = 0 gives zero") { CHECK(flux_integral_closed(two_mode(), 0.0, p) == 0.0); }

    SECTION("single mode: only the diagonal term") {
        for (std::size_t n : {1u, 2u, 4u}) {
            std::vector<cplx> c(n, 0.0);
            c.back() = 1.0;
            const EigenExpansion s(BoxSpec{}, c);
            CHECK_THAT(flux_integral_closed(s, 0.83, p), WithinRel(double(n * n) * kPi * kPi * 0.83, 1e-14));
            CHECK_THAT(flux_integral_closed(s, 0.83, p), WithinRel(flux_quadrature(c, 1.0, 0.83, 10), 1e-12));
        }
    }

    SECTION("two-mode state against sampled-field quadrature of the boundary derivative") {
        const EigenExpansion s = two_mode();
        const SpatialGrid grid = make_grid({-1.0, 1.0}, 2049);
        const double t = 1.0;
        const int samples = 10000;
        std::vector<double> times(samples + 1), flux(samples + 1);
        for (int i = 0; i <= samples; ++i) {
            times[i] = t * i / samples;
            flux[i] = std::norm(boundary_derivative(sample_box_kernel(s, grid, times[i], p), Wall::Right));
        }
        CHECK_THAT(flux_integral_closed(s, t, p), WithinRel(integrate_time_series(times, flux), 1e-6));
    }

    SECTION("complex multi-mode state is real, non-negative and matches quadrature") {
        const std::vector<cplx> c{cplx(0.3, 0.2), cplx(-0.5, 0.1), cplx(0.0, 0.4), cplx(0.35, -0.2)};
        const EigenExpansion s = EigenExpansion::normalized(BoxSpec{}, c);
        for (double t : {0.01, 0.2, 0.9, 3.3}) {
            const double f = flux_integral_closed(s, t, p);
            CHECK(f >= 0.0);
            CHECK_THAT(f, WithinRel(flux_quadrature(s.coefficients(), 1.0, t, 200000), 1e-8));
        }
    }
}

TEST_CASE("survival_box limits and single-level rate") {
    const PhysicalParams p{};
    const EigenExpansion s = two_mode();
    CHECK(survival_box(s, {0.4, 0.9}, 0.0, p) == 1.0);
    for (double t : {0.5, 2.0, 10.0}) CHECK(survival_box(s, {0.0, 0.0}, t, p) == 1.0);

    const double lambda = 0.37;
    for (std::size_t n : {1u, 2u, 3u}) {
        std::vector<cplx> c(n, 0.0);
        c.back() = 1.0;
        const EigenExpansion mode(BoxSpec{}, c);
        const AbsorberSpec both{lambda, lambda};
        // hbar = m = a = 1: -ln(S)/t = 2 lambda hbar pi n^2 / (m a^2)
        for (double t : {0.1, 1.0, 4.0})
            CHECK_THAT(-std::log(survival_box(mode, both, t, p)) / t, WithinRel(2.0 * lambda * kPi * double(n * n), 1e-12));
    }
}

TEST_CASE("single-level rate scales with hbar, m and a") {
    const PhysicalParams p{1.7, 0.6};
    const double a = 1.4, lambda = 0.2;
    const EigenExpansion mode(BoxSpec{a}, {0.0, 0.0, 1.0});
    const double t = 0.3;
    // Normalized modes: slope^2 = n^2 pi^2 / a^3 at each wall.
    const double rate = 2.0 * lambda * p.hbar * kPi * 9.0 / (p.mass * a * a * a);
    CHECK_THAT(-std::log(survival_box(mode, {lambda, lambda}, t, p)) / t, WithinRel(rate, 1e-12));
}

TEST_CASE("single-mode survival is exactly exponential") {
    const EigenExpansion mode(BoxSpec{}, {0.0, 1.0});
    const AbsorberSpec abs{0.2, 0.5};
    const double rate = -std::log(survival_box(mode, abs, 1.0, {}));
    for (double t : {0.25, 0.5, 2.0, 7.5}) CHECK_THAT(-std::log(survival_box(mode, abs, t, {})), WithinRel(rate * t, 1e-12));
}

TEST_CASE("survival_two_level_series agrees with survival_box") {
    const PhysicalParams p{1.1, 0.9};
    for (ModeConvention mc : {ModeConvention::Harmonic, ModeConvention::FullWell}) {
        const BoxSpec box{1.2, mc};
        const double ak = 0.6, an = -0.8;
        std::vector<cplx> c(3, 0.0);
        c[0] = an;
        c[2] = ak;
        const EigenExpansion s(box, c);
        for (const AbsorberSpec abs : {AbsorberSpec{0.3, 0.0}, AbsorberSpec{0.0, 0.7}, AbsorberSpec{0.25, 0.4}}) {
            for (int i = 0; i <= 50; ++i) {
                const double t = 10.0 * i / 50.0;
                CHECK_THAT(survival_two_level_series(3, 1, ak, an, abs, t, p, box),
                           WithinRel(survival_box(s, abs, t, p), 1e-12));
            }
        }
    }
}

TEST_CASE("survival_two_level quoted form") {
    const PhysicalParams p{};
    const AbsorberSpec right{0.0, 1.0};
    CHECK(survival_two_level(2, 1, kHalf, kHalf, right, 0.0, p) == 1.0);
    CHECK_THROWS_AS(survival_two_level(2, 2, kHalf, kHalf, right, 0.3, p), ArgumentError);
    CHECK_THROWS_AS(survival_two_level(2, 1, 0.5, 0.5, right, 0.3, p), ArgumentError);

    SECTION("A_n = 0 reduces to the single-level law") {
        const EigenExpansion k2(BoxSpec{}, {0.0, 1.0});
        for (double t : {0.2, 1.5})
            CHECK_THAT(survival_two_level(2, 1, 1.0, 0.0, right, t, p), WithinRel(survival_box(k2, right, t, p), 1e-12));
    }

    SECTION("dimensionless form is the quoted law under tau = lambda hbar pi t / (m a^2)") {
        for (int i = 0; i <= 40; ++i) {
            const double t = 0.8 * i / 40.0;
            const double tau = dimensionless_time(t, 1.0, BoxSpec{}, p);
            CHECK_THAT(survival_dimensionless(tau), WithinRel(survival_two_level(2, 1, kHalf, kHalf, right, t, p), 1e-12));
        }
    }

    SECTION("quoted oscillation is smaller than the eigenseries one by -k n (-1)^(k+n)") {
        // ln S = -c lambda [L t - B sin(w t)]: the line through t = 0 and half a period
        // removes the linear part, the quarter period picks out B.
        const std::size_t k = 2, n = 1;
        const double w = beat_frequency(k, n, BoxSpec{}, p);
        const double t1 = 0.25 * 2.0 * kPi / w, t2 = 0.5 * 2.0 * kPi / w;
        auto amplitude = [&](auto survival) {
            const double slope = std::log(survival(t2)) / t2;
            return std::log(survival(t1)) - slope * t1;
        };
        const double quoted = amplitude([&](double t) { return survival_two_level(k, n, kHalf, kHalf, right, t, p); });
        const double series =
            amplitude([&](double t) { return survival_two_level_series(k, n, kHalf, kHalf, right, t, p); });
        const double factor = -double(k * n) * ((k + n) % 2 ? -1.0 : 1.0);
        CHECK_THAT(series / quoted, WithinRel(factor, 1e-12));
    }
}

TEST_CASE("survival_dimensionless reference values") {
    // mpmath, 30 digits, of exp(-5/2 tau + 2/(3 pi) sin(3 pi tau / 2))
    CHECK(survival_dimensionless(0.0) == 1.0);
    CHECK_THAT(survival_dimensionless(1.0), WithinRel(0.066390149076381273063, 1e-12));
    CHECK_THAT(survival_dimensionless(4.0 / 3.0), WithinRel(0.035673993347252397604, 1e-12));
    CHECK_THAT(survival_dimensionless(4.0 / 3.0), WithinRel(std::exp(-10.0 / 3.0), 1e-12));
    CHECK_THAT(survival_dimensionless(2.0), WithinRel(0.0067379469990854670966, 1e-12));
    CHECK_THROWS_AS(survival_dimensionless(-0.1), ArgumentError);
}

TEST_CASE("survival_dimensionless is in (0, 1] and non-increasing") {
    double prev = 1.0;
    for (int i = 0; i <= 2000; ++i) {
        const double s = survival_dimensionless(4.0 * i / 2000.0);
        CHECK(s > 0.0);
        CHECK(s <= prev);
        prev = s;
    }
}

TEST_CASE("beat_frequency") {
    const PhysicalParams p{};
    CHECK_THAT(beat_frequency(2, 1, BoxSpec{}, p), WithinRel(1.5 * kPi * kPi, 1e-15));
    CHECK_THAT(beat_frequency(2, 1, BoxSpec{}, p), WithinAbs(14.8044, 1e-4));
    CHECK_THAT(beat_frequency(3, 1, BoxSpec{}, p), WithinRel(4.0 * kPi * kPi, 1e-15));
    CHECK(beat_frequency(1, 3, BoxSpec{}, p) == beat_frequency(3, 1, BoxSpec{}, p));
    CHECK_THROWS_AS(beat_frequency(2, 2, BoxSpec{}, p), ArgumentError);

    // The quoted law's oscillatory part repeats with period 2 pi / w.
    const AbsorberSpec right{0.0, 0.6};
    const double period = 2.0 * kPi / beat_frequency(2, 1, BoxSpec{}, p);
    const double linear = 0.6 / kPi * kPi * kPi * 2.5;
    for (double t : {0.03, 0.11, 0.29}) {
        const double a = std::log(survival_two_level(2, 1, kHalf, kHalf, right, t, p)) + linear * t;
        const double b = std::log(survival_two_level(2, 1, kHalf, kHalf, right, t + period, p)) + linear * (t + period);
        CHECK_THAT(b, WithinAbs(a, 1e-12));
    }
}
