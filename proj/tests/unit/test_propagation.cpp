#include "catch_amalgamated.hpp"

#include <cmath>

#include "qabsorb/box.hpp"
#include "qabsorb/propagation.hpp"

using namespace qabsorb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kHalf = std::sqrt(0.5);

PropagationConfig box_config(std::size_t points, double dt, std::size_t steps, AbsorberSpec absorber,
                             StepperKind kind = StepperKind::SpectralSine) {
    PropagationConfig c;
    c.grid = make_grid({-1.0, 1.0}, points);
    c.dt = dt;
    c.n_steps = steps;
    c.absorber = absorber;
    c.stepper = kind;
    return c;
}

WaveField start(const PropagationConfig& c, std::vector<cplx> coeffs) {
    return sample_box_kernel(EigenExpansion(BoxSpec{}, std::move(coeffs)), c.grid, 0.0, c.params);
}

}  // namespace

TEST_CASE("absorb_probability") {
    const SpatialGrid g = make_grid({-1.0, 1.0}, 513);
    const WaveField ground = sample_box_kernel(EigenExpansion(BoxSpec{}, {1.0}), g, 0.0, {});

    CHECK(absorb_probability(ground, 1e-3, {0.0, 0.0}, {}).probability == 0.0);

    // |dK/dx|^2 = pi^2 at each wall; c = 1/pi (continuum), so P / dt = 2 lambda pi.
    const double lambda = 0.3;
    const StepAbsorption s = absorb_probability(ground, 1e-4, {lambda, lambda}, {});
    CHECK_THAT(s.probability / 1e-4, WithinRel(2.0 * lambda * kPi, 1e-4));
    CHECK_FALSE(s.too_coarse());

    const StepAbsorption one = absorb_probability(ground, 1e-4, {0.0, lambda}, {});
    CHECK_THAT(2.0 * one.probability, WithinRel(s.probability, 1e-6));

    const double p1 = absorb_probability(ground, 1e-5, {lambda, 0.0}, {}).probability;
    const double p2 = absorb_probability(ground, 2e-5, {lambda, 0.0}, {}).probability;
    CHECK_THAT(p2, WithinRel(2.0 * p1, 1e-6));

    AbsorberSpec product{lambda, lambda, PrefactorConvention::StepProduct};
    CHECK_THAT(absorb_probability(ground, 1e-4, product, {}).probability, WithinRel(0.5 * s.probability, 1e-14));

    const StepAbsorption big = absorb_probability(ground, 1.0, {10.0, 10.0}, {});
    CHECK(big.too_coarse());
    CHECK(big.probability < 1.0);
    CHECK(big.unclamped > 1.0);
}

TEST_CASE("without absorbers the survival stays at one") {
    const PropagationConfig c = box_config(257, 1e-3, 200, {0.0, 0.0});
    const WaveField init = start(c, {kHalf, kHalf});
    const PropagationResult r = propagate_with_absorption(init, c);
    REQUIRE(r.curve.size() == 201);
    for (double s : r.curve.survival()) CHECK(s == 1.0);
    CHECK(r.final_state.survival == 1.0);
    CHECK_FALSE(r.truncated);

    WaveField plain = init;
    SpectralSineStepper s(c.grid, c.dt, c.params);
    for (int i = 0; i < 200; ++i) plain = s.step(plain);
    for (std::size_t i = 0; i < plain.values.size(); ++i) CHECK(r.final_state.kernel.values[i] == plain.values[i]);
    CHECK(r.flux_left.size() == 200);
    CHECK(r.flux_right.size() == 200);
}

TEST_CASE("propagation input checks") {
    const PropagationConfig c = box_config(129, 1e-3, 10, {1.0, 1.0});
    WaveField init = start(c, {1.0});
    for (auto& z : init.values) z *= 2.0;
    CHECK_THROWS_AS(propagate_with_absorption(init, c), ContractViolation);
    const WaveField other = sample_box_kernel(EigenExpansion(BoxSpec{}, {1.0}), make_grid({-1.0, 1.0}, 65), 0.0, {});
    CHECK_THROWS_AS(propagate_with_absorption(other, c), ArgumentError);
}

TEST_CASE("single-mode decay rate from the discounted loop") {
    const double lambda = 1e-2, dt = 1e-4;
    for (int n : {1, 2, 3}) {
        const PropagationConfig c = box_config(513, dt, 5000, {lambda, lambda});
        std::vector<cplx> coeffs(static_cast<std::size_t>(n), 0.0);
        coeffs.back() = 1.0;
        const PropagationResult r = propagate_with_absorption(start(c, coeffs), c);
        const double rate = 2.0 * lambda * kPi * n * n;
        for (std::size_t i : {1000u, 2500u, 5000u}) {
            const double t = r.curve.times()[i];
            CHECK_THAT(-std::log(r.curve.survival()[i]) / t, WithinRel(rate, 1e-3));
        }
    }
}

TEST_CASE("discount bias is first order in dt") {
    const double lambda = 1.0, t = 0.5;
    const double exact = std::exp(-2.0 * lambda * kPi * t);
    auto error_at = [&](double dt) {
        const auto steps = static_cast<std::size_t>(std::lround(t / dt));
        const PropagationConfig c = box_config(513, dt, steps, {lambda, lambda});
        return std::abs(propagate_with_absorption(start(c, {1.0}), c).final_state.survival - exact);
    };
    const double e1 = error_at(4e-3), e2 = error_at(2e-3), e3 = error_at(1e-3);
    CHECK_THAT(std::log2(e1 / e2), WithinAbs(1.0, 0.1));
    CHECK_THAT(std::log2(e2 / e3), WithinAbs(1.0, 0.1));
}

TEST_CASE("two-level run follows the eigenseries law") {
    const PhysicalParams p{};
    const double dt = 1e-5;
    const double t_end = 1.0 / kPi;  // tau = 1 with lambda = a = 1
    const PropagationConfig c = box_config(513, dt, static_cast<std::size_t>(std::lround(t_end / dt)), {0.0, 1.0});
    const PropagationResult r = propagate_with_absorption(start(c, {kHalf, kHalf}), c);
    for (double tau : {0.25, 0.5, 1.0}) {
        const double t = tau / kPi;
        const double want = survival_two_level_series(2, 1, kHalf, kHalf, c.absorber, t, p);
        INFO("tau = " << tau);
        CHECK_THAT(r.curve.at(std::min(t, r.curve.times().back())), WithinRel(want, 1e-3));
    }
}

TEST_CASE("survival is non-increasing for every stepper") {
    for (StepperKind kind : {StepperKind::SpectralSine, StepperKind::CrankNicolson, StepperKind::FeynmanKernel}) {
        const PropagationConfig c = box_config(513, 1e-3, 300, {0.2, 0.5}, kind);
        const PropagationResult r = propagate_with_absorption(start(c, {kHalf, kHalf}), c);
        const auto& s = r.curve.survival();
        for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] <= s[i - 1]);
        CHECK(s.back() < 1.0);
        CHECK(s.back() > 0.0);
    }
}

TEST_CASE("psi carries the survival as its norm") {
    const PropagationConfig c = box_config(257, 1e-3, 100, {0.5, 0.5});
    const PropagationResult r = propagate_with_absorption(start(c, {kHalf, kHalf}), c);
    CHECK_THAT(l2_norm_sq(r.final_state.psi()), WithinRel(r.final_state.survival * l2_norm_sq(r.final_state.kernel), 1e-14));
    CHECK_THAT(l2_norm_sq(r.final_state.kernel), WithinAbs(1.0, 1e-10));
}

TEST_CASE("history stride") {
    PropagationConfig c = box_config(129, 1e-3, 20, {0.0, 0.0});
    c.history_stride = 5;
    const PropagationResult r = propagate_with_absorption(start(c, {1.0}), c);
    REQUIRE(r.history.size() == 5);
    CHECK(r.history.front().time == 0.0);
    CHECK_THAT(r.history.back().time, WithinRel(0.02, 1e-12));
}

TEST_CASE("survival underflow stops the run") {
    const PropagationConfig c = box_config(129, 1e-2, 1000, {1e4, 1e4});
    const PropagationResult r = propagate_with_absorption(start(c, {1.0}), c);
    CHECK(r.truncated);
    CHECK(r.coarse_steps > 0);
    CHECK(r.curve.size() < 1001);
    CHECK(r.curve.survival().back() >= kSurvivalFloor);
}

TEST_CASE("combined cavity decay") {
    SECTION("shared time grid: pointwise product") {
        std::vector<double> t, a, b;
        for (int i = 0; i <= 100; ++i) {
            t.push_back(0.01 * i);
            a.push_back(std::exp(-0.7 * t.back()));
            b.push_back(std::exp(-1.9 * t.back() + 0.1 * std::sin(5.0 * t.back()) * t.back()));
        }
        for (std::size_t i = 1; i < b.size(); ++i) b[i] = std::min(b[i], b[i - 1]);
        const SurvivalCurve tr = SurvivalCurve::from_survival(t, a), ax = SurvivalCurve::from_survival(t, b);
        const SurvivalCurve c = combined_cavity_decay(tr, ax);
        REQUIRE(c.size() == t.size());
        for (std::size_t i = 0; i < t.size(); ++i) CHECK_THAT(c.survival()[i], WithinRel(a[i] * b[i], 1e-12));
        for (std::size_t i = 1; i < t.size(); ++i) CHECK(c.survival()[i] <= c.survival()[i - 1]);
    }
    SECTION("different grids: axial resampled onto transverse nodes") {
        std::vector<double> t1, a, t2, b;
        for (int i = 0; i <= 10; ++i) {
            t1.push_back(0.1 * i);
            a.push_back(std::exp(-t1.back()));
        }
        for (int i = 0; i <= 40; ++i) {
            t2.push_back(0.02 * i);
            b.push_back(1.0 - 0.5 * t2.back());
        }
        const SurvivalCurve c =
            combined_cavity_decay(SurvivalCurve::from_survival(t1, a), SurvivalCurve::from_survival(t2, b));
        CHECK_THAT(c.times().back(), WithinRel(0.8, 1e-12));
        CHECK_THAT(c.at(0.5), WithinRel(std::exp(-0.5) * 0.75, 1e-12));
    }
    SECTION("disjoint ranges are rejected") {
        const SurvivalCurve x = SurvivalCurve::from_survival({0.0, 1.0}, {1.0, 0.5});
        const SurvivalCurve y = SurvivalCurve::from_survival({2.0, 3.0}, {1.0, 0.5});
        CHECK_THROWS_AS(combined_cavity_decay(x, y), ArgumentError);
    }
}
