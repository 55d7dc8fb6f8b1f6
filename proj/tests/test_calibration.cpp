#include <doctest.h>

#include <cmath>
#include <random>

#include "advactive/calibration.hpp"
#include "advactive/errors.hpp"
#include "helpers.hpp"
#include "oracles/utility_direct.hpp"

using namespace advactive;

namespace {

std::vector<Label> to_labels(const std::vector<int>& y) {
    std::vector<Label> out;
    for (int v : y) out.push_back(v > 0 ? Label::positive : Label::negative);
    return out;
}

}  // namespace

TEST_CASE("calibration: symmetric validation margins give 0.5 at f = 0") {
    const std::vector<double> f{1.5, 0.7, -0.3, 2.0, -1.5, -0.7, 0.3, -2.0};
    const auto y = to_labels({1, 1, 1, -1, -1, -1, -1, 1});
    const auto fit = fit_platt(f, y);
    CHECK_FALSE(fit.degenerate);
    CHECK(std::abs(platt_positive(fit.params, 0.0) - 0.5) < 1e-6);
}

TEST_CASE("calibration: fit matches a grid scan refined by Newton") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> f;
        std::vector<int> y;
        for (int i = 0; i < 10; ++i) {
            const int yi = i < 4 + rep % 3 ? 1 : -1;
            f.push_back(1.2 * yi + 1.3 * g(rng));
            y.push_back(yi);
        }
        double best = INFINITY, ba = 0, bb = 0;
        for (int i = 0; i <= 400; ++i) {
            for (int j = 0; j <= 400; ++j) {
                const double a = -10.0 + 12.0 * i / 400.0;
                const double b = -5.0 + 10.0 * j / 400.0;
                const double v = oracle::sigmoid_nll(f, y, a, b);
                if (v < best) {
                    best = v;
                    ba = a;
                    bb = b;
                }
            }
        }
        const auto ref = oracle::fit_sigmoid(f, y, ba, bb);
        const auto fit = fit_platt(f, to_labels(y));
        CHECK(std::abs(fit.params.a - ref.a) < 1e-6);
        CHECK(std::abs(fit.params.b - ref.b) < 1e-6);
    }
}

TEST_CASE("calibration: separated validation set") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> f;
    std::vector<Label> y;
    for (int i = 0; i < 200; ++i) {
        f.push_back(5.0 + u(rng));
        y.push_back(Label::positive);
        f.push_back(-5.0 - u(rng));
        y.push_back(Label::negative);
    }
    const auto fit = fit_platt(f, y);
    CHECK(fit.params.a < -0.5);
    const CalibratedClassifier clf(LinearModel{{1.0}, 0.0}, fit.params);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(clf.posterior_at(f[i], y[i]) >= 0.99);
}

TEST_CASE("calibration: posterior examples") {
    const CalibratedClassifier clf(LinearModel{{1.0, 0.0}, 0.0}, PlattParams{-1.0, 0.0});
    CHECK(clf.posterior(std::vector<double>{0.0, 5.0}, Label::positive) == 0.5);
    CHECK(clf.posterior(std::vector<double>{std::log(3.0), 0.0}, Label::positive) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(clf.posterior(std::vector<double>{std::log(3.0), 0.0}, Label::negative) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(clf.posterior(std::vector<double>{1.0}, Label::positive), ValidationError);
}

TEST_CASE("calibration: complement law and monotonicity") {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> g(0.0, 3.0);
    const CalibratedClassifier clf(LinearModel{{0.7, -1.1}, 0.2}, PlattParams{-1.7, 0.3});
    std::vector<double> margins;
    for (int i = 0; i < 1000; ++i) {
        const std::vector<double> x{g(rng), g(rng)};
        CHECK(clf.posterior(x, Label::positive) + clf.posterior(x, Label::negative) == 1.0);
        margins.push_back(clf.model().decision(x));
    }
    std::sort(margins.begin(), margins.end());
    for (std::size_t i = 1; i < margins.size(); ++i)
        CHECK(clf.posterior_at(margins[i], Label::positive) >= clf.posterior_at(margins[i - 1], Label::positive));
}

TEST_CASE("calibration: extreme margins stay finite") {
    const PlattParams p{-5.0, 0.0};
    CHECK(platt_positive(p, 1e6) > 0.999);
    CHECK(platt_positive(p, -1e6) >= 0.0);
    CHECK(std::isfinite(platt_positive(p, 1e300)));
    CHECK(std::isfinite(platt_objective(p, std::vector<double>{1e3, -1e3}, std::vector<Label>{Label::negative, Label::positive})));
}

TEST_CASE("calibration: Newton trace never increases") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> f;
        std::vector<Label> y;
        for (int i = 0; i < 10; ++i) {
            const int yi = i % 2 ? 1 : -1;
            f.push_back(3.0 * yi * (rep % 4) + g(rng));
            y.push_back(yi > 0 ? Label::positive : Label::negative);
        }
        const auto fit = fit_platt(f, y);
        REQUIRE_FALSE(fit.objective_trace.empty());
        for (std::size_t k = 1; k < fit.objective_trace.size(); ++k)
            CHECK(fit.objective_trace[k] <= fit.objective_trace[k - 1]);
        const auto grad = platt_gradient(fit.params, f, y);
        CHECK(std::hypot(grad[0], grad[1]) <= 1e-8);
    }
}

TEST_CASE("calibration: analytic gradient matches central differences") {
    std::mt19937_64 rng(43);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> f;
    std::vector<Label> y;
    for (int i = 0; i < 10; ++i) {
        f.push_back(g(rng) * 2.0);
        y.push_back(i < 5 ? Label::positive : Label::negative);
    }
    std::uniform_real_distribution<double> ua(-4.0, 1.0), ub(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        const PlattParams p{ua(rng), ub(rng)};
        const auto grad = platt_gradient(p, f, y);
        const double h = 1e-5;
        const double da = (platt_objective({p.a + h, p.b}, f, y) - platt_objective({p.a - h, p.b}, f, y)) / (2 * h);
        const double db = (platt_objective({p.a, p.b + h}, f, y) - platt_objective({p.a, p.b - h}, f, y)) / (2 * h);
        CHECK(std::abs(grad[0] - da) <= 1e-5 * std::max(1.0, std::abs(da)));
        CHECK(std::abs(grad[1] - db) <= 1e-5 * std::max(1.0, std::abs(db)));
    }
}

TEST_CASE("calibration: degenerate and single-class validation sets") {
    const std::vector<double> same{0.4, 0.4, 0.4, 0.4};
    const std::vector<Label> y{Label::positive, Label::positive, Label::positive, Label::negative};
    const auto fit = fit_platt(same, y);
    CHECK(fit.degenerate);
    CHECK(fit.params.a == 0.0);
    // smoothed targets 4/5 (three times) and 1/3: base rate (12/5 + 1/3) / 4
    const double r = (3.0 * 4.0 / 5.0 + 1.0 / 3.0) / 4.0;
    CHECK(platt_positive(fit.params, 123.0) == doctest::Approx(r).epsilon(1e-12));

    const std::vector<double> f{1.0, 2.0, 3.0};
    const std::vector<Label> pos(3, Label::positive);
    const auto single = fit_platt(f, pos);
    CHECK(std::isfinite(single.params.a));
    CHECK(std::isfinite(single.params.b));
    for (double m : f) {
        const double p = platt_positive(single.params, m);
        CHECK((p > 0.0 && p < 1.0));
    }
}

TEST_CASE("calibration: input errors") {
    CHECK_THROWS_AS(fit_platt(std::vector<double>{}, std::vector<Label>{}), ValidationError);
    CHECK_THROWS_AS(fit_platt(std::vector<double>{1.0}, std::vector<Label>{}), ValidationError);
    CHECK_THROWS_AS(fit_platt(std::vector<double>{NAN, 1.0}, std::vector<Label>{Label::positive, Label::negative}),
                    ValidationError);
    CHECK_THROWS_AS(PlattCalibrator(std::vector<Sample>{}), ValidationError);
    CHECK_THROWS_AS(PlattCalibrator(std::vector<Sample>{testing::unlabeled(1, {0.0})}), ValidationError);
}

TEST_CASE("calibration: calibrator pairs a model with its own sigmoid") {
    const PlattCalibrator cal({testing::labeled(1, {1.0}, 1), testing::labeled(2, {-1.0}, -1),
                               testing::labeled(3, {0.5}, 1), testing::labeled(4, {-2.0}, -1)});
    const LinearModel m{{2.0}, 0.1};
    const auto clf = cal.calibrate(m);
    const auto direct = fit_platt(m, cal.validation()).params;
    CHECK(clf.platt().a == direct.a);
    CHECK(clf.platt().b == direct.b);
    CHECK(clf.model().weights == m.weights);
}
