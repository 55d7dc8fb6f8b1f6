#include "advactive/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "advactive/errors.hpp"

namespace advactive {
namespace {

constexpr double kGradientTolerance = 1e-10;
constexpr std::size_t kMaxIterations = 200;
constexpr double kMinStep = 1e-10;
constexpr double kHessianRidge = 1e-12;

struct Targets {
    std::vector<double> t;
    double positive_rate = 0.0;  // mean smoothed target
};

Targets smoothed_targets(std::span<const Label> labels) {
    double n_pos = 0.0;
    double n_neg = 0.0;
    for (Label y : labels) (y == Label::positive ? n_pos : n_neg) += 1.0;
    const double hi = (n_pos + 1.0) / (n_pos + 2.0);
    const double lo = 1.0 / (n_neg + 2.0);
    Targets out;
    out.t.reserve(labels.size());
    for (Label y : labels) out.t.push_back(y == Label::positive ? hi : lo);
    out.positive_rate = (n_pos * hi + n_neg * lo) / (n_pos + n_neg);
    return out;
}

// p = 1/(1+e^z) and 1-p without overflow.
void sigmoid_pair(double z, double& p, double& q) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        p = e / (1.0 + e);
        q = 1.0 / (1.0 + e);
    } else {
        const double e = std::exp(z);
        p = 1.0 / (1.0 + e);
        q = e / (1.0 + e);
    }
}

double objective_with(PlattParams params, std::span<const double> f, std::span<const double> t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double z = params.a * f[i] + params.b;
        if (z >= 0.0)
            sum += t[i] * z + std::log1p(std::exp(-z));
        else
            sum += (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return sum;
}

std::array<double, 2> gradient_with(PlattParams params, std::span<const double> f, std::span<const double> t) {
    std::array<double, 2> g{0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) {
        double p = 0.0;
        double q = 0.0;
        sigmoid_pair(params.a * f[i] + params.b, p, q);
        g[0] += f[i] * (t[i] - p);
        g[1] += t[i] - p;
    }
    return g;
}

void check_inputs(std::span<const double> margins, std::span<const Label> labels) {
    if (margins.empty()) throw ValidationError("calibration set is empty");
    if (margins.size() != labels.size()) throw ValidationError("margin and label counts differ");
    if (!all_finite(margins)) throw ValidationError("non-finite margin in calibration set");
}

}  // namespace

double platt_positive(PlattParams params, double margin) {
    const double z = std::clamp(params.a * margin + params.b, -500.0, 500.0);
    return 1.0 / (1.0 + std::exp(z));
}

double platt_objective(PlattParams params, std::span<const double> margins, std::span<const Label> labels) {
    check_inputs(margins, labels);
    return objective_with(params, margins, smoothed_targets(labels).t);
}

std::array<double, 2> platt_gradient(PlattParams params, std::span<const double> margins,
                                     std::span<const Label> labels) {
    check_inputs(margins, labels);
    return gradient_with(params, margins, smoothed_targets(labels).t);
}

PlattFit fit_platt(std::span<const double> margins, std::span<const Label> labels) {
    check_inputs(margins, labels);
    const Targets targets = smoothed_targets(labels);
    const auto& t = targets.t;
    const auto [lo, hi] = std::minmax_element(margins.begin(), margins.end());

    PlattFit fit;
    if (*lo == *hi) {
        fit.degenerate = true;
        fit.params = {0.0, std::log((1.0 - targets.positive_rate) / targets.positive_rate)};
        fit.objective_trace.push_back(objective_with(fit.params, margins, t));
        return fit;
    }

    double n_pos = 0.0;
    for (Label y : labels) n_pos += y == Label::positive ? 1.0 : 0.0;
    const double n_neg = static_cast<double>(labels.size()) - n_pos;
    PlattParams cur{0.0, std::log((n_neg + 1.0) / (n_pos + 1.0))};
    double fval = objective_with(cur, margins, t);
    fit.objective_trace.push_back(fval);

    for (; fit.iterations < kMaxIterations; ++fit.iterations) {
        double h11 = kHessianRidge;
        double h22 = kHessianRidge;
        double h21 = 0.0;
        double g1 = 0.0;
        double g2 = 0.0;
        for (std::size_t i = 0; i < margins.size(); ++i) {
            double p = 0.0;
            double q = 0.0;
            sigmoid_pair(cur.a * margins[i] + cur.b, p, q);
            const double d2 = p * q;
            h11 += margins[i] * margins[i] * d2;
            h22 += d2;
            h21 += margins[i] * d2;
            const double d1 = t[i] - p;
            g1 += margins[i] * d1;
            g2 += d1;
        }
        const double det = h11 * h22 - h21 * h21;
        const double da = -(h22 * g1 - h21 * g2) / det;
        const double db = -(-h21 * g1 + h11 * g2) / det;
        const double gnorm = std::hypot(g1, g2);
        // Near the optimum the objective stops resolving progress before the gradient does,
        // so both exits end with one full Newton step, kept if it shrinks the gradient.
        auto finish = [&] {
            const PlattParams next{cur.a + da, cur.b + db};
            const auto g = gradient_with(next, margins, t);
            if (std::hypot(g[0], g[1]) < gnorm) cur = next;
        };
        if (gnorm <= kGradientTolerance) {
            finish();
            break;
        }
        const double slope = g1 * da + g2 * db;

        double step = 1.0;
        bool accepted = false;
        while (step >= kMinStep) {
            const PlattParams next{cur.a + step * da, cur.b + step * db};
            const double nval = objective_with(next, margins, t);
            if (nval < fval + 1e-4 * step * slope) {
                cur = next;
                fval = nval;
                accepted = true;
                break;
            }
            step /= 2.0;
        }
        if (!accepted) {
            finish();
            break;
        }
        fit.objective_trace.push_back(fval);
    }
    fit.params = cur;
    return fit;
}

PlattFit fit_platt(const LinearModel& model, std::span<const Sample> validation) {
    std::vector<double> margins;
    std::vector<Label> labels;
    margins.reserve(validation.size());
    labels.reserve(validation.size());
    for (const auto& s : validation) {
        if (!s.label) throw ValidationError("validation sample " + std::to_string(s.id) + " has no label");
        margins.push_back(model.decision(s.features));
        labels.push_back(*s.label);
    }
    return fit_platt(margins, labels);
}

double CalibratedClassifier::posterior_at(double margin, Label y) const {
    const double p = platt_positive(platt_, margin);
    return y == Label::positive ? p : 1.0 - p;
}

PlattCalibrator::PlattCalibrator(std::vector<Sample> validation) : validation_(std::move(validation)) {
    if (validation_.empty()) throw ValidationError("validation set is empty");
    labels_.reserve(validation_.size());
    for (const auto& s : validation_) {
        if (!s.label) throw ValidationError("validation sample " + std::to_string(s.id) + " has no label");
        labels_.push_back(*s.label);
    }
}

CalibratedClassifier PlattCalibrator::calibrate(LinearModel model) const {
    std::vector<double> margins;
    margins.reserve(validation_.size());
    for (const auto& s : validation_) margins.push_back(model.decision(s.features));
    const PlattParams params = fit(margins);
    return CalibratedClassifier(std::move(model), params);
}

PlattParams PlattCalibrator::fit(std::span<const double> validation_margins) const {
    return fit_platt(validation_margins, labels_).params;
}

}  // namespace advactive
