#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "advactive/linear_svm.hpp"
#include "advactive/types.hpp"

namespace advactive {

/// Sigmoid parameters: p(+1 | f) = 1 / (1 + exp(A f + B)).
struct PlattParams {
    double a = 0.0;
    double b = 0.0;
};

struct PlattFit {
    PlattParams params;
    std::size_t iterations = 0;
    bool degenerate = false;             // all margins equal; A fixed at 0
    std::vector<double> objective_trace; // objective after every accepted step, starting point first
};

/// p(+1 | f) with the exponent clamped to [-500, 500].
double platt_positive(PlattParams params, double margin);

/// Negative log-likelihood of Platt's smoothed targets
/// t+ = (N+ + 1)/(N+ + 2), t- = 1/(N- + 2).
double platt_objective(PlattParams params, std::span<const double> margins, std::span<const Label> labels);
std::array<double, 2> platt_gradient(PlattParams params, std::span<const double> margins,
                                     std::span<const Label> labels);

/// Newton's method with backtracking from A = 0, B = log((N- + 1)/(N+ + 1)); stops at
/// gradient norm <= 1e-10 or after 200 iterations. Throws ValidationError on empty input.
PlattFit fit_platt(std::span<const double> margins, std::span<const Label> labels);
PlattFit fit_platt(const LinearModel& model, std::span<const Sample> validation);

/// A model and the sigmoid fitted to it, created together so the pair never goes stale.
class CalibratedClassifier {
public:
    CalibratedClassifier(LinearModel model, PlattParams platt) : model_(std::move(model)), platt_(platt) {}

    const LinearModel& model() const { return model_; }
    PlattParams platt() const { return platt_; }

    double posterior(std::span<const double> x, Label y) const { return posterior_at(model_.decision(x), y); }
    double posterior_at(double margin, Label y) const;

private:
    LinearModel model_;
    PlattParams platt_;
};

/// Holds the validation set V and refits the sigmoid for each new model.
class PlattCalibrator {
public:
    explicit PlattCalibrator(std::vector<Sample> validation);

    CalibratedClassifier calibrate(LinearModel model) const;
    /// Sigmoid for a model whose margins on V are already known (in V order).
    PlattParams fit(std::span<const double> validation_margins) const;

    const std::vector<Sample>& validation() const { return validation_; }

private:
    std::vector<Sample> validation_;
    std::vector<Label> labels_;
};

}  // namespace advactive
