#pragma once

// Two-class soft-margin linear SVM
//
//   min_w,b  1/2 ||(w,b)||^2 + C * sum_i max(0, 1 - y_i (w.x_i + b))
//
// solved in the dual by cyclic coordinate descent over the box 0 <= alpha_i <= C.
// The bias is the weight of a constant unit feature appended to every point,
// so it is regularized together with w.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "advactive/types.hpp"

namespace advactive {

struct SolverConfig {
    double c = 1.0;
    double tolerance = 1e-8;  // max |projected gradient| at termination
    std::size_t max_epochs = 100000;

    void validate() const;
    bool operator==(const SolverConfig&) const = default;
};

struct LinearModel {
    FeatureVector weights;
    double bias = 0.0;

    /// f(x) = w.x + b. Throws ValidationError on dimension mismatch.
    double decision(std::span<const double> x) const;
    Label predict(std::span<const double> x) const { return label_from_margin(decision(x)); }
    double weight_norm() const;
    std::size_t dimension() const { return weights.size(); }
};

/// Augmented kernel K_ij = x_i.x_j + 1 over an ordered point set (row-major, symmetric).
class AugmentedGram {
public:
    AugmentedGram() = default;
    explicit AugmentedGram(std::span<const FeatureVector* const> points);

    /// Copy with one more point appended. `cross[j]` must hold x_new.x_j for the
    /// existing points and `self` the squared norm of x_new.
    AugmentedGram with_point(std::span<const double> cross, double self) const;

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return k_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const { return {k_.data() + i * n_, n_}; }

private:
    std::size_t n_ = 0;
    std::vector<double> k_;
};

struct DualSolution {
    std::vector<double> alpha;
    std::size_t epochs = 0;
    double kkt_residual = 0.0;
    bool converged = false;
};

/// Coordinate descent on 1/2 a'Qa - e'a, Q_ij = y_i y_j K_ij, starting from `warm_start`
/// (clamped into the box) or from zero.
DualSolution solve_dual(const AugmentedGram& gram, std::span<const Label> labels, const SolverConfig& config,
                        std::span<const double> warm_start = {});

/// w = sum_i alpha_i y_i x_i, b = sum_i alpha_i y_i.
LinearModel model_from_dual(std::span<const FeatureVector* const> points, std::span<const Label> labels,
                            std::span<const double> alpha);

double dual_objective(const AugmentedGram& gram, std::span<const Label> labels, std::span<const double> alpha);
double primal_objective(const LinearModel& model, std::span<const FeatureVector* const> points,
                        std::span<const Label> labels, double c);

class SvmTrainer {
public:
    explicit SvmTrainer(SolverConfig config = {});

    /// Trains on labeled samples in the given order.
    /// Throws TrainingError for single-class input, ValidationError for unlabeled or
    /// non-finite samples and mixed dimensions.
    LinearModel train(std::span<const Sample> samples) const;

    const SolverConfig& config() const { return config_; }

private:
    SolverConfig config_;
};

LinearModel train(std::span<const Sample> samples, const SolverConfig& config);

/// Fraction of samples with predict(x) != label. Throws ValidationError on an empty set.
double test_error(const LinearModel& model, std::span<const Sample> test);

/// FNV-1a over weights and bias quantized to multiples of 1e-12.
std::uint64_t model_hash(const LinearModel& model);

}  // namespace advactive
