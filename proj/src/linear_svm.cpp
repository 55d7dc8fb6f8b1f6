#include "advactive/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "advactive/errors.hpp"

namespace advactive {

void SolverConfig::validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("solver C must be positive and finite");
    if (!(tolerance > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (max_epochs == 0) throw ConfigError("solver max_epochs must be positive");
}

double LinearModel::decision(std::span<const double> x) const {
    if (x.size() != weights.size()) {
        std::ostringstream msg;
        msg << "dimension mismatch: model has " << weights.size() << " weights, input has " << x.size();
        throw ValidationError(msg.str());
    }
    return dot(weights, x) + bias;
}

double LinearModel::weight_norm() const { return std::sqrt(dot(weights, weights)); }

AugmentedGram::AugmentedGram(std::span<const FeatureVector* const> points) : n_(points.size()), k_(n_ * n_) {
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
            const double v = dot(*points[i], *points[j]) + 1.0;
            k_[i * n_ + j] = v;
            k_[j * n_ + i] = v;
        }
    }
}

AugmentedGram AugmentedGram::with_point(std::span<const double> cross, double self) const {
    AugmentedGram out;
    out.n_ = n_ + 1;
    out.k_.resize(out.n_ * out.n_);
    for (std::size_t i = 0; i < n_; ++i) {
        std::memcpy(out.k_.data() + i * out.n_, k_.data() + i * n_, n_ * sizeof(double));
        out.k_[i * out.n_ + n_] = cross[i] + 1.0;
        out.k_[n_ * out.n_ + i] = cross[i] + 1.0;
    }
    out.k_[n_ * out.n_ + n_] = self + 1.0;
    return out;
}

namespace {

double projected_gradient(double g, double a, double c) {
    if (a <= 0.0) return std::min(g, 0.0);
    if (a >= c) return std::max(g, 0.0);
    return g;
}

void exact_gradient(const AugmentedGram& gram, std::span<const double> y, std::span<const double> alpha,
                    std::vector<double>& g) {
    const std::size_t n = gram.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = gram.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += y[j] * alpha[j] * row[j];
        g[i] = y[i] * s - 1.0;
    }
}

double kkt_residual(std::span<const double> g, std::span<const double> alpha, double c) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(projected_gradient(g[i], alpha[i], c)));
    return worst;
}

// In-place Cholesky of a dense SPD matrix (lower triangle). Returns the index of the first
// pivot that is not clearly positive, or n on success.
std::size_t cholesky(std::vector<double>& a, std::size_t n) {
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, a[i * n + i]);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 1e-10 * scale)) return j;
        d = std::sqrt(d);
        a[j * n + j] = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = v / d;
        }
    }
    return n;
}

void cholesky_solve(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= l[i * n + k] * b[k];
        b[i] = v / l[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double v = b[i];
        for (std::size_t k = i + 1; k < n; ++k) v -= l[k * n + i] * b[k];
        b[i] = v / l[i * n + i];
    }
}

// Primal active-set steps on the face defined by the current bounded coordinates: solve
// for the free coordinates, and if that leaves the box move as far as feasible toward it,
// pin the blocking coordinate to its bound and repeat. A singular face is left along its
// null direction, or the offending coordinate is held. Never raises the dual objective.
void polish_free_set(const AugmentedGram& gram, std::span<const double> y, double c, std::vector<double>& alpha) {
    const std::size_t n = gram.size();
    std::vector<char> held(n, 0);
    std::size_t pass = 0;
    while (pass < n) {
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n; ++i)
            if (!held[i] && alpha[i] > 0.0 && alpha[i] < c) free.push_back(i);
        if (free.empty()) return;
        const std::size_t m = free.size();

        std::vector<char> in_free(n, 0);
        for (const auto i : free) in_free[i] = 1;
        std::vector<double> q(m * m);
        std::vector<double> target(m);
        for (std::size_t a = 0; a < m; ++a) {
            const std::size_t i = free[a];
            const auto row = gram.row(i);
            for (std::size_t b = 0; b < m; ++b) q[a * m + b] = y[i] * y[free[b]] * row[free[b]];
            double r = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (!in_free[j] && alpha[j] > 0.0) r -= y[i] * y[j] * row[j] * alpha[j];
            target[a] = r;
        }
        const std::vector<double> q0 = q;
        const std::size_t bad = cholesky(q, m);
        if (bad < m) {
            // Free column `bad` depends on the earlier ones. The objective is nearly linear
            // along the null vector, so walk downhill on it until something hits a bound.
            std::vector<double> v(m, 0.0);
            v[bad] = 1.0;
            for (std::size_t k = bad; k-- > 0;) {
                double s = q[bad * m + k];
                for (std::size_t l = k + 1; l < bad; ++l) s += q[l * m + k] * v[l];
                v[k] = -s / q[k * m + k];
            }
            double gv = 0.0;
            double curv = 0.0;
            for (std::size_t a = 0; a <= bad; ++a) {
                if (v[a] == 0.0) continue;
                const std::size_t i = free[a];
                const auto row = gram.row(i);
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += y[j] * alpha[j] * row[j];
                gv += v[a] * (y[i] * s - 1.0);
                for (std::size_t b = 0; b <= bad; ++b) curv += v[a] * v[b] * q0[a * m + b];
            }
            if (gv == 0.0) {
                held[free[bad]] = 1;
                continue;
            }
            const double dir = gv > 0.0 ? -1.0 : 1.0;
            double step = std::numeric_limits<double>::infinity();
            std::size_t blocking = m;
            for (std::size_t a = 0; a <= bad; ++a) {
                const double d = dir * v[a];
                if (d == 0.0) continue;
                const double cur = alpha[free[a]];
                const double limit = d > 0.0 ? (c - cur) / d : cur / -d;
                if (limit < step) {
                    step = limit;
                    blocking = a;
                }
            }
            if (curv > 0.0 && std::abs(gv) / curv < step) {
                step = std::abs(gv) / curv;
                blocking = m;
            }
            for (std::size_t a = 0; a <= bad; ++a)
                alpha[free[a]] = std::clamp(alpha[free[a]] + step * dir * v[a], 0.0, c);
            if (blocking < m)
                alpha[free[blocking]] = dir * v[blocking] > 0.0 ? c : 0.0;
            else
                held[free[bad]] = 1;
            continue;
        }
        ++pass;
        cholesky_solve(q, m, target);

        double step = 1.0;
        std::size_t blocking = m;
        for (std::size_t a = 0; a < m; ++a) {
            const double cur = alpha[free[a]];
            double limit = 1.0;
            if (target[a] <= 0.0)
                limit = cur / (cur - target[a]);
            else if (target[a] >= c)
                limit = (c - cur) / (target[a] - cur);
            if (limit < step) {
                step = limit;
                blocking = a;
            }
        }
        for (std::size_t a = 0; a < m; ++a) alpha[free[a]] += step * (target[a] - alpha[free[a]]);
        if (blocking == m) return;
        alpha[free[blocking]] = target[blocking] <= 0.0 ? 0.0 : c;
        for (std::size_t a = 0; a < m; ++a) alpha[free[a]] = std::clamp(alpha[free[a]], 0.0, c);
    }
}

}  // namespace

DualSolution solve_dual(const AugmentedGram& gram, std::span<const Label> labels, const SolverConfig& config,
                        std::span<const double> warm_start) {
    const std::size_t n = gram.size();
    if (labels.size() != n) throw ValidationError("label count does not match Gram size");
    const double c = config.c;

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = sign_of(labels[i]);

    DualSolution sol;
    sol.alpha.assign(n, 0.0);
    for (std::size_t i = 0; i < std::min(n, warm_start.size()); ++i) sol.alpha[i] = std::clamp(warm_start[i], 0.0, c);
    auto& alpha = sol.alpha;

    std::vector<double> g(n);
    exact_gradient(gram, y, alpha, g);

    // Coordinate descent finds the active set quickly but converges slowly inside it when
    // points nearly coincide; a direct solve on the free set finishes the job.
    std::vector<double> trial;
    std::vector<double> trial_g(n);
    auto status = [c](double a) { return a <= 0.0 ? 0 : (a >= c ? 2 : 1); };
    std::size_t polish_after = 0;

    while (sol.epochs < config.max_epochs) {
        double worst = 0.0;
        bool pattern_changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double pg = projected_gradient(g[i], alpha[i], c);
            worst = std::max(worst, std::abs(pg));
            if (pg == 0.0) continue;
            const double old = alpha[i];
            alpha[i] = std::clamp(old - g[i] / gram(i, i), 0.0, c);
            pattern_changed = pattern_changed || status(old) != status(alpha[i]);
            const double step = (alpha[i] - old) * y[i];
            if (step == 0.0) continue;
            const auto row = gram.row(i);
            for (std::size_t j = 0; j < n; ++j) g[j] += step * y[j] * row[j];
        }
        ++sol.epochs;
        if (worst > config.tolerance && sol.epochs >= polish_after) {
            polish_after = sol.epochs + (pattern_changed ? 4 : 8);
            trial = alpha;
            polish_free_set(gram, y, c, trial);
            if (dual_objective(gram, labels, trial) <= dual_objective(gram, labels, alpha)) {
                exact_gradient(gram, y, trial, trial_g);
                alpha.swap(trial);
                g.swap(trial_g);
                if (kkt_residual(g, alpha, c) <= config.tolerance) {
                    sol.converged = true;
                    break;
                }
            }
        }
        if (worst <= config.tolerance) {
            // Incremental updates drift; confirm on a fresh gradient.
            exact_gradient(gram, y, alpha, g);
            if (kkt_residual(g, alpha, c) <= config.tolerance) {
                sol.converged = true;
                break;
            }
        }
    }
    if (!sol.converged) exact_gradient(gram, y, alpha, g);
    sol.kkt_residual = kkt_residual(g, alpha, c);
    sol.converged = sol.kkt_residual <= config.tolerance;
    return sol;
}

LinearModel model_from_dual(std::span<const FeatureVector* const> points, std::span<const Label> labels,
                            std::span<const double> alpha) {
    LinearModel model;
    if (points.empty()) return model;
    model.weights.assign(points.front()->size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (alpha[i] == 0.0) continue;
        const double coef = alpha[i] * sign_of(labels[i]);
        const auto& x = *points[i];
        for (std::size_t k = 0; k < x.size(); ++k) model.weights[k] += coef * x[k];
        model.bias += coef;
    }
    return model;
}

double dual_objective(const AugmentedGram& gram, std::span<const Label> labels, std::span<const double> alpha) {
    const std::size_t n = gram.size();
    double quad = 0.0;
    double lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lin += alpha[i];
        for (std::size_t j = 0; j < n; ++j)
            quad += alpha[i] * alpha[j] * sign_of(labels[i]) * sign_of(labels[j]) * gram(i, j);
    }
    return 0.5 * quad - lin;
}

double primal_objective(const LinearModel& model, std::span<const FeatureVector* const> points,
                        std::span<const Label> labels, double c) {
    double loss = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        loss += std::max(0.0, 1.0 - sign_of(labels[i]) * model.decision(*points[i]));
    return 0.5 * (dot(model.weights, model.weights) + model.bias * model.bias) + c * loss;
}

SvmTrainer::SvmTrainer(SolverConfig config) : config_(config) { config_.validate(); }

LinearModel SvmTrainer::train(std::span<const Sample> samples) const {
    if (samples.empty()) throw TrainingError("no training samples");
    const std::size_t d = samples.front().features.size();
    std::vector<const FeatureVector*> points;
    std::vector<Label> labels;
    points.reserve(samples.size());
    labels.reserve(samples.size());
    bool has_pos = false;
    bool has_neg = false;
    for (const auto& s : samples) {
        if (!s.label) throw ValidationError("training sample " + std::to_string(s.id) + " has no label");
        if (s.features.size() != d) throw ValidationError("training samples have mixed dimensions");
        if (!all_finite(s.features)) throw ValidationError("training sample " + std::to_string(s.id) + " is not finite");
        (*s.label == Label::positive ? has_pos : has_neg) = true;
        points.push_back(&s.features);
        labels.push_back(*s.label);
    }
    if (!has_pos || !has_neg) throw TrainingError("training data contains a single class");

    const AugmentedGram gram(points);
    const DualSolution sol = solve_dual(gram, labels, config_);
    return model_from_dual(points, labels, sol.alpha);
}

LinearModel train(std::span<const Sample> samples, const SolverConfig& config) {
    return SvmTrainer(config).train(samples);
}

double test_error(const LinearModel& model, std::span<const Sample> test) {
    if (test.empty()) throw ValidationError("empty test set");
    std::size_t wrong = 0;
    for (const auto& s : test) {
        if (!s.label) throw ValidationError("test sample " + std::to_string(s.id) + " has no label");
        if (model.predict(s.features) != *s.label) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(test.size());
}

std::uint64_t model_hash(const LinearModel& model) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto feed = [&h](double v) {
        std::int64_t q = 0;
        if (std::abs(v) < 9.0e6) {
            q = std::llround(v * 1e12);
        } else {
            std::memcpy(&q, &v, sizeof q);
        }
        for (int k = 0; k < 8; ++k) {
            h ^= static_cast<std::uint64_t>(q >> (8 * k)) & 0xFFu;
            h *= 0x100000001B3ULL;
        }
    };
    for (double w : model.weights) feed(w);
    feed(model.bias);
    return h;
}

}  // namespace advactive
