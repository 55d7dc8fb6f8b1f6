#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "advactive/linear_svm.hpp"
#include "advactive/types.hpp"

namespace advactive {

/// Bayes rule for the synthetic task: the Y axis, x1 = 0 mapping to +1.
/// Throws ValidationError unless x is two-dimensional.
Label bayes_label(std::span<const double> x);

/// C = 1e4 as a hard-margin surrogate.
SolverConfig full_oracle_solver();

/// Linear SVM over every sample of the task. Throws OracleError if it does not
/// separate them perfectly.
LinearModel build_full_oracle(std::span<const Sample> samples, const SolverConfig& config = full_oracle_solver());

enum class OracleKind : std::uint8_t { bayes_synthetic, fullsvm_mnist };

std::string_view to_string(OracleKind kind);

class Oracle {
public:
    static Oracle bayes() { return Oracle(OracleKind::bayes_synthetic, std::nullopt); }
    static Oracle full_svm(LinearModel model) { return Oracle(OracleKind::fullsvm_mnist, std::move(model)); }

    OracleKind kind() const { return kind_; }
    Label label(std::span<const double> x) const;
    /// Frozen model for fullsvm_mnist, nullptr otherwise.
    const LinearModel* model() const { return model_ ? &*model_ : nullptr; }
    std::uint64_t fingerprint() const { return model_ ? model_hash(*model_) : 0; }

private:
    Oracle(OracleKind kind, std::optional<LinearModel> model) : kind_(kind), model_(std::move(model)) {}

    OracleKind kind_;
    std::optional<LinearModel> model_;
};

Label oracle_label(const Oracle& oracle, std::span<const double> x);

}  // namespace advactive
