#include "advactive/oracle.hpp"

#include <sstream>

#include "advactive/errors.hpp"

namespace advactive {

Label bayes_label(std::span<const double> x) {
    if (x.size() != 2) throw ValidationError("Bayes oracle expects 2-D input, got " + std::to_string(x.size()));
    return label_from_margin(x[0]);
}

SolverConfig full_oracle_solver() {
    SolverConfig config;
    config.c = 1e4;
    return config;
}

LinearModel build_full_oracle(std::span<const Sample> samples, const SolverConfig& config) {
    LinearModel model = SvmTrainer(config).train(samples);
    const double err = test_error(model, samples);
    if (err > 0.0) {
        std::ostringstream msg;
        msg << "full-data oracle has training error " << err << "; the data are not linearly separable";
        throw OracleError(msg.str());
    }
    return model;
}

std::string_view to_string(OracleKind kind) {
    return kind == OracleKind::bayes_synthetic ? "bayes_synthetic" : "fullsvm_mnist";
}

Label Oracle::label(std::span<const double> x) const {
    if (kind_ == OracleKind::bayes_synthetic) return bayes_label(x);
    return model_->predict(x);
}

Label oracle_label(const Oracle& oracle, std::span<const double> x) { return oracle.label(x); }

}  // namespace advactive
