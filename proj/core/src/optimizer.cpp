#include "hyperact/optimizer.hpp"

#include <cmath>

#include "hyperact/errors.hpp"

namespace hyperact {

void OptimizerConfig::validate() const {
    if (learning_rate < 0.0) throw ConfigError("optimizer: learning_rate must be >= 0");
    if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) {
        throw ConfigError("optimizer: betas must lie in [0, 1)");
    }
    if (epsilon <= 0.0) throw ConfigError("optimizer: epsilon must be positive");
}

Optimizer::Optimizer(OptimizerConfig config, std::vector<Matrix*> params)
    : config_(config), params_(std::move(params)) {
    config_.validate();
    first_moment_.reserve(params_.size());
    second_moment_.reserve(params_.size());
    for (Matrix* p : params_) {
        first_moment_.emplace_back(p->rows(), p->cols());
        second_moment_.emplace_back(p->rows(), p->cols());
    }
}

void Optimizer::step(const std::vector<const Matrix*>& grads) {
    if (grads.size() != params_.size()) {
        throw ShapeError("optimizer: " + std::to_string(grads.size()) + " gradients vs " +
                         std::to_string(params_.size()) + " parameters");
    }
    ++t_;
    double t = static_cast<double>(t_);
    double beta1 = config_.beta1, beta2 = config_.beta2;
    double bias1 = 1.0 - std::pow(beta1, t);
    double bias2 = 1.0 - std::pow(beta2, t);

    bool rectified = false;
    double rect = 1.0;
    if (config_.kind == OptimizerKind::RAdam) {
        double rho_inf = 2.0 / (1.0 - beta2) - 1.0;
        double rho_t = rho_inf - 2.0 * t * std::pow(beta2, t) / bias2;
        if (rho_t > 4.0) {
            rectified = true;
            rect = std::sqrt(((rho_t - 4.0) * (rho_t - 2.0) * rho_inf) /
                             ((rho_inf - 4.0) * (rho_inf - 2.0) * rho_t));
        }
    } else {
        rectified = true;
    }

    for (std::size_t p = 0; p < params_.size(); ++p) {
        Matrix& theta = *params_[p];
        const Matrix& g = *grads[p];
        if (!theta.same_shape(g)) {
            throw ShapeError("optimizer: gradient " + g.shape_str() +
                             " vs parameter " + theta.shape_str());
        }
        Matrix& m = first_moment_[p];
        Matrix& v = second_moment_[p];
        for (std::size_t i = 0; i < theta.size(); ++i) {
            double gi = g.data()[i];
            m.data()[i] = beta1 * m.data()[i] + (1.0 - beta1) * gi;
            v.data()[i] = beta2 * v.data()[i] + (1.0 - beta2) * gi * gi;
            double m_hat = m.data()[i] / bias1;
            if (rectified) {
                double denom = std::sqrt(v.data()[i] / bias2) + config_.epsilon;
                theta.data()[i] -= config_.learning_rate * rect * m_hat / denom;
            } else {
                theta.data()[i] -= config_.learning_rate * m_hat;
            }
        }
    }
}

}  // namespace hyperact
