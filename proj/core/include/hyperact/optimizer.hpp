#pragma once

#include <cstdint>
#include <vector>

#include "hyperact/matrix.hpp"

namespace hyperact {

enum class OptimizerKind { RAdam, Adam };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::RAdam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void validate() const;
};

/// Adaptive-moment optimizer over a fixed parameter list.
///
/// Per step t (1-based), with gradient g per coordinate:
///   m <- beta1*m + (1-beta1)*g
///   v <- beta2*v + (1-beta2)*g^2
///   m_hat = m / (1 - beta1^t)
///
/// Adam:   theta -= lr * m_hat / (sqrt(v / (1 - beta2^t)) + epsilon)
///
/// RAdam rectifies the variance estimate instead of warming up:
///   rho_inf = 2/(1-beta2) - 1
///   rho_t   = rho_inf - 2*t*beta2^t / (1 - beta2^t)
///   if rho_t > 4:
///     r_t = sqrt( ((rho_t-4)(rho_t-2)rho_inf) / ((rho_inf-4)(rho_inf-2)rho_t) )
///     theta -= lr * r_t * m_hat / (sqrt(v / (1 - beta2^t)) + epsilon)
///   else:
///     theta -= lr * m_hat            (un-adapted momentum step)
class Optimizer {
public:
    Optimizer(OptimizerConfig config, std::vector<Matrix*> params);

    /// One update; `grads` matches the constructor's parameter order.
    void step(const std::vector<const Matrix*>& grads);

    std::size_t steps_taken() const { return t_; }
    const OptimizerConfig& config() const { return config_; }

private:
    OptimizerConfig config_;
    std::vector<Matrix*> params_;
    std::vector<Matrix> first_moment_;
    std::vector<Matrix> second_moment_;
    std::size_t t_ = 0;
};

}  // namespace hyperact
