#pragma once

#include <functional>
#include <vector>

#include "hyperact/matrix.hpp"

namespace hyperact {

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::size_t worst_param = 0;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
};

/// Central-difference verification of analytic gradients.
///
/// `loss` must be a pure, deterministic function of the current contents of
/// `params` (dropout disabled or seed-pinned). `analytic` holds one gradient
/// per parameter, same order and shape. Every coordinate is perturbed by
/// +-eps and the relative error
///     |analytic - numeric| / max(1, |analytic|, |numeric|)
/// is maximized over all coordinates. Throws NumericError if the loss
/// evaluates to a non-finite value.
GradCheckReport gradient_check(const std::function<double()>& loss,
                               const std::vector<Matrix*>& params,
                               const std::vector<Matrix>& analytic,
                               double eps);

}  // namespace hyperact
