#include "hyperact/gradcheck.hpp"

#include <cmath>

#include "hyperact/errors.hpp"

namespace hyperact {

GradCheckReport gradient_check(const std::function<double()>& loss,
                               const std::vector<Matrix*>& params,
                               const std::vector<Matrix>& analytic,
                               double eps) {
    if (eps <= 0.0) throw ConfigError("gradient_check: eps must be positive");
    if (params.size() != analytic.size()) {
        throw ShapeError("gradient_check: " + std::to_string(params.size()) +
                         " params vs " + std::to_string(analytic.size()) +
                         " analytic gradients");
    }
    auto eval = [&]() {
        double v = loss();
        if (!std::isfinite(v)) throw NumericError("gradient_check: non-finite loss");
        return v;
    };

    GradCheckReport report;
    for (std::size_t p = 0; p < params.size(); ++p) {
        Matrix& theta = *params[p];
        if (!theta.same_shape(analytic[p])) {
            throw ShapeError("gradient_check: param " + theta.shape_str() +
                             " vs gradient " + analytic[p].shape_str());
        }
        for (std::size_t i = 0; i < theta.size(); ++i) {
            double saved = theta.data()[i];
            theta.data()[i] = saved + eps;
            double up = eval();
            theta.data()[i] = saved - eps;
            double down = eval();
            theta.data()[i] = saved;

            double numeric = (up - down) / (2.0 * eps);
            double a = analytic[p].data()[i];
            double denom = std::max({1.0, std::abs(a), std::abs(numeric)});
            double rel = std::abs(a - numeric) / denom;
            if (rel > report.max_rel_error) {
                report.max_rel_error = rel;
                report.worst_param = p;
                report.worst_index = i;
                report.worst_analytic = a;
                report.worst_numeric = numeric;
            }
        }
    }
    return report;
}

}  // namespace hyperact
