#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lca/tensor.hpp"

namespace lca::testutil {

struct GradMismatch {
    bool ok = true;
    std::string where;
    double analytic = 0.0, numeric = 0.0;
};

// Central finite-difference check: make_loss() must rebuild the scalar loss
// graph from the current values of `inputs`. Analytic gradients come from one
// tape backward; every coordinate of every input is then perturbed by +-eps.
inline GradMismatch check_gradients(const std::function<Tensor()>& make_loss,
                                    std::vector<Tensor> inputs, double eps = 1e-5,
                                    double tol = 1e-4) {
    Tensor loss = make_loss();
    autograd::backward(loss);
    std::vector<std::vector<double>> analytic;
    analytic.reserve(inputs.size());
    for (Tensor& t : inputs) {
        analytic.push_back(t.has_grad() ? t.grad() : std::vector<double>(t.numel(), 0.0));
        t.zero_grad();
    }

    autograd::NoGradGuard guard;
    for (std::size_t ti = 0; ti < inputs.size(); ++ti) {
        std::vector<double>& vals = inputs[ti].values_mut();
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const double orig = vals[i];
            vals[i] = orig + eps;
            const double up = make_loss().scalar_value();
            vals[i] = orig - eps;
            const double down = make_loss().scalar_value();
            vals[i] = orig;
            const double fd = (up - down) / (2.0 * eps);
            const double an = analytic[ti][i];
            const double denom = std::max({std::fabs(fd), std::fabs(an), 1e-6});
            if (std::fabs(fd - an) > tol * denom) {
                return {false,
                        "input " + std::to_string(ti) + " coord " + std::to_string(i),
                        an, fd};
            }
        }
    }
    return {};
}

}  // namespace lca::testutil
