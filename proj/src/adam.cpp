#include "lca/adam.hpp"

#include <cmath>

#include "lca/errors.hpp"

namespace lca {

void adam_step(NamedTensors& params, AdamState& state, double lr, const AdamOptions& opt) {
    for (auto& [name, p] : params) {
        if (!p.has_grad()) {
            throw ContractError("adam_step: parameter '" + name + "' has no gradient");
        }
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(state.step));

    for (auto& [name, p] : params) {
        const std::vector<double>& g = p.grad();
        auto& m = state.first_moment[name];
        auto& v = state.second_moment[name];
        if (m.empty()) m.assign(g.size(), 0.0);
        if (v.empty()) v.assign(g.size(), 0.0);
        if (m.size() != g.size() || v.size() != g.size()) {
            throw ContractError("adam_step: moment buffers for '" + name +
                                "' do not match the parameter shape");
        }
        std::vector<double>& theta = p.values_mut();
        for (std::size_t i = 0; i < g.size(); ++i) {
            m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * g[i];
            v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            theta[i] -= lr * m_hat / (std::sqrt(v_hat) + opt.eps);
        }
        p.zero_grad();
    }
}

}  // namespace lca
