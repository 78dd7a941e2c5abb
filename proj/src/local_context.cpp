#include "lca/local_context.hpp"

#include <cmath>
#include <string>

#include "lca/errors.hpp"
#include "lca/ops.hpp"

namespace lca::lctx {

double srd(std::size_t position, Span target) {
    if (target.end <= target.begin) {
        throw ContractError("srd: empty target span [" + std::to_string(target.begin) + ", " +
                            std::to_string(target.end) + ")");
    }
    const double m = static_cast<double>(target.length());
    const double mean_pos =
        (static_cast<double>(target.begin) + static_cast<double>(target.end) - 1.0) / 2.0;
    return std::fabs(static_cast<double>(position) - mean_pos) - std::floor(m / 2.0);
}

LcTagVector lc_tags(std::size_t valid_len, Span target, int alpha, std::size_t pad_len) {
    if (target.end > valid_len) {
        throw ContractError("lc_tags: target span [" + std::to_string(target.begin) + ", " +
                            std::to_string(target.end) + ") exceeds valid length " +
                            std::to_string(valid_len));
    }
    LcTagVector out;
    out.alpha = alpha;
    out.tags.assign(pad_len, 0);
    const std::size_t n = std::min(valid_len, pad_len);
    for (std::size_t i = 0; i < n; ++i) {
        out.tags[i] = srd(i, target) <= static_cast<double>(alpha) ? 1 : 0;
    }
    return out;
}

MaskMatrix cdm_mask(const LcTagVector& tags, std::size_t d_h) {
    MaskMatrix m;
    m.rows = tags.tags.size();
    m.cols = d_h;
    m.values.assign(m.rows * m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (tags.tags[i]) {
            for (std::size_t j = 0; j < d_h; ++j) m.values[i * d_h + j] = 1.0;
        }
    }
    return m;
}

Tensor apply_mask(const Tensor& global_features, const MaskMatrix& mask) {
    if (global_features.rank() != 2 || global_features.rows() != mask.rows ||
        global_features.cols() != mask.cols) {
        throw ShapeError("apply_mask: features " + shape_str(global_features.shape()) +
                         " vs mask [" + std::to_string(mask.rows) + "x" +
                         std::to_string(mask.cols) + "]");
    }
    Tensor mask_tensor = Tensor::from_values({mask.rows, mask.cols}, mask.values);
    return mul(global_features, mask_tensor);
}

}  // namespace lca::lctx
