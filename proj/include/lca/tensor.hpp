#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "lca/errors.hpp"

namespace lca {

using Shape = std::vector<std::size_t>;

std::string shape_str(const Shape& shape);

namespace detail {

struct TensorData {
    Shape shape;
    std::vector<double> values;
    std::vector<double> grad;  // empty until first accumulation
    bool requires_grad = false;
};

}  // namespace detail

// Dense row-major tensor of 64-bit floats. A Tensor is a cheap handle onto
// shared storage; values are immutable after construction except through
// values_mut(), which only the optimizer and initializers use. Gradients
// accumulate into grad() across backward passes until zero_grad().
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::shared_ptr<detail::TensorData> data) : d_(std::move(data)) {}

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor full(Shape shape, double value, bool requires_grad = false);
    static Tensor from_values(Shape shape, std::vector<double> values, bool requires_grad = false);
    static Tensor scalar(double value);
    static Tensor uniform(Shape shape, double lo, double hi, std::mt19937_64& rng,
                          bool requires_grad = false);
    // Uniform Xavier/Glorot for a rows x cols projection.
    static Tensor xavier(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                         bool requires_grad = true);

    bool defined() const { return static_cast<bool>(d_); }
    const Shape& shape() const { return d_->shape; }
    std::size_t rank() const { return d_->shape.size(); }
    std::size_t dim(std::size_t axis) const { return d_->shape.at(axis); }
    std::size_t numel() const { return d_->values.size(); }

    // rank-2 accessors
    std::size_t rows() const;
    std::size_t cols() const;
    double operator()(std::size_t r, std::size_t c) const;

    const std::vector<double>& values() const { return d_->values; }
    std::vector<double>& values_mut() { return d_->values; }

    bool requires_grad() const { return d_->requires_grad; }
    void set_requires_grad(bool rg) { d_->requires_grad = rg; }

    bool has_grad() const { return !d_->grad.empty(); }
    const std::vector<double>& grad() const;
    // Allocates a zeroed gradient buffer on first use.
    std::vector<double>& grad_mut();
    void zero_grad() { d_->grad.clear(); }

    double scalar_value() const;

    bool all_finite() const;

    const std::shared_ptr<detail::TensorData>& data() const { return d_; }

private:
    std::shared_ptr<detail::TensorData> d_;
};

namespace autograd {

// Reverse-mode tape. Ops append one closure per node while recording is
// enabled; backward(loss) seeds d(loss)/d(loss) = 1, replays the tape in
// reverse and then discards it.
bool recording();

struct NoGradGuard {
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;
};

void record(std::function<void()> step);
void backward(const Tensor& loss);
void clear_tape();
std::size_t tape_size();

}  // namespace autograd

}  // namespace lca
