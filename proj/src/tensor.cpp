#include "lca/tensor.hpp"

#include <cmath>
#include <sstream>

namespace lca {

std::string shape_str(const Shape& shape) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << "x";
        os << shape[i];
    }
    os << "]";
    return os.str();
}

namespace {

std::size_t shape_numel(const Shape& shape) {
    if (shape.empty()) throw ShapeError("tensor shape must have at least one dimension");
    std::size_t n = 1;
    for (std::size_t d : shape) {
        if (d == 0) throw ShapeError("tensor dimensions must be positive, got " + shape_str(shape));
        n *= d;
    }
    return n;
}

}  // namespace

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
    auto d = std::make_shared<detail::TensorData>();
    d->values.assign(shape_numel(shape), 0.0);
    d->shape = std::move(shape);
    d->requires_grad = requires_grad;
    return Tensor(std::move(d));
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
    auto d = std::make_shared<detail::TensorData>();
    d->values.assign(shape_numel(shape), value);
    d->shape = std::move(shape);
    d->requires_grad = requires_grad;
    return Tensor(std::move(d));
}

Tensor Tensor::from_values(Shape shape, std::vector<double> values, bool requires_grad) {
    if (shape_numel(shape) != values.size()) {
        throw ShapeError("value count " + std::to_string(values.size()) +
                         " does not match shape " + shape_str(shape));
    }
    auto d = std::make_shared<detail::TensorData>();
    d->shape = std::move(shape);
    d->values = std::move(values);
    d->requires_grad = requires_grad;
    return Tensor(std::move(d));
}

Tensor Tensor::scalar(double value) { return from_values({1}, {value}); }

Tensor Tensor::uniform(Shape shape, double lo, double hi, std::mt19937_64& rng,
                       bool requires_grad) {
    std::uniform_real_distribution<double> dist(lo, hi);
    auto d = std::make_shared<detail::TensorData>();
    d->values.resize(shape_numel(shape));
    for (double& v : d->values) v = dist(rng);
    d->shape = std::move(shape);
    d->requires_grad = requires_grad;
    return Tensor(std::move(d));
}

Tensor Tensor::xavier(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                      bool requires_grad) {
    double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    return uniform({rows, cols}, -limit, limit, rng, requires_grad);
}

std::size_t Tensor::rows() const {
    if (rank() != 2) throw ShapeError("expected rank-2 tensor, got " + shape_str(shape()));
    return d_->shape[0];
}

std::size_t Tensor::cols() const {
    if (rank() != 2) throw ShapeError("expected rank-2 tensor, got " + shape_str(shape()));
    return d_->shape[1];
}

double Tensor::operator()(std::size_t r, std::size_t c) const {
    return d_->values[r * cols() + c];
}

const std::vector<double>& Tensor::grad() const {
    if (d_->grad.empty()) throw ContractError("gradient requested but never populated");
    return d_->grad;
}

std::vector<double>& Tensor::grad_mut() {
    if (d_->grad.empty()) d_->grad.assign(d_->values.size(), 0.0);
    return d_->grad;
}

double Tensor::scalar_value() const {
    if (numel() != 1) throw ContractError("expected scalar tensor, got " + shape_str(shape()));
    return d_->values[0];
}

bool Tensor::all_finite() const {
    for (double v : d_->values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

namespace autograd {

namespace {
thread_local std::vector<std::function<void()>> g_tape;
thread_local int g_no_grad_depth = 0;
}  // namespace

bool recording() { return g_no_grad_depth == 0; }

NoGradGuard::NoGradGuard() { ++g_no_grad_depth; }
NoGradGuard::~NoGradGuard() { --g_no_grad_depth; }

void record(std::function<void()> step) { g_tape.push_back(std::move(step)); }

void backward(const Tensor& loss) {
    if (loss.numel() != 1) {
        throw ContractError("backward requires a scalar loss, got " + shape_str(loss.shape()));
    }
    loss.data()->grad.assign(1, 1.0);
    for (auto it = g_tape.rbegin(); it != g_tape.rend(); ++it) (*it)();
    clear_tape();
}

void clear_tape() {
    g_tape.clear();
    g_tape.shrink_to_fit();
}

std::size_t tape_size() { return g_tape.size(); }

}  // namespace autograd

}  // namespace lca
