#include "daqff/nn/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace daqff::nn {

std::size_t shape_size(const Shape& shape)
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape)
{
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) out << ", ";
        out << shape[i];
    }
    out << ')';
    return out.str();
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)), values_(shape_size(shape_), fill)
{
    for (auto d : shape_) {
        if (d == 0) throw std::invalid_argument("tensor dimensions must be positive, got " + shape_string(shape_));
    }
}

Tensor::Tensor(Shape shape, std::vector<double> values) : shape_(std::move(shape)), values_(values.begin(), values.end())
{
    for (auto d : shape_) {
        if (d == 0) throw std::invalid_argument("tensor dimensions must be positive, got " + shape_string(shape_));
    }
    if (shape_size(shape_) != values_.size()) {
        throw std::invalid_argument("tensor shape " + shape_string(shape_) + " does not match " +
                                    std::to_string(values_.size()) + " values");
    }
}

std::size_t Tensor::dim(std::size_t axis) const
{
    if (axis >= shape_.size()) {
        throw std::out_of_range("axis " + std::to_string(axis) + " out of range for shape " + shape_string(shape_));
    }
    return shape_[axis];
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> index) const
{
    if (index.size() != shape_.size()) {
        throw std::out_of_range("index rank does not match tensor rank " + std::to_string(shape_.size()));
    }
    std::size_t flat = 0;
    std::size_t axis = 0;
    for (auto i : index) {
        if (i >= shape_[axis]) throw std::out_of_range("index out of range for shape " + shape_string(shape_));
        flat = flat * shape_[axis] + i;
        ++axis;
    }
    return flat;
}

double& Tensor::at(std::initializer_list<std::size_t> index) { return values_[offset(index)]; }
double Tensor::at(std::initializer_list<std::size_t> index) const { return values_[offset(index)]; }

Tensor Tensor::reshaped(Shape shape) const
{
    Tensor out = *this;
    out.reshape(std::move(shape));
    return out;
}

void Tensor::reshape(Shape shape)
{
    if (shape_size(shape) != values_.size()) {
        throw std::invalid_argument("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
    }
    shape_ = std::move(shape);
}

void Tensor::fill(double value) { std::fill(values_.begin(), values_.end(), value); }

bool Tensor::all_finite() const noexcept
{
    for (double v : values_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void require_rank(const Tensor& t, std::size_t expected, const char* where)
{
    if (t.rank() != expected) {
        throw std::invalid_argument(std::string(where) + ": expected rank " + std::to_string(expected) +
                                    " input, got shape " + shape_string(t.shape()));
    }
}

void require_finite(const Tensor& t, const char* where)
{
    if (!t.all_finite()) throw std::invalid_argument(std::string(where) + ": non-finite value in input");
}

} // namespace daqff::nn
