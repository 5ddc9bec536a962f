#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace atf {

/// Numeric precision of a tensor's payload.
enum class Precision { Single, Double };

const char* precision_name(Precision p);

template <class S>
constexpr Precision precision_of() {
    return sizeof(S) == 4 ? Precision::Single : Precision::Double;
}

long long numel_of(const std::vector<int>& shape);
std::string shape_str(const std::vector<int>& shape);

/// Dense boolean mask with the same row-major layout as a tensor.
struct BoolTensor {
    std::vector<int> shape;
    std::vector<std::uint8_t> v;

    BoolTensor() = default;
    BoolTensor(std::vector<int> s, bool fill)
        : shape(std::move(s)), v(static_cast<size_t>(numel_of(shape)), fill ? 1 : 0) {}

    long long numel() const { return static_cast<long long>(v.size()); }
    bool at(long long i) const { return v[static_cast<size_t>(i)] != 0; }
    void set(long long i, bool b) { v[static_cast<size_t>(i)] = b ? 1 : 0; }
};

/// One vertex of the reverse-mode graph. Holds the forward value, the
/// accumulated gradient, and a closure that pushes this node's gradient
/// into its parents. Parents keep the upstream graph alive until
/// backward() frees it.
template <class S>
struct TensorNode {
    std::vector<int> shape;
    std::vector<S> value;
    std::vector<S> grad;  // sized lazily by ensure_grad()
    bool requires_grad = false;
    std::vector<std::shared_ptr<TensorNode>> parents;
    std::function<void(TensorNode&)> backward;

    long long numel() const { return static_cast<long long>(value.size()); }
    void ensure_grad() {
        if (grad.size() != value.size()) grad.assign(value.size(), S(0));
    }
};

/// Graph construction can be suspended (finite-difference probes, plain
/// inference). Per-thread so disjoint graphs may run concurrently.
bool grad_enabled();
void set_grad_enabled(bool on);

struct NoGradGuard {
    bool prev;
    NoGradGuard() : prev(grad_enabled()) { set_grad_enabled(false); }
    ~NoGradGuard() { set_grad_enabled(prev); }
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;
};

/// Shared-ownership handle to a graph node. Copies alias the same storage,
/// so parameters can live both in a parameter struct and inside a graph.
template <class S>
class TensorT {
public:
    using scalar_type = S;

    TensorT() = default;
    explicit TensorT(std::shared_ptr<TensorNode<S>> n) : node_(std::move(n)) {}

    static TensorT zeros(std::vector<int> shape, bool requires_grad = false);
    static TensorT full(std::vector<int> shape, S v, bool requires_grad = false);
    static TensorT from_data(std::vector<int> shape, std::vector<S> data, bool requires_grad = false);
    static TensorT scalar(S v, bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const std::vector<int>& shape() const { return node_->shape; }
    int rank() const { return static_cast<int>(node_->shape.size()); }
    int dim(int i) const { return node_->shape[static_cast<size_t>(i)]; }
    long long numel() const { return node_->numel(); }

    S* data() { return node_->value.data(); }
    const S* data() const { return node_->value.data(); }
    std::vector<S>& values() { return node_->value; }
    const std::vector<S>& values() const { return node_->value; }

    /// Value of a rank-anything single-element tensor.
    S item() const;

    bool requires_grad() const { return node_->requires_grad; }
    TensorT& set_requires_grad(bool b) {
        node_->requires_grad = b;
        return *this;
    }

    bool has_grad() const { return node_ && !node_->grad.empty(); }
    S* grad_data() { node_->ensure_grad(); return node_->grad.data(); }
    const S* grad_data() const { return node_->grad.data(); }
    void zero_grad() { if (node_) node_->grad.assign(node_->value.size(), S(0)); }

    Precision precision() const { return precision_of<S>(); }

    std::shared_ptr<TensorNode<S>>& node() { return node_; }
    const std::shared_ptr<TensorNode<S>>& node() const { return node_; }

private:
    std::shared_ptr<TensorNode<S>> node_;
};

using Tensor32 = TensorT<float>;
using Tensor64 = TensorT<double>;

/// Reverse-mode sweep from a scalar loss. Populates grad on every
/// reachable requires_grad node, verifies the gradients are finite, then
/// frees the graph (drops parent links and closures).
template <class S>
void backward(const TensorT<S>& loss);

/// Central-difference gradient verification: (f(x+h)-f(x-h))/2h against the
/// analytic gradient, element-wise over every entry of `params`. Relative
/// error uses denominator max(|a|,|b|,1e-8). Double precision only.
double grad_check(const std::function<TensorT<double>()>& f,
                  const std::vector<TensorT<double>>& params,
                  double h);

void throw_if_nonfinite(const char* op, const std::vector<float>& v);
void throw_if_nonfinite(const char* op, const std::vector<double>& v);

extern template class TensorT<float>;
extern template class TensorT<double>;
extern template struct TensorNode<float>;
extern template struct TensorNode<double>;
extern template void backward<float>(const TensorT<float>&);
extern template void backward<double>(const TensorT<double>&);

}  // namespace atf
