#pragma once

#include <functional>
#include <vector>

#include "alphaseq/error.hpp"

namespace alphaseq::ad {

// Per-token rotation angles, one cos/sin pair per rotary pair. Shared by all
// heads of a layer (every head uses the same axis split).
struct RotationAngles {
    int tokens = 0;
    int half   = 0;  // head_dim / 2
    std::vector<double> cosv;  // tokens * half
    std::vector<double> sinv;
};

// Dynamic reverse-mode tape over row-major 2-D buffers. Built per forward
// pass; backward() walks the nodes in reverse creation order.
class Tape {
public:
    using Id = int;

    Id leaf(int rows, int cols, const double* data);
    Id leaf(int rows, int cols, const std::vector<double>& data);

    Id matmul(Id a, Id b);                   // (r,k) x (k,c)
    Id add(Id a, Id b);                      // same shape
    Id add_rowvec(Id a, Id v);               // (r,c) + broadcast (1,c)
    Id axpy(Id a, Id b, double alpha);       // a + alpha * b, same shape
    Id gelu(Id a);                           // exact erf form
    Id layernorm(Id a, Id gamma, Id beta);   // per row, affine, eps 1e-6
    Id concat_rows(const std::vector<Id>& parts);
    Id slice_rows(Id a, int start, int count);

    // Fused multi-head self-attention with rotary positions applied to the
    // queries and keys. q/k/v are (L, heads*head_dim); the same angles rotate
    // every head.
    Id attention(Id q, Id k, Id v, int heads, const RotationAngles& rot);

    // (1/m) * sum_k ||target_k - pred_k||^2 where image k covers rows
    // [bounds[k], bounds[k+1]). Summed with a half-split pairwise reduction
    // so duplicating the image list doubles both numerator and denominator
    // exactly.
    Id seq_loss(Id pred, const std::vector<double>& target, const std::vector<int>& bounds);

    void backward(Id loss);

    int rows(Id id) const { return nodes_[id].rows; }
    int cols(Id id) const { return nodes_[id].cols; }
    const std::vector<double>& val(Id id) const { return nodes_[id].val; }
    const std::vector<double>& grad(Id id) const { return nodes_[id].grad; }

private:
    struct Node {
        int rows = 0;
        int cols = 0;
        std::vector<double> val;
        std::vector<double> grad;
        std::function<void()> back;  // empty for leaves
    };

    Id push(int rows, int cols);
    std::vector<Node> nodes_;
};

// exact pairwise half-split sum; duplication-stable (see Tape::seq_loss)
double pairwise_sum(const double* data, size_t n);

}  // namespace alphaseq::ad
