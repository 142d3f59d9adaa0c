#pragma once

#include <vector>

#include "liferec/matrix.hpp"

namespace liferec {

using NodeId = int;

// Reverse-mode autodiff over a dynamic tape of primitive ops. One tape per
// forward/backward pass; node ids are topological by construction (an input
// id always precedes its consumer). Gradients accumulate in fixed node-index
// order, so a given graph always differentiates bit-identically.
class Tape {
public:
    enum class Op {
        Leaf,
        Const,
        MatMul,    // a * b
        MatMulNT,  // a * b^T
        Add,
        Sub,
        Mul,
        Sigmoid,
        Tanh,
        AddBias,  // a[m x n] + bias[n x 1] broadcast over rows
        Scale,    // a * scalar
        Sum,      // 1x1 sum of all entries
        SliceCols,
        SigXentMean,   // mean element-wise sigmoid cross-entropy vs {0,1} targets
        SoftXentMean,  // mean per-row softmax cross-entropy vs one-hot targets
    };

    NodeId leaf(const Matrix& m);
    NodeId constant(Matrix m);

    NodeId matmul(NodeId a, NodeId b);
    NodeId matmul_nt(NodeId a, NodeId b);
    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);
    NodeId sigmoid(NodeId a);
    NodeId tanh(NodeId a);
    NodeId add_bias(NodeId a, NodeId bias);
    NodeId scale(NodeId a, double s);
    NodeId sum(NodeId a);
    NodeId slice_cols(NodeId a, int c0, int c1);
    NodeId sigmoid_xent_mean(NodeId logits, NodeId targets);
    NodeId softmax_xent_mean(NodeId logits, NodeId onehot);

    const Matrix& value(NodeId id) const { return nodes_[id].value; }
    std::size_t node_count() const { return nodes_.size(); }
    bool is_leaf(NodeId id) const { return nodes_[id].op == Op::Leaf; }

    // Gradient of a scalar loss for every node reachable backwards from it,
    // indexed by node id (empty Matrix where no gradient flows). Leaves hold
    // the parameter gradients.
    std::vector<Matrix> backward(NodeId loss) const;

private:
    struct Node {
        Op op;
        NodeId a = -1, b = -1;
        Matrix value;
        Matrix aux;  // op-specific forward cache (sigmoid(z), softmax rows, ...)
        double scalar = 0.0;
        int c0 = 0, c1 = 0;
    };

    NodeId push(Node n);
    std::vector<Node> nodes_;
};

// Helpers shared by tape and plain evaluation.
double sigmoid_stable(double x);
double softplus_stable(double x);  // log(1 + e^x)

}  // namespace liferec
