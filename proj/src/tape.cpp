#include "liferec/tape.hpp"

#include <cmath>
#include <string>

#include "liferec/kernels.hpp"

namespace liferec {

double sigmoid_stable(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double softplus_stable(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::fabs(x))); }

NodeId Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Tape::leaf(const Matrix& m) { return push({Op::Leaf, -1, -1, m, {}, 0.0, 0, 0}); }
NodeId Tape::constant(Matrix m) { return push({Op::Const, -1, -1, std::move(m), {}, 0.0, 0, 0}); }

NodeId Tape::matmul(NodeId a, NodeId b) {
    const Matrix& av = nodes_[a].value;
    const Matrix& bv = nodes_[b].value;
    if (av.cols() != bv.rows())
        throw ShapeError("matmul: " + std::to_string(av.rows()) + "x" + std::to_string(av.cols()) + " * " +
                         std::to_string(bv.rows()) + "x" + std::to_string(bv.cols()));
    Matrix c(av.rows(), bv.cols());
    kernels::active().mm_nn(av.data(), bv.data(), c.data(), av.rows(), av.cols(), bv.cols());
    return push({Op::MatMul, a, b, std::move(c), {}, 0.0, 0, 0});
}

NodeId Tape::matmul_nt(NodeId a, NodeId b) {
    const Matrix& av = nodes_[a].value;
    const Matrix& bv = nodes_[b].value;
    if (av.cols() != bv.cols())
        throw ShapeError("matmul_nt: inner dimensions disagree (" + std::to_string(av.cols()) + " vs " +
                         std::to_string(bv.cols()) + ")");
    Matrix c(av.rows(), bv.rows());
    kernels::active().mm_nt(av.data(), bv.data(), c.data(), av.rows(), av.cols(), bv.rows());
    return push({Op::MatMulNT, a, b, std::move(c), {}, 0.0, 0, 0});
}

NodeId Tape::add(NodeId a, NodeId b) {
    const Matrix& av = nodes_[a].value;
    const Matrix& bv = nodes_[b].value;
    check_same_shape(av, bv, "add");
    Matrix c(av.rows(), av.cols());
    kernels::active().add(av.data(), bv.data(), c.data(), c.size());
    return push({Op::Add, a, b, std::move(c), {}, 0.0, 0, 0});
}

NodeId Tape::sub(NodeId a, NodeId b) {
    const Matrix& av = nodes_[a].value;
    const Matrix& bv = nodes_[b].value;
    check_same_shape(av, bv, "sub");
    Matrix c(av.rows(), av.cols());
    kernels::active().sub(av.data(), bv.data(), c.data(), c.size());
    return push({Op::Sub, a, b, std::move(c), {}, 0.0, 0, 0});
}

NodeId Tape::mul(NodeId a, NodeId b) {
    const Matrix& av = nodes_[a].value;
    const Matrix& bv = nodes_[b].value;
    check_same_shape(av, bv, "mul");
    Matrix c(av.rows(), av.cols());
    kernels::active().mul(av.data(), bv.data(), c.data(), c.size());
    return push({Op::Mul, a, b, std::move(c), {}, 0.0, 0, 0});
}

NodeId Tape::sigmoid(NodeId a) {
    const Matrix& av = nodes_[a].value;
    Matrix c(av.rows(), av.cols());
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] = sigmoid_stable(av.data()[i]);
    return push({Op::Sigmoid, a, -1, std::move(c), {}, 0.0, 0, 0});
}

NodeId Tape::tanh(NodeId a) {
    const Matrix& av = nodes_[a].value;
    Matrix c(av.rows(), av.cols());
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] = std::tanh(av.data()[i]);
    return push({Op::Tanh, a, -1, std::move(c), {}, 0.0, 0, 0});
}

NodeId Tape::add_bias(NodeId a, NodeId bias) {
    const Matrix& av = nodes_[a].value;
    const Matrix& bv = nodes_[bias].value;
    if (bv.cols() != 1 || bv.rows() != av.cols())
        throw ShapeError("add_bias: bias must be " + std::to_string(av.cols()) + "x1, got " +
                         std::to_string(bv.rows()) + "x" + std::to_string(bv.cols()));
    Matrix c(av.rows(), av.cols());
    for (int r = 0; r < av.rows(); ++r)
        for (int j = 0; j < av.cols(); ++j) c(r, j) = av(r, j) + bv(j, 0);
    return push({Op::AddBias, a, bias, std::move(c), {}, 0.0, 0, 0});
}

NodeId Tape::scale(NodeId a, double s) {
    const Matrix& av = nodes_[a].value;
    Matrix c(av.rows(), av.cols());
    kernels::active().scale(av.data(), s, c.data(), c.size());
    return push({Op::Scale, a, -1, std::move(c), {}, s, 0, 0});
}

NodeId Tape::sum(NodeId a) {
    const Matrix& av = nodes_[a].value;
    Matrix c(1, 1);
    c(0, 0) = kernels::active().sum(av.data(), av.size());
    return push({Op::Sum, a, -1, std::move(c), {}, 0.0, 0, 0});
}

NodeId Tape::slice_cols(NodeId a, int c0, int c1) {
    const Matrix& av = nodes_[a].value;
    if (c0 < 0 || c1 > av.cols() || c0 >= c1) throw ContractError("slice_cols: bad column range");
    Matrix c(av.rows(), c1 - c0);
    for (int r = 0; r < av.rows(); ++r)
        for (int j = c0; j < c1; ++j) c(r, j - c0) = av(r, j);
    return push({Op::SliceCols, a, -1, std::move(c), {}, 0.0, c0, c1});
}

NodeId Tape::sigmoid_xent_mean(NodeId logits, NodeId targets) {
    const Matrix& z = nodes_[logits].value;
    const Matrix& y = nodes_[targets].value;
    check_same_shape(z, y, "sigmoid_xent_mean");
    Matrix probs(z.rows(), z.cols());
    double loss = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double zi = z.data()[i];
        probs.data()[i] = sigmoid_stable(zi);
        loss += softplus_stable(zi) - zi * y.data()[i];
    }
    loss /= static_cast<double>(z.size());
    Matrix c(1, 1);
    c(0, 0) = loss;
    return push({Op::SigXentMean, logits, targets, std::move(c), std::move(probs), 0.0, 0, 0});
}

NodeId Tape::softmax_xent_mean(NodeId logits, NodeId onehot) {
    const Matrix& z = nodes_[logits].value;
    const Matrix& y = nodes_[onehot].value;
    check_same_shape(z, y, "softmax_xent_mean");
    Matrix probs(z.rows(), z.cols());
    double loss = 0.0;
    for (int r = 0; r < z.rows(); ++r) {
        double zmax = z(r, 0);
        for (int j = 1; j < z.cols(); ++j) zmax = std::max(zmax, z(r, j));
        double denom = 0.0;
        for (int j = 0; j < z.cols(); ++j) denom += std::exp(z(r, j) - zmax);
        const double logz = std::log(denom) + zmax;
        for (int j = 0; j < z.cols(); ++j) {
            probs(r, j) = std::exp(z(r, j) - logz);
            loss += y(r, j) * (logz - z(r, j));
        }
    }
    loss /= static_cast<double>(z.rows());
    Matrix c(1, 1);
    c(0, 0) = loss;
    return push({Op::SoftXentMean, logits, onehot, std::move(c), std::move(probs), 0.0, 0, 0});
}

std::vector<Matrix> Tape::backward(NodeId loss) const {
    const Matrix& lv = nodes_[loss].value;
    if (lv.rows() != 1 || lv.cols() != 1)
        throw ContractError("backward: loss node must be 1x1, got " + std::to_string(lv.rows()) + "x" +
                            std::to_string(lv.cols()));

    const auto& K = kernels::active();
    std::vector<Matrix> grad(nodes_.size());
    grad[loss] = Matrix::filled(1, 1, 1.0);

    auto ensure = [&](NodeId id) -> Matrix& {
        if (grad[id].empty()) grad[id] = Matrix(nodes_[id].value.rows(), nodes_[id].value.cols());
        return grad[id];
    };

    for (NodeId id = loss; id >= 0; --id) {
        if (grad[id].empty()) continue;
        const Node& n = nodes_[id];
        const Matrix& g = grad[id];
        switch (n.op) {
            case Op::Leaf:
            case Op::Const:
                break;
            case Op::MatMul: {
                // c = a*b: da += g*b^T, db += a^T*g
                const Matrix& a = nodes_[n.a].value;
                const Matrix& b = nodes_[n.b].value;
                Matrix da(a.rows(), a.cols());
                K.mm_nt(g.data(), b.data(), da.data(), g.rows(), g.cols(), b.rows());
                K.axpy(1.0, da.data(), ensure(n.a).data(), da.size());
                Matrix db(b.rows(), b.cols());
                K.mm_tn(a.data(), g.data(), db.data(), a.cols(), a.rows(), g.cols());
                K.axpy(1.0, db.data(), ensure(n.b).data(), db.size());
                break;
            }
            case Op::MatMulNT: {
                // c = a*b^T: da += g*b, db += g^T*a
                const Matrix& a = nodes_[n.a].value;
                const Matrix& b = nodes_[n.b].value;
                Matrix da(a.rows(), a.cols());
                K.mm_nn(g.data(), b.data(), da.data(), g.rows(), g.cols(), b.cols());
                K.axpy(1.0, da.data(), ensure(n.a).data(), da.size());
                Matrix db(b.rows(), b.cols());
                K.mm_tn(g.data(), a.data(), db.data(), g.cols(), g.rows(), a.cols());
                K.axpy(1.0, db.data(), ensure(n.b).data(), db.size());
                break;
            }
            case Op::Add:
                K.axpy(1.0, g.data(), ensure(n.a).data(), g.size());
                K.axpy(1.0, g.data(), ensure(n.b).data(), g.size());
                break;
            case Op::Sub:
                K.axpy(1.0, g.data(), ensure(n.a).data(), g.size());
                K.axpy(-1.0, g.data(), ensure(n.b).data(), g.size());
                break;
            case Op::Mul: {
                Matrix tmp(g.rows(), g.cols());
                K.mul(g.data(), nodes_[n.b].value.data(), tmp.data(), g.size());
                K.axpy(1.0, tmp.data(), ensure(n.a).data(), g.size());
                K.mul(g.data(), nodes_[n.a].value.data(), tmp.data(), g.size());
                K.axpy(1.0, tmp.data(), ensure(n.b).data(), g.size());
                break;
            }
            case Op::Sigmoid: {
                Matrix& da = ensure(n.a);
                const Matrix& y = n.value;
                for (std::size_t i = 0; i < g.size(); ++i)
                    da.data()[i] += g.data()[i] * y.data()[i] * (1.0 - y.data()[i]);
                break;
            }
            case Op::Tanh: {
                Matrix& da = ensure(n.a);
                const Matrix& y = n.value;
                for (std::size_t i = 0; i < g.size(); ++i)
                    da.data()[i] += g.data()[i] * (1.0 - y.data()[i] * y.data()[i]);
                break;
            }
            case Op::AddBias: {
                K.axpy(1.0, g.data(), ensure(n.a).data(), g.size());
                Matrix& db = ensure(n.b);
                for (int r = 0; r < g.rows(); ++r)
                    for (int j = 0; j < g.cols(); ++j) db(j, 0) += g(r, j);
                break;
            }
            case Op::Scale:
                K.axpy(n.scalar, g.data(), ensure(n.a).data(), g.size());
                break;
            case Op::Sum: {
                Matrix& da = ensure(n.a);
                const double gv = g(0, 0);
                for (std::size_t i = 0; i < da.size(); ++i) da.data()[i] += gv;
                break;
            }
            case Op::SliceCols: {
                Matrix& da = ensure(n.a);
                for (int r = 0; r < g.rows(); ++r)
                    for (int j = 0; j < g.cols(); ++j) da(r, n.c0 + j) += g(r, j);
                break;
            }
            case Op::SigXentMean: {
                // d/dz mean(softplus(z) - z*y) = (sigmoid(z) - y)/N
                Matrix& dz = ensure(n.a);
                const Matrix& y = nodes_[n.b].value;
                const double gv = g(0, 0) / static_cast<double>(n.aux.size());
                for (std::size_t i = 0; i < dz.size(); ++i)
                    dz.data()[i] += gv * (n.aux.data()[i] - y.data()[i]);
                break;
            }
            case Op::SoftXentMean: {
                Matrix& dz = ensure(n.a);
                const Matrix& y = nodes_[n.b].value;
                const double gv = g(0, 0) / static_cast<double>(n.aux.rows());
                for (std::size_t i = 0; i < dz.size(); ++i)
                    dz.data()[i] += gv * (n.aux.data()[i] - y.data()[i]);
                break;
            }
        }
    }
    return grad;
}

}  // namespace liferec
