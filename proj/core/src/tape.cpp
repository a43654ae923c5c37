#include "hyperact/tape.hpp"

#include <stdexcept>
#include <utility>

#include "hyperact/errors.hpp"

namespace hyperact {

Var Tape::push(Matrix value, bool requires_grad, BackwardFn back) {
    entries_.push_back(Entry{std::move(value), Matrix(), requires_grad, std::move(back)});
    return Var{static_cast<int>(entries_.size()) - 1};
}

Tape::Entry& Tape::entry(Var v) {
    if (!v.valid() || v.id >= static_cast<int>(entries_.size())) {
        throw std::logic_error("Tape: invalid var handle");
    }
    return entries_[static_cast<std::size_t>(v.id)];
}

const Tape::Entry& Tape::entry(Var v) const {
    return const_cast<Tape*>(this)->entry(v);
}

Var Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Var Tape::param(Matrix& storage) {
    auto [it, inserted] = params_.emplace(&storage, static_cast<int>(entries_.size()));
    if (!inserted) {
        throw std::logic_error("Tape::param: matrix registered twice");
    }
    Var v = push(storage, true, nullptr);
    entry(v).grad = Matrix(storage.rows(), storage.cols());
    return v;
}

const Matrix& Tape::value(Var v) const { return entry(v).value; }

double Tape::scalar_value(Var v) const {
    const Matrix& m = entry(v).value;
    if (m.rows() != 1 || m.cols() != 1) {
        throw ShapeError("Tape::scalar_value: not 1x1: " + m.shape_str());
    }
    return m(0, 0);
}

Matrix& Tape::grad_ref(Var v) {
    Entry& e = entry(v);
    if (e.grad.empty() && e.value.size() > 0) {
        e.grad = Matrix(e.value.rows(), e.value.cols());
    }
    return e.grad;
}

bool Tape::needs_grad(Var v) const { return entry(v).requires_grad; }

const Matrix& Tape::grad_of(const Matrix& param) const {
    auto it = params_.find(&param);
    if (it == params_.end()) {
        throw std::logic_error("Tape::grad_of: matrix was never registered");
    }
    return entries_[static_cast<std::size_t>(it->second)].grad;
}

bool Tape::is_registered(const Matrix& param) const {
    return params_.count(&param) > 0;
}

Var Tape::matmul(Var a, Var b) {
    Matrix out = hyperact::matmul(value(a), value(b));
    bool rg = needs_grad(a) || needs_grad(b);
    Var self{static_cast<int>(entries_.size())};
    return push(std::move(out), rg, [a, b, self](Tape& t) {
        const Matrix& g = t.grad_ref(self);
        if (t.needs_grad(a)) {
            // dA += G * B^T
            Matrix da = matmul_transb(g, t.value(b));
            Matrix& acc = t.grad_ref(a);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += da.data()[i];
        }
        if (t.needs_grad(b)) {
            // dB += A^T * G
            Matrix db = hyperact::matmul(transpose(t.value(a)), g);
            Matrix& acc = t.grad_ref(b);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += db.data()[i];
        }
    });
}

Var Tape::matmul_transb(Var a, Var b) {
    Matrix out = hyperact::matmul_transb(value(a), value(b));
    bool rg = needs_grad(a) || needs_grad(b);
    Var self{static_cast<int>(entries_.size())};
    return push(std::move(out), rg, [a, b, self](Tape& t) {
        const Matrix& g = t.grad_ref(self);
        if (t.needs_grad(a)) {
            // dA += G * B
            Matrix da = hyperact::matmul(g, t.value(b));
            Matrix& acc = t.grad_ref(a);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += da.data()[i];
        }
        if (t.needs_grad(b)) {
            // dB += G^T * A
            Matrix db = hyperact::matmul(transpose(g), t.value(a));
            Matrix& acc = t.grad_ref(b);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += db.data()[i];
        }
    });
}

Var Tape::add(Var a, Var b) {
    Matrix out = hyperact::add(value(a), value(b));
    bool rg = needs_grad(a) || needs_grad(b);
    Var self{static_cast<int>(entries_.size())};
    return push(std::move(out), rg, [a, b, self](Tape& t) {
        const Matrix& g = t.grad_ref(self);
        for (Var v : {a, b}) {
            if (!t.needs_grad(v)) continue;
            Matrix& acc = t.grad_ref(v);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += g.data()[i];
        }
    });
}

Var Tape::scale(Var a, double factor) {
    Matrix out = hyperact::scale(value(a), factor);
    bool rg = needs_grad(a);
    Var self{static_cast<int>(entries_.size())};
    return push(std::move(out), rg, [a, factor, self](Tape& t) {
        if (!t.needs_grad(a)) return;
        const Matrix& g = t.grad_ref(self);
        Matrix& acc = t.grad_ref(a);
        for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += factor * g.data()[i];
    });
}

Var Tape::hadamard(Var a, Var b) {
    Matrix out = hyperact::hadamard(value(a), value(b));
    bool rg = needs_grad(a) || needs_grad(b);
    Var self{static_cast<int>(entries_.size())};
    return push(std::move(out), rg, [a, b, self](Tape& t) {
        const Matrix& g = t.grad_ref(self);
        if (t.needs_grad(a)) {
            Matrix& acc = t.grad_ref(a);
            const Matrix& bv = t.value(b);
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc.data()[i] += g.data()[i] * bv.data()[i];
        }
        if (t.needs_grad(b)) {
            Matrix& acc = t.grad_ref(b);
            const Matrix& av = t.value(a);
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc.data()[i] += g.data()[i] * av.data()[i];
        }
    });
}

Var Tape::add_row(Var a, Var row) {
    Matrix out = add_row_broadcast(value(a), value(row));
    bool rg = needs_grad(a) || needs_grad(row);
    Var self{static_cast<int>(entries_.size())};
    return push(std::move(out), rg, [a, row, self](Tape& t) {
        const Matrix& g = t.grad_ref(self);
        if (t.needs_grad(a)) {
            Matrix& acc = t.grad_ref(a);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += g.data()[i];
        }
        if (t.needs_grad(row)) {
            Matrix& acc = t.grad_ref(row);
            for (std::size_t i = 0; i < g.rows(); ++i)
                for (std::size_t j = 0; j < g.cols(); ++j) acc(0, j) += g(i, j);
        }
    });
}

Var Tape::activation(Var x, Activation kind) {
    Matrix out = apply_activation(value(x), kind);
    bool rg = needs_grad(x);
    Var self{static_cast<int>(entries_.size())};
    return push(std::move(out), rg, [x, kind, self](Tape& t) {
        if (!t.needs_grad(x)) return;
        const Matrix& g = t.grad_ref(self);
        const Matrix& in = t.value(x);
        const Matrix& y = t.value(self);
        Matrix& acc = t.grad_ref(x);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc.data()[i] +=
                g.data()[i] * activation_grad_scalar(in.data()[i], y.data()[i], kind);
        }
    });
}

Var Tape::dropout(Var x, double p, Rng& rng, bool training) {
    if (p < 0.0 || p >= 1.0) {
        throw ConfigError("dropout: rate must satisfy 0 <= p < 1, got " +
                          std::to_string(p));
    }
    if (!training || p == 0.0) return x;
    const Matrix& in = value(x);
    Matrix mask = dropout_mask(in.rows(), in.cols(), p, rng);
    Var mvar = constant(std::move(mask));
    return hadamard(x, mvar);
}

Var Tape::row_block(Var x, std::size_t first, std::size_t count) {
    const Matrix& in = value(x);
    if (first + count > in.rows()) {
        throw ShapeError("row_block: rows [" + std::to_string(first) + ", " +
                         std::to_string(first + count) + ") out of range for " +
                         in.shape_str());
    }
    Matrix out(count, in.cols());
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < in.cols(); ++j) out(i, j) = in(first + i, j);
    bool rg = needs_grad(x);
    Var self{static_cast<int>(entries_.size())};
    return push(std::move(out), rg, [x, first, count, self](Tape& t) {
        if (!t.needs_grad(x)) return;
        const Matrix& g = t.grad_ref(self);
        Matrix& acc = t.grad_ref(x);
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = 0; j < g.cols(); ++j) acc(first + i, j) += g(i, j);
    });
}

Var Tape::concat_rows(const std::vector<Var>& parts) {
    if (parts.empty()) throw ShapeError("concat_rows: no parts");
    std::size_t cols = value(parts[0]).cols();
    std::size_t rows = 0;
    bool rg = false;
    for (Var p : parts) {
        if (value(p).cols() != cols) {
            throw ShapeError("concat_rows: column mismatch: " +
                             value(parts[0]).shape_str() + " vs " + value(p).shape_str());
        }
        rows += value(p).rows();
        rg = rg || needs_grad(p);
    }
    Matrix out(rows, cols);
    std::size_t at = 0;
    for (Var p : parts) {
        const Matrix& m = value(p);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < cols; ++j) out(at + i, j) = m(i, j);
        at += m.rows();
    }
    Var self{static_cast<int>(entries_.size())};
    std::vector<Var> inputs = parts;
    return push(std::move(out), rg, [inputs, self](Tape& t) {
        const Matrix& g = t.grad_ref(self);
        std::size_t at = 0;
        for (Var p : inputs) {
            std::size_t r = t.value(p).rows();
            if (t.needs_grad(p)) {
                Matrix& acc = t.grad_ref(p);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < g.cols(); ++j)
                        acc(i, j) += g(at + i, j);
            }
            at += r;
        }
    });
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
    if (parts.empty()) throw ShapeError("concat_cols: no parts");
    std::size_t rows = value(parts[0]).rows();
    std::size_t cols = 0;
    bool rg = false;
    for (Var p : parts) {
        if (value(p).rows() != rows) {
            throw ShapeError("concat_cols: row mismatch: " +
                             value(parts[0]).shape_str() + " vs " + value(p).shape_str());
        }
        cols += value(p).cols();
        rg = rg || needs_grad(p);
    }
    Matrix out(rows, cols);
    std::size_t at = 0;
    for (Var p : parts) {
        const Matrix& m = value(p);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) out(i, at + j) = m(i, j);
        at += m.cols();
    }
    Var self{static_cast<int>(entries_.size())};
    std::vector<Var> inputs = parts;
    return push(std::move(out), rg, [inputs, self](Tape& t) {
        const Matrix& g = t.grad_ref(self);
        std::size_t at = 0;
        for (Var p : inputs) {
            std::size_t c = t.value(p).cols();
            if (t.needs_grad(p)) {
                Matrix& acc = t.grad_ref(p);
                for (std::size_t i = 0; i < g.rows(); ++i)
                    for (std::size_t j = 0; j < c; ++j) acc(i, j) += g(i, at + j);
            }
            at += c;
        }
    });
}

Var Tape::sum(Var x) {
    const Matrix& in = value(x);
    double acc = 0.0;
    for (double v : in.values()) acc += v;
    Matrix out(1, 1);
    out(0, 0) = acc;
    bool rg = needs_grad(x);
    Var self{static_cast<int>(entries_.size())};
    return push(std::move(out), rg, [x, self](Tape& t) {
        if (!t.needs_grad(x)) return;
        double g = t.grad_ref(self)(0, 0);
        Matrix& acc = t.grad_ref(x);
        for (double& v : acc.values()) v += g;
    });
}

Var Tape::custom(Matrix value, const std::vector<Var>& inputs, CustomBackwardFn back) {
    bool rg = false;
    for (Var v : inputs) rg = rg || needs_grad(v);
    Var self{static_cast<int>(entries_.size())};
    BackwardFn wrapped;
    if (rg && back) {
        wrapped = [back = std::move(back), self](Tape& t) { back(t, self); };
    }
    return push(std::move(value), rg, std::move(wrapped));
}

void Tape::backward(Var loss) {
    const Matrix& lv = entry(loss).value;
    if (lv.rows() != 1 || lv.cols() != 1) {
        throw ShapeError("Tape::backward: loss must be 1x1, got " + lv.shape_str());
    }
    grad_ref(loss)(0, 0) += 1.0;
    for (int i = loss.id; i >= 0; --i) {
        Entry& e = entries_[static_cast<std::size_t>(i)];
        if (e.back && !e.grad.empty()) e.back(*this);
    }
}

}  // namespace hyperact
