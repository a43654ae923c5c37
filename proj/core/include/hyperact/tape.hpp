#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "hyperact/matrix.hpp"
#include "hyperact/rng.hpp"

namespace hyperact {

class Tape;

/// Handle to a tape entry. Only meaningful together with the tape that
/// produced it.
struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

/// Reverse-mode differentiation over matrix-valued primitives.
///
/// Usage per step: register every trainable matrix with param(), build the
/// forward computation through the op methods, call backward() on a 1x1
/// loss, then read gradients with grad_of() keyed by parameter address.
/// Backward replays the recorded entries in reverse creation order; each
/// entry adds its contribution into its inputs' accumulators, so gradients
/// of a sum of losses equal the sum of per-loss gradients by construction.
///
/// A tape is single-threaded and intended to live for exactly one
/// forward/backward pair.
class Tape {
public:
    using BackwardFn = std::function<void(Tape&)>;
    using CustomBackwardFn = std::function<void(Tape&, Var self)>;

    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    /// Leaf with no gradient tracking.
    Var constant(Matrix value);

    /// Trainable leaf, keyed by the address of its backing storage.
    /// Registering the same matrix twice throws; its gradient accumulator is
    /// allocated here so unused parameters read back as all zeros.
    Var param(Matrix& storage);

    Var matmul(Var a, Var b);
    /// a * b^T.
    Var matmul_transb(Var a, Var b);
    Var add(Var a, Var b);
    Var scale(Var a, double factor);
    Var hadamard(Var a, Var b);
    /// Broadcast-add a 1 x C bias row to every row.
    Var add_row(Var a, Var row);
    Var activation(Var x, Activation kind);
    /// Inverted dropout. Training mode draws one mask entry per element
    /// (row-major) from rng and rescales survivors by 1/(1-p); eval mode and
    /// p == 0 are the identity and consume no draws.
    Var dropout(Var x, double p, Rng& rng, bool training);
    /// Rows [first, first + count).
    Var row_block(Var x, std::size_t first, std::size_t count);
    /// Vertical concatenation.
    Var concat_rows(const std::vector<Var>& parts);
    /// Horizontal concatenation.
    Var concat_cols(const std::vector<Var>& parts);
    /// Sum of all entries, as a 1x1 matrix.
    Var sum(Var x);

    /// Entry point for composite primitives defined outside the tape (the
    /// loss terms). `back` runs during backward with the new node's own var,
    /// reads its upstream gradient via grad_ref(self) and adds scaled
    /// contributions into the captured inputs.
    Var custom(Matrix value, const std::vector<Var>& inputs, CustomBackwardFn back);

    /// Seeds d(loss)=1 and propagates to all leaves. loss must be 1x1.
    void backward(Var loss);

    const Matrix& value(Var v) const;
    double scalar_value(Var v) const;
    /// Gradient accumulator of v, allocated zero on first access.
    Matrix& grad_ref(Var v);
    bool needs_grad(Var v) const;

    /// Gradient of a registered parameter (valid after backward; all zeros
    /// before, or if the parameter never influenced the loss).
    const Matrix& grad_of(const Matrix& param) const;
    bool is_registered(const Matrix& param) const;
    std::size_t num_entries() const { return entries_.size(); }

private:
    struct Entry {
        Matrix value;
        Matrix grad;  // empty until touched
        bool requires_grad = false;
        BackwardFn back;
    };

    Var push(Matrix value, bool requires_grad, BackwardFn back);
    Entry& entry(Var v);
    const Entry& entry(Var v) const;

    std::vector<Entry> entries_;
    std::unordered_map<const Matrix*, int> params_;
};

}  // namespace hyperact
