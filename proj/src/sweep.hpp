#pragma once

// Block-sweep decomposition: a decomposition of a prefix is extended one
// arrow at a time. Bars that reach the frontier are kept in a receive order
// (who may absorb whom without breaking the interval structure): a bar born
// across a forward arrow sits above every older bar, one born across a
// backward arrow below. Crossing a forward arrow, the bars whose frontier
// generators span the kernel die; crossing a backward arrow, the bars whose
// generators fail to lift die. When the frontier generators are not adapted
// to the incoming map, receive-order mixing repairs them; the mixing never
// changes an interval, so closed bars and the barcode are stable. With
// mixing disabled the sweep extends a given decomposition verbatim or
// reports that it cannot.

#include <cstddef>

#include "module.hpp"

namespace pmod {

struct stream_block {
    direction dir;
    std::vector<uint32_t> dims;  // fibers of the newly appended points
    std::vector<matrix> maps;    // one per new point; maps[0] touches the frontier
};

class block_sweep {
public:
    block_sweep(fp_field field, uint32_t first_dim, bool allow_mixing);

    // Rebuilds the sweep state sitting at the last point of the decomposed
    // module. Bars not reaching that point are treated as closed.
    static block_sweep from_decomposition(const decomposition& d, bool allow_mixing);

    // Consumes one arrow; the matrix maps the frontier fiber forward or the
    // new fiber backward onto the frontier, matching the module convention.
    // Throws usage_error when mixing is needed but disabled.
    void push_arrow(direction dir, const matrix& m);
    void push_block(const stream_block& b);

    uint32_t points() const { return uint32_t(dims_.size()); }
    uint32_t frontier_dim() const { return dims_.back(); }
    fp_field field() const { return f_; }

    persistence_module current() const;
    decomposition result() const;
    barcode closed_bars() const;  // right end strictly before the frontier
    barcode open_bars() const;    // right end at the frontier

private:
    struct live_bar {
        uint32_t birth;
        std::vector<fvec> gens;  // gens[k] lives at point birth + k
    };

    void forward_step(const matrix& m);
    void backward_step(const matrix& m);
    void close_bar(uint32_t index);
    // gens of `into` += coef * chain of `from`, over the overlap of their ranges.
    static void mix_into(live_bar& into, const live_bar& from, uint32_t coef, const fp_field& f);

    fp_field f_;
    bool allow_mixing_;
    std::vector<uint32_t> dims_;
    std::vector<direction> dirs_;
    std::vector<matrix> maps_;
    std::vector<live_bar> open_;  // receive order, bottom first
    std::vector<summand> closed_;
};

// Full decomposition of a finite module by sweeping it left to right.
decomposition decompose_sweep(const persistence_module& v);

// Extends a decomposition of a prefix of `next` to all of `next` so that its
// restriction to the prefix is exactly `d`. Fails with usage_error when some
// summand reaching the frontier neither extends nor dies cleanly, or when
// `next` does not restrict to the decomposed module.
decomposition extend_decomposition(const decomposition& d, const persistence_module& next);

struct stream_result {
    barcode closed;
    barcode open;
    decomposition decomp;
};

// Consumes `horizon` blocks (or all of them, if fewer) and reports the bars
// that can no longer change alongside the ones still extending.
stream_result stream_decompose(fp_field field, uint32_t start_dim,
                               const std::vector<stream_block>& blocks, size_t horizon);

}  // namespace pmod
