#pragma once

// The representation-theoretic data model: finite zigzag shapes (arbitrarily
// oriented A_n quivers), persistence modules over them, intervals, summands,
// and decompositions. Points are 0-based internally; the text formats and the
// C API use 1-based indices.

#include <cstdint>
#include <vector>

#include "linalg.hpp"

namespace pmod {

enum class direction : uint8_t { forward, backward };

inline direction flip(direction d) {
    return d == direction::forward ? direction::backward : direction::forward;
}

class zigzag_shape {
public:
    zigzag_shape(uint32_t n_points, std::vector<direction> dirs);

    uint32_t points() const { return n_; }
    const std::vector<direction>& dirs() const { return dirs_; }
    direction dir(uint32_t arrow) const { return dirs_[arrow]; }

    // Endpoints plus every turning point, in increasing order. These are the
    // extrema of the underlying zigzag poset; consecutive extrema delimit the
    // maximal monotone blocks.
    std::vector<uint32_t> extrema() const;
    bool monotone() const;  // at most two extrema

    bool operator==(const zigzag_shape& o) const { return n_ == o.n_ && dirs_ == o.dirs_; }

private:
    uint32_t n_;
    std::vector<direction> dirs_;
};

// Closed range of points [lo, hi]; contiguity in the associated total order
// is exactly what makes a set of points an interval of the zigzag poset.
struct interval {
    uint32_t lo = 0, hi = 0;

    uint32_t length() const { return hi - lo + 1; }
    bool contains(uint32_t x) const { return lo <= x && x <= hi; }
    auto operator<=>(const interval&) const = default;
};

class persistence_module {
public:
    persistence_module(zigzag_shape shape, std::vector<uint32_t> dims,
                       std::vector<matrix> maps, fp_field field);

    const zigzag_shape& shape() const { return shape_; }
    fp_field field() const { return f_; }
    uint32_t points() const { return shape_.points(); }
    uint32_t dim(uint32_t x) const { return dims_[x]; }
    const std::vector<uint32_t>& dims() const { return dims_; }
    // Arrow i sits between points i and i+1; forward maps fiber i to i+1,
    // backward maps fiber i+1 to i.
    const matrix& map(uint32_t arrow) const { return maps_[arrow]; }
    const std::vector<matrix>& maps() const { return maps_; }

    uint32_t total_dim() const;
    bool is_zero() const { return total_dim() == 0; }

    bool operator==(const persistence_module& o) const;

private:
    zigzag_shape shape_;
    std::vector<uint32_t> dims_;
    std::vector<matrix> maps_;
    fp_field f_;
};

// One-dimensional on the interval, zero elsewhere, identity maps inside.
persistence_module constant_module(const zigzag_shape& shape, interval itv, fp_field field);

// Point order flipped; arrow directions preserved under the flip; matrices
// transposed. An involution (up to nothing: applying it twice gives back the
// original object exactly).
persistence_module dual_module(const persistence_module& v);

// Point order flipped, matrices kept: the same quiver walked backwards.
persistence_module reverse_module(const persistence_module& v);

// Sub-module on points [lo, hi].
persistence_module restrict(const persistence_module& v, uint32_t lo, uint32_t hi);

// An interval summand: one generator vector per point of its interval. The
// structure maps carry each generator exactly onto the adjacent one (inside
// the interval) and to zero when leaving it.
struct summand {
    interval itv;
    std::vector<fvec> gens;  // gens[k] lives in the fiber at point itv.lo + k

    const fvec& gen_at(uint32_t point) const { return gens[point - itv.lo]; }
    fvec& gen_at(uint32_t point) { return gens[point - itv.lo]; }
};

struct decomposition {
    persistence_module mod;
    std::vector<summand> parts;
};

// Multiset of intervals with multiplicities.
class barcode {
public:
    barcode() = default;

    void add(interval itv, uint32_t mult = 1);
    uint32_t multiplicity(interval itv) const;
    const std::vector<std::pair<interval, uint32_t>>& bars() const { return bars_; }
    size_t total() const;  // sum of multiplicities
    bool empty() const { return bars_.empty(); }

    barcode reversed(uint32_t n_points) const;  // [lo,hi] -> [n-1-hi, n-1-lo]

    bool operator==(const barcode& o) const { return bars_ == o.bars_; }

private:
    std::vector<std::pair<interval, uint32_t>> bars_;  // sorted by interval
};

barcode barcode_of(const decomposition& d);

// Extension by zero: a summand of the restriction of a module to
// [range_lo, range_hi] that vanishes at every cut point is promoted to the
// full shape. `itv` of the input is in local coordinates of the range;
// `local_cuts` are the range boundaries that are interior in the full shape.
summand extend_by_zero(const summand& u, uint32_t range_lo, uint32_t range_hi,
                       const std::vector<uint32_t>& local_cuts);

}  // namespace pmod
