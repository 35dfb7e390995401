#pragma once

// The decomposition engine. Chains (all-forward shapes) are peeled at a point
// with a nonzero fiber using a basis of that fiber compatible with both the
// flag of images (from the left) and the flag of kernels (to the right);
// arbitrary finite zigzags are decomposed by induction on the number of
// extrema, extending interval summands of the two one-extremum-shorter
// restrictions by zero when they vanish at the cut, and otherwise splitting
// the two outer monotone blocks along a basis transported through the middle
// range, where every structure map is invertible.

#include <optional>
#include <vector>

#include "module.hpp"

namespace pmod {

struct decompose_options {
    // When set, point and basis-vector picks are randomized (reproducibly);
    // the resulting barcode is the same either way, which the uniqueness
    // tests exercise.
    std::optional<uint64_t> seed;
};

enum class flag_kind : uint8_t { images, kernels };

struct flag_at {
    uint32_t point;
    flag_kind kind;
    flag fl;
};

// Flag of images of the composed maps into the last point of an all-forward
// chain. Includes the full fiber (the empty composition).
flag_at flag_of_images(const persistence_module& chain);

// Flag of kernels of the composed maps out of the first point of an
// all-forward chain. Includes the zero subspace.
flag_at flag_of_kernels(const persistence_module& chain);

struct split_result {
    summand u;
    std::vector<matrix> complement;  // per point: basis columns of the complement fiber
};

// Splits off the interval summand generated by one basis vector at the
// maximal point of an all-forward chain. The basis must be compatible with
// the flag of images there. The summand's generators are coherent lifts of
// the picked vector; the complement is the chain of successive preimages of
// the span of the remaining basis vectors.
split_result split_at_max(const persistence_module& chain, const basis_with_labels& basis,
                          uint32_t pick);

// Mirror image at the minimal point (basis compatible with the flag of
// kernels), computed through the dual module: the dual basis is compatible
// with the dual flag of images, the dual module is split there, and the
// complement is pulled back as the annihilator of the dual summand.
split_result split_at_min(const persistence_module& chain, const basis_with_labels& basis,
                          uint32_t pick);

// One peel of an all-forward chain at point z: common basis of the two flags
// at z, split left of z at its maximum and right of z at its minimum with the
// same picked vector, and glue. `pick_index` selects which label of the
// common basis is used (0 picks the first).
split_result peel_chain(const persistence_module& chain, uint32_t z, uint32_t pick_index = 0);

// Repeats peel_chain on the running complement until the module is exhausted.
decomposition decompose_chain(const persistence_module& v, const decompose_options& opts = {});

// Full interval decomposition of any finite zigzag module.
decomposition decompose_zigzag(const persistence_module& v, const decompose_options& opts = {});

// Above this many extrema the inductive construction (whose cost grows
// exponentially with the extremum count) hands over to the block-sweep
// engine; both produce valid decompositions and therefore the same barcode.
inline constexpr size_t kInductionExtremaLimit = 12;

struct monotone_report {
    bool monotone = true;
    // Witness when not monotone: at truncation ending at extremum
    // probe_index, this bar has a zero fiber at the last extremum but is
    // nonzero somewhere in [extremum m, extremum probe_index].
    uint32_t probe_index = 0;
    interval witness{0, 0};
};

// Checks the stabilization condition behind the streaming mode at the probed
// truncations: for every probed extremum index n >= m, every interval
// summand of the truncation to [0, z_n] with a zero fiber at z_n must vanish
// on the whole range [z_m, z_n]. Sound for the probed truncations because
// barcodes are decomposition-independent; says nothing beyond them.
monotone_report is_monotone_after(const persistence_module& v, uint32_t m_index,
                                  const std::vector<uint32_t>& probe_indices,
                                  const decompose_options& opts = {});

// -- shared internals (used by the engine and the tests) ----------------------

// Sub-module spanned by the given per-point basis columns, with the maps
// rewritten in those bases. The bases must span map-closed fibers.
persistence_module restrict_to_bases(const persistence_module& v, const std::vector<matrix>& bases);

// Generators mapped through per-point embedding matrices (local point x of
// the summand's module corresponds to embed[x]); the interval is shifted.
summand embed_summand(const summand& s, const std::vector<matrix>& embed, uint32_t offset);

summand shift_summand(const summand& s, uint32_t offset);

// Reflects a summand of an n-point module through the point order reversal.
summand reverse_summand(const summand& s, uint32_t n_points);

}  // namespace pmod
