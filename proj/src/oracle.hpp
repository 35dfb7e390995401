#pragma once

// Independent verification: the internal-direct-sum validity checker (the
// definition of an interval decomposition as an executable predicate), a
// rank-count barcode oracle for chains, a brute-force decomposer for tiny
// modules, and hom-space computation between small modules.

#include <string>
#include <vector>

#include "module.hpp"

namespace pmod {

struct validation_failure {
    uint32_t where;  // point or arrow index, see description
    std::string description;
};

struct validation_report {
    bool ok = true;
    std::vector<validation_failure> failures;
};

// Checks that (a) at every point the generators of the summands covering it
// form a basis of the fiber, (b) every summand is closed under the structure
// maps, carrying generators to nonzero multiples inside the interval and to
// zero when leaving it, and (c) intervals lie within the shape.
validation_report validate(const decomposition& d);

// Barcode of an all-forward chain from ranks of composed maps: the count of
// bars covering [b, d] is the rank of the composed map from b to d, so the
// multiplicity of [b, d] follows by inclusion-exclusion, with out-of-range
// terms read as zero.
barcode chain_rank_barcode(const persistence_module& v);

// Ground-truth decomposer for tiny modules (total dimension <= 6, GF(2)):
// enumerates every interval submodule and searches for a family forming an
// internal direct sum. Refuses anything bigger.
barcode exhaustive_decompose(const persistence_module& v);

// A morphism between two modules over the same shape, one matrix per point
// (dims_W[x] x dims_V[x]).
using module_hom = std::vector<matrix>;

// Basis of the space of morphisms from v to w, found by solving the
// commutation constraints of every arrow.
std::vector<module_hom> hom_basis(const persistence_module& v, const persistence_module& w);

module_hom compose(const module_hom& second, const module_hom& first);
bool is_zero_hom(const module_hom& h);

}  // namespace pmod
