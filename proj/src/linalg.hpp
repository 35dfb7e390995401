#pragma once

// Dense exact linear algebra over GF(p): matrices, canonical subspaces,
// flags, and the two-flag compatible-basis construction. Subspaces are kept
// in reduced column echelon form with strictly increasing pivot rows, so two
// subspaces are equal as sets iff their representations compare equal.

#include <cstdint>
#include <optional>
#include <vector>

#include "field.hpp"

namespace pmod {

using fvec = std::vector<uint32_t>;  // coordinate vector, entries in [0, p)

class matrix {
public:
    matrix(uint32_t rows, uint32_t cols, fp_field field)
        : rows_(rows), cols_(cols), f_(field), e_(size_t(rows) * cols, 0) {}

    static matrix identity(uint32_t n, fp_field field);
    static matrix from_columns(uint32_t rows, const std::vector<fvec>& cols, fp_field field);

    uint32_t rows() const { return rows_; }
    uint32_t cols() const { return cols_; }
    fp_field field() const { return f_; }

    uint32_t at(uint32_t r, uint32_t c) const { return e_[size_t(r) * cols_ + c]; }
    uint32_t& at(uint32_t r, uint32_t c) { return e_[size_t(r) * cols_ + c]; }

    fvec column(uint32_t c) const;
    void set_column(uint32_t c, const fvec& v);

    matrix transposed() const;
    matrix operator*(const matrix& o) const;
    fvec apply(const fvec& v) const;  // matrix * column vector

    matrix hstack(const matrix& o) const;
    bool is_zero() const;
    bool operator==(const matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && f_ == o.f_ && e_ == o.e_;
    }

private:
    uint32_t rows_, cols_;
    fp_field f_;
    std::vector<uint32_t> e_;
};

// -- vector helpers ----------------------------------------------------------

bool is_zero_vec(const fvec& v);
fvec add_scaled(const fvec& a, uint32_t c, const fvec& b, const fp_field& f);  // a + c*b
fvec scale_vec(uint32_t c, const fvec& v, const fp_field& f);

// Returns lambda with b = lambda * a, if the vectors are collinear (a != 0).
std::optional<uint32_t> collinear_factor(const fvec& a, const fvec& b, const fp_field& f);

// -- elimination -------------------------------------------------------------

struct reduce_result {
    matrix reduced;    // = input * transform, reduced column echelon form
    matrix transform;  // invertible cols x cols matrix
    uint32_t rank;     // number of nonzero columns of `reduced`
};

reduce_result column_reduce(const matrix& m);

// One solution of m * x = b, if any.
std::optional<fvec> solve(const matrix& m, const fvec& b);

// -- subspaces ---------------------------------------------------------------

class subspace {
public:
    // Zero subspace of the given ambient dimension.
    subspace(uint32_t ambient_dim, fp_field field);

    // Canonical form of the column space of m.
    static subspace span(const matrix& m);
    static subspace full(uint32_t ambient_dim, fp_field field);

    uint32_t ambient_dim() const { return basis_.rows(); }
    uint32_t dim() const { return basis_.cols(); }
    fp_field field() const { return basis_.field(); }
    const matrix& basis() const { return basis_; }
    const std::vector<uint32_t>& pivots() const { return pivots_; }

    bool contains(const fvec& v) const;
    bool contains(const subspace& o) const;
    // Residual of v after eliminating the pivot coordinates; zero iff v is a member.
    fvec reduce_vector(const fvec& v) const;

    bool operator==(const subspace& o) const { return basis_ == o.basis_; }
    bool operator!=(const subspace& o) const { return !(*this == o); }

private:
    matrix basis_;  // reduced column echelon, pivot rows strictly increasing
    std::vector<uint32_t> pivots_;
};

subspace image(const matrix& m);
subspace kernel(const matrix& m);
subspace preimage(const matrix& m, const subspace& s);  // {v : m v in s}
subspace sum(const subspace& a, const subspace& b);
subspace intersect(const subspace& a, const subspace& b);
subspace perp(const subspace& s);  // annihilator in dual coordinates

// -- affine subspaces --------------------------------------------------------

// A nonempty affine subspace point + dir, used for coherent lifting along a
// chain of maps: the full solution set is carried so that feasibility is
// never lost to an unlucky representative.
struct affine_space {
    fvec point;
    subspace dir;
};

// Solution set of m x in (point + dir), empty optional if infeasible.
std::optional<affine_space> affine_preimage(const matrix& m, const affine_space& a);

// -- flags -------------------------------------------------------------------

class flag {
public:
    // Builds a flag from arbitrary spaces: deduplicates, sorts by dimension,
    // and checks strict inclusion.
    flag(uint32_t ambient_dim, fp_field field, std::vector<subspace> spaces);

    uint32_t ambient_dim() const { return ambient_; }
    fp_field field() const { return f_; }
    const std::vector<subspace>& spaces() const { return spaces_; }
    bool is_complete() const;

private:
    uint32_t ambient_;
    fp_field f_;
    std::vector<subspace> spaces_;  // strictly increasing
};

// A complete refinement of f: contains every space of f and has one space of
// every dimension 0..ambient. Gaps are filled greedily with the first
// canonical basis vector of the next flag space not already in the span
// (standard basis vectors once above the largest given space), so the result
// is deterministic.
flag complete_flag(const flag& f);

struct basis_with_labels {
    matrix vectors;                // ambient x n, invertible
    std::vector<uint32_t> labels;  // one per column

    fvec vector_for(uint32_t label) const;
    uint32_t column_of(uint32_t label) const;
};

// True iff for every space S of f, the basis vectors lying in S span S.
bool compatible(const basis_with_labels& b, const flag& f);
bool compatible(const matrix& basis_vectors, const flag& f);

// A basis compatible with both flags, built by completing both flags and
// recursing on the largest proper subspace of the first one. Labels are
// assigned 0..n-1 in construction order.
basis_with_labels common_basis(const flag& f, const flag& g);

// Dual basis coordinates: columns of inverse-transpose.
matrix dual_basis(const matrix& basis_vectors);

matrix inverse(const matrix& m);  // usage_error if not invertible

// Coordinates of each column of `vectors` in the given basis columns:
// basis_cols * result = vectors. Empty optional if some column is outside.
std::optional<matrix> express_in(const matrix& basis_cols, const matrix& vectors);

}  // namespace pmod
