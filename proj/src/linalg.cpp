#include "linalg.hpp"

#include <algorithm>
#include <string>

namespace pmod {

// -- matrix ------------------------------------------------------------------

matrix matrix::identity(uint32_t n, fp_field field) {
    matrix m(n, n, field);
    for (uint32_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

matrix matrix::from_columns(uint32_t rows, const std::vector<fvec>& cols, fp_field field) {
    matrix m(rows, uint32_t(cols.size()), field);
    for (uint32_t c = 0; c < cols.size(); ++c) m.set_column(c, cols[c]);
    return m;
}

fvec matrix::column(uint32_t c) const {
    fvec v(rows_);
    for (uint32_t r = 0; r < rows_; ++r) v[r] = at(r, c);
    return v;
}

void matrix::set_column(uint32_t c, const fvec& v) {
    if (v.size() != rows_) throw usage_error("column length mismatch");
    for (uint32_t r = 0; r < rows_; ++r) at(r, c) = v[r];
}

matrix matrix::transposed() const {
    matrix t(cols_, rows_, f_);
    for (uint32_t r = 0; r < rows_; ++r)
        for (uint32_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

matrix matrix::operator*(const matrix& o) const {
    if (f_ != o.f_) throw usage_error("matrix product over different fields");
    if (cols_ != o.rows_) throw usage_error("matrix product shape mismatch");
    matrix out(rows_, o.cols_, f_);
    for (uint32_t r = 0; r < rows_; ++r)
        for (uint32_t c = 0; c < o.cols_; ++c) {
            uint64_t acc = 0;  // each term < 2^31; reduce per term, sum stays < 2^63
            for (uint32_t k = 0; k < cols_; ++k)
                acc += f_.mul(at(r, k), o.at(k, c));
            out.at(r, c) = uint32_t(acc % f_.modulus());
        }
    return out;
}

fvec matrix::apply(const fvec& v) const {
    if (v.size() != cols_) throw usage_error("matrix apply shape mismatch");
    fvec out(rows_, 0);
    for (uint32_t r = 0; r < rows_; ++r) {
        uint64_t acc = 0;
        for (uint32_t c = 0; c < cols_; ++c) acc += f_.mul(at(r, c), v[c]);
        out[r] = uint32_t(acc % f_.modulus());
    }
    return out;
}

matrix matrix::hstack(const matrix& o) const {
    if (rows_ != o.rows_ || f_ != o.f_) throw usage_error("hstack shape mismatch");
    matrix out(rows_, cols_ + o.cols_, f_);
    for (uint32_t r = 0; r < rows_; ++r) {
        for (uint32_t c = 0; c < cols_; ++c) out.at(r, c) = at(r, c);
        for (uint32_t c = 0; c < o.cols_; ++c) out.at(r, cols_ + c) = o.at(r, c);
    }
    return out;
}

bool matrix::is_zero() const {
    for (uint32_t v : e_)
        if (v) return false;
    return true;
}

// -- vector helpers ----------------------------------------------------------

bool is_zero_vec(const fvec& v) {
    for (uint32_t x : v)
        if (x) return false;
    return true;
}

fvec add_scaled(const fvec& a, uint32_t c, const fvec& b, const fp_field& f) {
    fvec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = f.add(a[i], f.mul(c, b[i]));
    return out;
}

fvec scale_vec(uint32_t c, const fvec& v, const fp_field& f) {
    fvec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = f.mul(c, v[i]);
    return out;
}

std::optional<uint32_t> collinear_factor(const fvec& a, const fvec& b, const fp_field& f) {
    size_t lead = a.size();
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i]) { lead = i; break; }
    if (lead == a.size()) return std::nullopt;  // a == 0
    uint32_t lambda = f.div(b[lead], a[lead]);
    for (size_t i = 0; i < a.size(); ++i)
        if (b[i] != f.mul(lambda, a[i])) return std::nullopt;
    return lambda;
}

// -- elimination -------------------------------------------------------------

reduce_result column_reduce(const matrix& m) {
    matrix r = m;
    matrix t = matrix::identity(m.cols(), m.field());
    const fp_field f = m.field();
    uint32_t lead = 0;
    for (uint32_t row = 0; row < m.rows() && lead < m.cols(); ++row) {
        uint32_t pivot = lead;
        while (pivot < m.cols() && r.at(row, pivot) == 0) ++pivot;
        if (pivot == m.cols()) continue;
        if (pivot != lead) {
            for (uint32_t i = 0; i < m.rows(); ++i) std::swap(r.at(i, lead), r.at(i, pivot));
            for (uint32_t i = 0; i < m.cols(); ++i) std::swap(t.at(i, lead), t.at(i, pivot));
        }
        uint32_t s = f.inv(r.at(row, lead));
        if (s != 1) {
            for (uint32_t i = 0; i < m.rows(); ++i) r.at(i, lead) = f.mul(s, r.at(i, lead));
            for (uint32_t i = 0; i < m.cols(); ++i) t.at(i, lead) = f.mul(s, t.at(i, lead));
        }
        for (uint32_t c = 0; c < m.cols(); ++c) {
            if (c == lead || r.at(row, c) == 0) continue;
            uint32_t k = f.neg(r.at(row, c));
            for (uint32_t i = 0; i < m.rows(); ++i)
                r.at(i, c) = f.add(r.at(i, c), f.mul(k, r.at(i, lead)));
            for (uint32_t i = 0; i < m.cols(); ++i)
                t.at(i, c) = f.add(t.at(i, c), f.mul(k, t.at(i, lead)));
        }
        ++lead;
    }
    return {std::move(r), std::move(t), lead};
}

std::optional<fvec> solve(const matrix& m, const fvec& b) {
    if (b.size() != m.rows()) throw usage_error("solve: rhs length mismatch");
    reduce_result rr = column_reduce(m);
    // Read coefficients off the pivot rows, then verify consistency.
    fvec y(m.cols(), 0);
    for (uint32_t c = 0; c < rr.rank; ++c) {
        uint32_t prow = 0;
        while (rr.reduced.at(prow, c) == 0) ++prow;
        y[c] = b[prow];
    }
    fvec check = rr.reduced.apply(y);
    if (check != b) return std::nullopt;
    return rr.transform.apply(y);
}

// -- subspace ----------------------------------------------------------------

namespace {

std::vector<uint32_t> pivot_rows_of(const matrix& reduced_basis) {
    std::vector<uint32_t> piv;
    for (uint32_t c = 0; c < reduced_basis.cols(); ++c) {
        uint32_t r = 0;
        while (r < reduced_basis.rows() && reduced_basis.at(r, c) == 0) ++r;
        piv.push_back(r);
    }
    return piv;
}

}  // namespace

subspace::subspace(uint32_t ambient_dim, fp_field field) : basis_(ambient_dim, 0, field) {}

subspace subspace::span(const matrix& m) {
    reduce_result rr = column_reduce(m);
    matrix b(m.rows(), rr.rank, m.field());
    for (uint32_t c = 0; c < rr.rank; ++c) b.set_column(c, rr.reduced.column(c));
    subspace s(m.rows(), m.field());
    s.basis_ = std::move(b);
    s.pivots_ = pivot_rows_of(s.basis_);
    return s;
}

subspace subspace::full(uint32_t ambient_dim, fp_field field) {
    return span(matrix::identity(ambient_dim, field));
}

fvec subspace::reduce_vector(const fvec& v) const {
    if (v.size() != ambient_dim()) throw usage_error("subspace membership: dimension mismatch");
    const fp_field f = field();
    fvec r = v;
    for (uint32_t c = 0; c < dim(); ++c) {
        uint32_t coef = r[pivots_[c]];
        if (coef == 0) continue;
        uint32_t k = f.neg(coef);
        for (uint32_t i = 0; i < ambient_dim(); ++i)
            r[i] = f.add(r[i], f.mul(k, basis_.at(i, c)));
    }
    return r;
}

bool subspace::contains(const fvec& v) const { return is_zero_vec(reduce_vector(v)); }

bool subspace::contains(const subspace& o) const {
    if (o.ambient_dim() != ambient_dim()) throw usage_error("subspace containment: ambient mismatch");
    if (o.dim() > dim()) return false;
    for (uint32_t c = 0; c < o.dim(); ++c)
        if (!contains(o.basis_.column(c))) return false;
    return true;
}

subspace image(const matrix& m) { return subspace::span(m); }

subspace kernel(const matrix& m) {
    reduce_result rr = column_reduce(m);
    matrix k(m.cols(), m.cols() - rr.rank, m.field());
    for (uint32_t c = rr.rank; c < m.cols(); ++c)
        k.set_column(c - rr.rank, rr.transform.column(c));
    return subspace::span(k);
}

subspace preimage(const matrix& m, const subspace& s) {
    if (s.ambient_dim() != m.rows()) throw usage_error("preimage: ambient mismatch");
    // m v in s  <=>  (v, c) in ker [m | basis(s)] for some c.
    matrix aug = m.hstack(s.basis());
    subspace k = kernel(aug);
    matrix head(m.cols(), k.dim(), m.field());
    for (uint32_t c = 0; c < k.dim(); ++c)
        for (uint32_t r = 0; r < m.cols(); ++r) head.at(r, c) = k.basis().at(r, c);
    return subspace::span(head);
}

subspace sum(const subspace& a, const subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw usage_error("sum: ambient mismatch");
    return subspace::span(a.basis().hstack(b.basis()));
}

subspace intersect(const subspace& a, const subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw usage_error("intersect: ambient mismatch");
    // a x + b y = 0 => a x lies in the intersection.
    matrix aug = a.basis().hstack(b.basis());
    subspace k = kernel(aug);
    matrix head(a.dim(), k.dim(), a.field());
    for (uint32_t c = 0; c < k.dim(); ++c)
        for (uint32_t r = 0; r < a.dim(); ++r) head.at(r, c) = k.basis().at(r, c);
    return subspace::span(a.basis() * head);
}

subspace perp(const subspace& s) {
    // alpha annihilates s  <=>  basis(s)^T alpha = 0.
    return kernel(s.basis().transposed());
}

std::optional<affine_space> affine_preimage(const matrix& m, const affine_space& a) {
    std::optional<fvec> x0 = solve(m, a.point);
    subspace dir = preimage(m, a.dir);
    if (!x0) {
        // A point of the affine set may still be reachable even though the
        // chosen representative is not: solve against the whole set by
        // augmenting with the direction space.
        matrix aug = m.hstack(a.dir.basis());
        std::optional<fvec> y = solve(aug, a.point);
        if (!y) return std::nullopt;
        fvec head(m.cols());
        for (uint32_t i = 0; i < m.cols(); ++i) head[i] = (*y)[i];
        x0 = std::move(head);
    }
    // Canonical representative: reduce the point modulo the direction space.
    return affine_space{dir.reduce_vector(*x0), dir};
}

// -- flags -------------------------------------------------------------------

flag::flag(uint32_t ambient_dim, fp_field field, std::vector<subspace> spaces)
    : ambient_(ambient_dim), f_(field), spaces_(std::move(spaces)) {
    for (const subspace& s : spaces_) {
        if (s.ambient_dim() != ambient_) throw usage_error("flag: ambient mismatch");
        if (s.field() != f_) throw usage_error("flag: field mismatch");
    }
    std::sort(spaces_.begin(), spaces_.end(),
              [](const subspace& a, const subspace& b) { return a.dim() < b.dim(); });
    std::vector<subspace> uniq;
    for (const subspace& s : spaces_) {
        bool seen = false;
        for (const subspace& u : uniq) seen = seen || u == s;
        if (!seen) uniq.push_back(s);
    }
    spaces_ = std::move(uniq);
    for (size_t i = 0; i + 1 < spaces_.size(); ++i) {
        if (spaces_[i].dim() >= spaces_[i + 1].dim() || !spaces_[i + 1].contains(spaces_[i]))
            throw usage_error("flag: spaces do not form a chain");
    }
}

bool flag::is_complete() const {
    if (spaces_.size() != ambient_ + 1) return false;
    for (uint32_t i = 0; i <= ambient_; ++i)
        if (spaces_[i].dim() != i) return false;
    return true;
}

namespace {

// First column of `candidates` not contained in s.
fvec first_outside(const matrix& candidates, const subspace& s) {
    for (uint32_t c = 0; c < candidates.cols(); ++c) {
        fvec v = candidates.column(c);
        if (!s.contains(v)) return v;
    }
    throw internal_error("no candidate vector outside subspace");
}

}  // namespace

flag complete_flag(const flag& f) {
    std::vector<subspace> chain = f.spaces();
    const fp_field fld = f.field();
    const uint32_t n = f.ambient_dim();
    if (chain.empty() || chain.front().dim() != 0) chain.insert(chain.begin(), subspace(n, fld));
    if (chain.back().dim() != n) chain.push_back(subspace::full(n, fld));
    std::vector<subspace> out;
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
        out.push_back(chain[i]);
        subspace cur = chain[i];
        const subspace& next = chain[i + 1];
        while (cur.dim() + 1 < next.dim()) {
            fvec v = first_outside(next.basis(), cur);
            cur = sum(cur, subspace::span(matrix::from_columns(n, {v}, fld)));
            out.push_back(cur);
        }
    }
    out.push_back(chain.back());
    return flag(n, fld, std::move(out));
}

// -- compatible bases --------------------------------------------------------

fvec basis_with_labels::vector_for(uint32_t label) const {
    return vectors.column(column_of(label));
}

uint32_t basis_with_labels::column_of(uint32_t label) const {
    for (uint32_t c = 0; c < labels.size(); ++c)
        if (labels[c] == label) return c;
    throw usage_error("unknown basis label " + std::to_string(label));
}

bool compatible(const matrix& basis_vectors, const flag& f) {
    for (const subspace& s : f.spaces()) {
        uint32_t inside = 0;
        for (uint32_t c = 0; c < basis_vectors.cols(); ++c)
            if (s.contains(basis_vectors.column(c))) ++inside;
        if (inside != s.dim()) return false;
    }
    return true;
}

bool compatible(const basis_with_labels& b, const flag& f) { return compatible(b.vectors, f); }

namespace {

// Both chains are complete flags of a common top space; returns basis vectors
// of that top space compatible with both.
std::vector<fvec> common_basis_rec(const std::vector<subspace>& fs, const std::vector<subspace>& gs) {
    const size_t len = fs.size();  // dims 0 .. len-1
    if (len <= 1) return {};
    const size_t top = len - 1;
    const subspace& fn1 = fs[top - 1];

    size_t s = 0;
    for (size_t i = top; i-- > 0;) {
        if (fn1.contains(gs[i])) { s = i; break; }
    }

    std::vector<subspace> gp;
    gp.reserve(top);
    for (size_t i = 0; i < top; ++i)
        gp.push_back(i <= s ? gs[i] : intersect(gs[i + 1], fn1));

    std::vector<subspace> fp(fs.begin(), fs.end() - 1);
    std::vector<fvec> basis = common_basis_rec(fp, gp);
    basis.push_back(first_outside(gs[s + 1].basis(), fn1));
    return basis;
}

}  // namespace

basis_with_labels common_basis(const flag& f, const flag& g) {
    if (f.ambient_dim() != g.ambient_dim() || f.field() != g.field())
        throw usage_error("common_basis: flags live in different spaces");
    flag fc = complete_flag(f);
    flag gc = complete_flag(g);
    std::vector<fvec> vecs = common_basis_rec(fc.spaces(), gc.spaces());
    basis_with_labels out{matrix::from_columns(f.ambient_dim(), vecs, f.field()), {}};
    for (uint32_t i = 0; i < vecs.size(); ++i) out.labels.push_back(i);
    return out;
}

matrix inverse(const matrix& m) {
    if (m.rows() != m.cols()) throw usage_error("inverse: matrix not square");
    reduce_result rr = column_reduce(m);
    if (rr.rank != m.cols()) throw usage_error("inverse: matrix is singular");
    // m * t = reduced = permutation-free RCEF of a full-rank square matrix,
    // which is the identity, so t is the inverse.
    if (!(rr.reduced == matrix::identity(m.rows(), m.field())))
        throw internal_error("full-rank square RCEF is not the identity");
    return rr.transform;
}

matrix dual_basis(const matrix& basis_vectors) {
    return inverse(basis_vectors).transposed();
}

std::optional<matrix> express_in(const matrix& basis_cols, const matrix& vectors) {
    if (basis_cols.rows() != vectors.rows()) throw usage_error("express_in: ambient mismatch");
    matrix out(basis_cols.cols(), vectors.cols(), basis_cols.field());
    for (uint32_t c = 0; c < vectors.cols(); ++c) {
        std::optional<fvec> x = solve(basis_cols, vectors.column(c));
        if (!x) return std::nullopt;
        out.set_column(c, *x);
    }
    return out;
}

}  // namespace pmod
