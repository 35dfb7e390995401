#include "oracle.hpp"

#include <algorithm>
#include <functional>

namespace pmod {

namespace {

std::pair<uint32_t, uint32_t> arrow_ends(const zigzag_shape& s, uint32_t arrow) {
    // (source, target) of the poset map across this arrow
    return s.dir(arrow) == direction::forward ? std::make_pair(arrow, arrow + 1)
                                              : std::make_pair(arrow + 1, arrow);
}

}  // namespace

validation_report validate(const decomposition& d) {
    validation_report rep;
    auto fail = [&](uint32_t where, std::string what) {
        rep.ok = false;
        rep.failures.push_back({where, std::move(what)});
    };
    const persistence_module& v = d.mod;
    const fp_field f = v.field();

    for (size_t si = 0; si < d.parts.size(); ++si) {
        const summand& s = d.parts[si];
        if (s.itv.lo > s.itv.hi || s.itv.hi >= v.points()) {
            fail(s.itv.lo, "summand " + std::to_string(si) + ": interval out of range");
            continue;
        }
        if (s.gens.size() != s.itv.length()) {
            fail(s.itv.lo, "summand " + std::to_string(si) + ": generator count mismatch");
            continue;
        }
        for (uint32_t x = s.itv.lo; x <= s.itv.hi; ++x) {
            if (s.gen_at(x).size() != v.dim(x))
                fail(x, "summand " + std::to_string(si) + ": generator length mismatch");
            else if (is_zero_vec(s.gen_at(x)))
                fail(x, "summand " + std::to_string(si) + ": zero generator");
        }
    }
    if (!rep.ok) return rep;

    // (a) per-point bases
    for (uint32_t x = 0; x < v.points(); ++x) {
        std::vector<fvec> cols;
        for (const summand& s : d.parts)
            if (s.itv.contains(x)) cols.push_back(s.gen_at(x));
        if (cols.size() != v.dim(x)) {
            fail(x, "point covered by " + std::to_string(cols.size()) + " generators, fiber has dimension " +
                        std::to_string(v.dim(x)));
            continue;
        }
        matrix m = matrix::from_columns(v.dim(x), cols, f);
        if (column_reduce(m).rank != v.dim(x))
            fail(x, "generators at this point are linearly dependent");
    }

    // (b) map closure per summand
    for (size_t si = 0; si < d.parts.size(); ++si) {
        const summand& s = d.parts[si];
        for (uint32_t a = 0; a + 1 < v.points(); ++a) {
            auto [src, dst] = arrow_ends(v.shape(), a);
            if (!s.itv.contains(src)) continue;
            fvec mapped = v.map(a).apply(s.gen_at(src));
            if (s.itv.contains(dst)) {
                std::optional<uint32_t> lambda = collinear_factor(s.gen_at(dst), mapped, f);
                if (!lambda || *lambda == 0)
                    fail(a, "summand " + std::to_string(si) +
                                ": map does not carry the generator onto a nonzero multiple");
            } else if (!is_zero_vec(mapped)) {
                fail(a, "summand " + std::to_string(si) + ": map leaks outside the interval");
            }
        }
    }
    return rep;
}

barcode chain_rank_barcode(const persistence_module& v) {
    for (direction dd : v.shape().dirs())
        if (dd != direction::forward)
            throw usage_error("chain_rank_barcode: module is not an all-forward chain");
    const uint32_t n = v.points();
    // r[b][d] = rank of the composed map from b to d (inclusive indices)
    std::vector<std::vector<uint32_t>> r(n, std::vector<uint32_t>(n, 0));
    for (uint32_t b = 0; b < n; ++b) {
        matrix comp = matrix::identity(v.dim(b), v.field());
        r[b][b] = v.dim(b);
        for (uint32_t dd = b + 1; dd < n; ++dd) {
            comp = v.map(dd - 1) * comp;
            r[b][dd] = column_reduce(comp).rank;
        }
    }
    auto rank_at = [&](int64_t b, int64_t dd) -> int64_t {
        if (b < 0 || dd >= int64_t(n)) return 0;
        return r[size_t(b)][size_t(dd)];
    };
    barcode out;
    for (uint32_t b = 0; b < n; ++b)
        for (uint32_t dd = b; dd < n; ++dd) {
            int64_t mult = rank_at(b, dd) - rank_at(int64_t(b) - 1, dd) - rank_at(b, dd + 1) +
                           rank_at(int64_t(b) - 1, dd + 1);
            if (mult < 0) throw internal_error("rank counts produced a negative multiplicity");
            if (mult > 0) out.add({b, dd}, uint32_t(mult));
        }
    return out;
}

// -- exhaustive search ---------------------------------------------------------

namespace {

// Every nonzero vector of GF(2)^dim.
std::vector<fvec> nonzero_vectors_gf2(uint32_t dim) {
    std::vector<fvec> out;
    for (uint32_t bits = 1; bits < (1u << dim); ++bits) {
        fvec v(dim, 0);
        for (uint32_t i = 0; i < dim; ++i) v[i] = (bits >> i) & 1;
        out.push_back(std::move(v));
    }
    return out;
}

bool summand_is_closed(const persistence_module& v, const summand& s) {
    for (uint32_t a = 0; a + 1 < v.points(); ++a) {
        auto [src, dst] = arrow_ends(v.shape(), a);
        if (!s.itv.contains(src)) continue;
        fvec mapped = v.map(a).apply(s.gen_at(src));
        if (s.itv.contains(dst)) {
            std::optional<uint32_t> lambda = collinear_factor(s.gen_at(dst), mapped, v.field());
            if (!lambda || *lambda == 0) return false;
        } else if (!is_zero_vec(mapped)) {
            return false;
        }
    }
    return true;
}

}  // namespace

barcode exhaustive_decompose(const persistence_module& v) {
    if (v.field().modulus() != 2)
        throw usage_error("exhaustive_decompose: only GF(2) is supported");
    if (v.total_dim() > 6)
        throw usage_error("exhaustive_decompose: total dimension exceeds the search budget");
    const uint32_t n = v.points();

    // All interval submodules.
    std::vector<summand> candidates;
    for (uint32_t lo = 0; lo < n; ++lo) {
        for (uint32_t hi = lo; hi < n; ++hi) {
            bool possible = true;
            for (uint32_t x = lo; x <= hi; ++x) possible = possible && v.dim(x) > 0;
            if (!possible) continue;
            std::vector<std::vector<fvec>> choices;
            for (uint32_t x = lo; x <= hi; ++x) choices.push_back(nonzero_vectors_gf2(v.dim(x)));
            std::vector<size_t> idx(choices.size(), 0);
            for (;;) {
                summand s{{lo, hi}, {}};
                for (size_t k = 0; k < choices.size(); ++k) s.gens.push_back(choices[k][idx[k]]);
                if (summand_is_closed(v, s)) candidates.push_back(s);
                size_t k = 0;
                while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
                if (k == idx.size()) break;
            }
        }
    }

    // Backtracking over families: cover the first unsaturated point while the
    // chosen generators stay independent everywhere.
    std::vector<uint32_t> covered(n, 0);
    std::vector<std::vector<fvec>> used(n);
    std::vector<const summand*> family;
    std::vector<summand> found;

    std::function<bool()> search = [&]() -> bool {
        uint32_t x = n;
        for (uint32_t p = 0; p < n; ++p)
            if (covered[p] < v.dim(p)) { x = p; break; }
        if (x == n) {
            for (const summand* s : family) found.push_back(*s);
            return true;
        }
        for (const summand& c : candidates) {
            if (!c.itv.contains(x)) continue;
            bool independent = true;
            for (uint32_t p = c.itv.lo; p <= c.itv.hi && independent; ++p) {
                if (covered[p] + 1 > v.dim(p)) { independent = false; break; }
                std::vector<fvec> cols = used[p];
                cols.push_back(c.gen_at(p));
                matrix m = matrix::from_columns(v.dim(p), cols, v.field());
                independent = column_reduce(m).rank == cols.size();
            }
            if (!independent) continue;
            for (uint32_t p = c.itv.lo; p <= c.itv.hi; ++p) {
                ++covered[p];
                used[p].push_back(c.gen_at(p));
            }
            family.push_back(&c);
            if (search()) return true;
            family.pop_back();
            for (uint32_t p = c.itv.lo; p <= c.itv.hi; ++p) {
                --covered[p];
                used[p].pop_back();
            }
        }
        return false;
    };

    if (!search()) throw internal_error("no interval decomposition found by exhaustive search");
    barcode out;
    for (const summand& s : found) out.add(s.itv);
    return out;
}

// -- hom spaces ----------------------------------------------------------------

std::vector<module_hom> hom_basis(const persistence_module& v, const persistence_module& w) {
    if (!(v.shape() == w.shape())) throw usage_error("hom_basis: shapes differ");
    if (v.field() != w.field()) throw usage_error("hom_basis: fields differ");
    const fp_field f = v.field();
    const uint32_t n = v.points();

    std::vector<uint32_t> offset(n + 1, 0);
    for (uint32_t x = 0; x < n; ++x) offset[x + 1] = offset[x] + w.dim(x) * v.dim(x);
    const uint32_t unknowns = offset[n];
    auto slot = [&](uint32_t x, uint32_t r, uint32_t c) { return offset[x] + r * v.dim(x) + c; };

    uint32_t total_rows = 0;
    for (uint32_t a = 0; a + 1 < n; ++a) {
        auto [src, dst] = arrow_ends(v.shape(), a);
        total_rows += w.dim(dst) * v.dim(src);
    }
    matrix constraints(total_rows, unknowns, f);
    uint32_t row = 0;
    for (uint32_t a = 0; a + 1 < n; ++a) {
        auto [src, dst] = arrow_ends(v.shape(), a);
        const matrix& mv = v.map(a);
        const matrix& mw = w.map(a);
        // f_dst * mv - mw * f_src = 0, one equation per (r, c)
        for (uint32_t r = 0; r < w.dim(dst); ++r)
            for (uint32_t c = 0; c < v.dim(src); ++c) {
                for (uint32_t k = 0; k < v.dim(dst); ++k)
                    constraints.at(row, slot(dst, r, k)) =
                        f.add(constraints.at(row, slot(dst, r, k)), mv.at(k, c));
                for (uint32_t k = 0; k < w.dim(src); ++k)
                    constraints.at(row, slot(src, k, c)) =
                        f.sub(constraints.at(row, slot(src, k, c)), mw.at(r, k));
                ++row;
            }
    }

    subspace sol = kernel(constraints);
    std::vector<module_hom> out;
    for (uint32_t c = 0; c < sol.dim(); ++c) {
        fvec flat = sol.basis().column(c);
        module_hom h;
        for (uint32_t x = 0; x < n; ++x) {
            matrix m(w.dim(x), v.dim(x), f);
            for (uint32_t r = 0; r < w.dim(x); ++r)
                for (uint32_t cc = 0; cc < v.dim(x); ++cc) m.at(r, cc) = flat[slot(x, r, cc)];
            h.push_back(std::move(m));
        }
        out.push_back(std::move(h));
    }
    return out;
}

module_hom compose(const module_hom& second, const module_hom& first) {
    if (second.size() != first.size()) throw usage_error("compose: point counts differ");
    module_hom out;
    for (size_t x = 0; x < first.size(); ++x) out.push_back(second[x] * first[x]);
    return out;
}

bool is_zero_hom(const module_hom& h) {
    for (const matrix& m : h)
        if (!m.is_zero()) return false;
    return true;
}

}  // namespace pmod
