#include "decompose.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "sweep.hpp"

namespace pmod {

namespace {

using rng_t = std::mt19937_64;

void require_forward_chain(const persistence_module& v, const char* who) {
    for (direction d : v.shape().dirs())
        if (d != direction::forward)
            throw usage_error(std::string(who) + ": module is not an all-forward chain");
}

}  // namespace

// -- flags at the ends of a chain ---------------------------------------------

flag_at flag_of_images(const persistence_module& chain) {
    require_forward_chain(chain, "flag_of_images");
    const uint32_t z = chain.points() - 1;
    const fp_field f = chain.field();
    std::vector<subspace> spaces{subspace::full(chain.dim(z), f)};
    matrix comp = matrix::identity(chain.dim(z), f);
    for (uint32_t x = z; x-- > 0;) {
        comp = comp * chain.map(x);
        spaces.push_back(image(comp));
    }
    return {z, flag_kind::images, flag(chain.dim(z), f, std::move(spaces))};
}

flag_at flag_of_kernels(const persistence_module& chain) {
    require_forward_chain(chain, "flag_of_kernels");
    const fp_field f = chain.field();
    std::vector<subspace> spaces{subspace(chain.dim(0), f)};
    matrix comp = matrix::identity(chain.dim(0), f);
    for (uint32_t x = 0; x + 1 < chain.points(); ++x) {
        comp = chain.map(x) * comp;
        spaces.push_back(kernel(comp));
    }
    return {0, flag_kind::kernels, flag(chain.dim(0), f, std::move(spaces))};
}

// -- lifting -------------------------------------------------------------------

namespace {

// Coherent lift of `target` (a vector in the last fiber) leftward through an
// all-forward chain. The full affine solution set is carried per point, so
// the lift reaches every point from which the target is reachable; the
// generators are then fixed by one pushforward pass from the far end.
std::pair<uint32_t, std::vector<fvec>> lift_chain(const persistence_module& v, const fvec& target) {
    const uint32_t z = v.points() - 1;
    std::vector<std::optional<affine_space>> sets(v.points());
    sets[z] = affine_space{target, subspace(v.dim(z), v.field())};
    uint32_t lo = z;
    for (uint32_t x = z; x-- > 0;) {
        std::optional<affine_space> pre = affine_preimage(v.map(x), *sets[x + 1]);
        if (!pre) break;
        sets[x] = std::move(pre);
        lo = x;
    }
    std::vector<fvec> gens;
    fvec g = sets[lo]->point;
    gens.push_back(g);
    for (uint32_t x = lo; x < z; ++x) {
        g = v.map(x).apply(g);
        gens.push_back(g);
    }
    if (gens.back() != target) throw internal_error("chain lift did not reproduce its target");
    return {lo, std::move(gens)};
}

matrix drop_column(const matrix& m, uint32_t col) {
    std::vector<fvec> cols;
    for (uint32_t c = 0; c < m.cols(); ++c)
        if (c != col) cols.push_back(m.column(c));
    return matrix::from_columns(m.rows(), cols, m.field());
}

void check_split_inputs(const persistence_module& chain, const basis_with_labels& basis,
                        const flag_at& fl, const char* who) {
    const uint32_t at = fl.point;
    if (chain.dim(at) == 0) throw usage_error(std::string(who) + ": fiber at the split point is zero");
    if (basis.vectors.rows() != chain.dim(at) || basis.vectors.cols() != chain.dim(at))
        throw usage_error(std::string(who) + ": basis shape does not match the fiber");
    if (column_reduce(basis.vectors).rank != basis.vectors.cols())
        throw usage_error(std::string(who) + ": vectors do not form a basis");
    if (!compatible(basis.vectors, fl.fl))
        throw usage_error(std::string(who) + ": basis is not compatible with the required flag");
}

}  // namespace

// -- one-vector splits ---------------------------------------------------------

split_result split_at_max(const persistence_module& chain, const basis_with_labels& basis,
                          uint32_t pick) {
    require_forward_chain(chain, "split_at_max");
    flag_at fl = flag_of_images(chain);
    check_split_inputs(chain, basis, fl, "split_at_max");
    const uint32_t z = chain.points() - 1;
    const uint32_t col = basis.column_of(pick);

    auto [lo, gens] = lift_chain(chain, basis.vectors.column(col));

    std::vector<subspace> w(chain.points(), subspace(0, chain.field()));
    w[z] = subspace::span(drop_column(basis.vectors, col));
    for (uint32_t x = z; x-- > 0;) w[x] = preimage(chain.map(x), w[x + 1]);

    split_result out{{interval{lo, z}, std::move(gens)}, {}};
    for (uint32_t x = 0; x < chain.points(); ++x) out.complement.push_back(w[x].basis());
    return out;
}

split_result split_at_min(const persistence_module& chain, const basis_with_labels& basis,
                          uint32_t pick) {
    require_forward_chain(chain, "split_at_min");
    flag_at fl = flag_of_kernels(chain);
    check_split_inputs(chain, basis, fl, "split_at_min");
    const uint32_t n = chain.points();
    const fp_field f = chain.field();

    persistence_module vd = dual_module(chain);
    basis_with_labels bd{dual_basis(basis.vectors), basis.labels};
    split_result rd = split_at_max(vd, bd, pick);
    const uint32_t hi = n - 1 - rd.u.itv.lo;

    std::vector<fvec> gens{basis.vectors.column(basis.column_of(pick))};
    for (uint32_t x = 0; x < hi; ++x) gens.push_back(chain.map(x).apply(gens.back()));
    for (const fvec& g : gens)
        if (is_zero_vec(g)) throw internal_error("split_at_min: generator died inside its interval");
    if (hi + 1 < n && !is_zero_vec(chain.map(hi).apply(gens.back())))
        throw internal_error("split_at_min: generator does not die at the dual boundary");

    split_result out{{interval{0, hi}, std::move(gens)}, {}};
    for (uint32_t x = 0; x < n; ++x) {
        if (x <= hi) {
            matrix row(1, chain.dim(x), f);
            const fvec dual_gen = rd.u.gen_at(n - 1 - x);
            for (uint32_t cidx = 0; cidx < chain.dim(x); ++cidx) row.at(0, cidx) = dual_gen[cidx];
            out.complement.push_back(kernel(row).basis());
        } else {
            out.complement.push_back(subspace::full(chain.dim(x), f).basis());
        }
    }
    return out;
}

// -- batched splits (every basis vector at once) --------------------------------

namespace {

struct batch_split {
    std::vector<summand> bars;       // one per basis column, in column order
    std::vector<matrix> leftover;    // per point; zero columns at the cut point
};

batch_split batched_split_at_max(const persistence_module& chain, const basis_with_labels& basis) {
    require_forward_chain(chain, "split_at_max");
    flag_at fl = flag_of_images(chain);
    check_split_inputs(chain, basis, fl, "split_at_max");
    const uint32_t z = chain.points() - 1;

    batch_split out;
    for (uint32_t c = 0; c < basis.vectors.cols(); ++c) {
        auto [lo, gens] = lift_chain(chain, basis.vectors.column(c));
        out.bars.push_back({interval{lo, z}, std::move(gens)});
    }
    // The complement is the chain of kernels of the composed maps into z.
    std::vector<subspace> k(chain.points(), subspace(0, chain.field()));
    k[z] = subspace(chain.dim(z), chain.field());
    for (uint32_t x = z; x-- > 0;) k[x] = preimage(chain.map(x), k[x + 1]);
    for (uint32_t x = 0; x < chain.points(); ++x) out.leftover.push_back(k[x].basis());
    return out;
}

batch_split batched_split_at_min(const persistence_module& chain, const basis_with_labels& basis) {
    require_forward_chain(chain, "split_at_min");
    flag_at fl = flag_of_kernels(chain);
    check_split_inputs(chain, basis, fl, "split_at_min");
    const uint32_t n = chain.points();
    const fp_field f = chain.field();

    persistence_module vd = dual_module(chain);
    basis_with_labels bd{dual_basis(basis.vectors), basis.labels};
    batch_split dualside = batched_split_at_max(vd, bd);

    batch_split out;
    for (uint32_t c = 0; c < basis.vectors.cols(); ++c) {
        const uint32_t hi = n - 1 - dualside.bars[c].itv.lo;
        std::vector<fvec> gens{basis.vectors.column(c)};
        for (uint32_t x = 0; x < hi; ++x) gens.push_back(chain.map(x).apply(gens.back()));
        out.bars.push_back({interval{0, hi}, std::move(gens)});
    }
    for (uint32_t x = 0; x < n; ++x) {
        std::vector<fvec> rows;
        for (uint32_t c = 0; c < basis.vectors.cols(); ++c)
            if (out.bars[c].itv.hi >= x) rows.push_back(dualside.bars[c].gen_at(n - 1 - x));
        matrix r(uint32_t(rows.size()), chain.dim(x), f);
        for (uint32_t i = 0; i < rows.size(); ++i)
            for (uint32_t j = 0; j < chain.dim(x); ++j) r.at(i, j) = rows[i][j];
        out.leftover.push_back(kernel(r).basis());
    }
    return out;
}

batch_split unreverse(batch_split b, uint32_t n_points) {
    for (summand& s : b.bars) s = reverse_summand(s, n_points);
    std::reverse(b.leftover.begin(), b.leftover.end());
    return b;
}

}  // namespace

// -- peeling a chain -----------------------------------------------------------

split_result peel_chain(const persistence_module& chain, uint32_t z, uint32_t pick_index) {
    require_forward_chain(chain, "peel_chain");
    if (z >= chain.points()) throw usage_error("peel_chain: point out of range");
    if (chain.dim(z) == 0) throw usage_error("peel_chain: fiber at the chosen point is zero");
    const uint32_t n = chain.points();

    persistence_module left = restrict(chain, 0, z);
    persistence_module right = restrict(chain, z, n - 1);
    basis_with_labels b = common_basis(flag_of_images(left).fl, flag_of_kernels(right).fl);
    const uint32_t label = b.labels[pick_index % b.labels.size()];

    split_result l = split_at_max(left, b, label);
    split_result r = split_at_min(right, b, label);

    if (l.u.gens.back() != r.u.gens.front())
        throw internal_error("peel_chain: the two sides disagree at the split point");
    if (!(l.complement[z] == r.complement[0]))
        throw internal_error("peel_chain: complements disagree at the split point");

    split_result out{{interval{l.u.itv.lo, z + r.u.itv.hi}, l.u.gens}, {}};
    out.u.gens.insert(out.u.gens.end(), r.u.gens.begin() + 1, r.u.gens.end());
    for (uint32_t x = 0; x <= z; ++x) out.complement.push_back(l.complement[x]);
    for (uint32_t x = z + 1; x < n; ++x) out.complement.push_back(r.complement[x - z]);
    return out;
}

// -- running complements ---------------------------------------------------------

persistence_module restrict_to_bases(const persistence_module& v, const std::vector<matrix>& bases) {
    if (bases.size() != v.points()) throw usage_error("restrict_to_bases: one basis per point");
    std::vector<uint32_t> dims;
    for (const matrix& b : bases) dims.push_back(b.cols());
    std::vector<matrix> maps;
    for (uint32_t i = 0; i + 1 < v.points(); ++i) {
        bool fwd = v.shape().dir(i) == direction::forward;
        const matrix& src = fwd ? bases[i] : bases[i + 1];
        const matrix& dst = fwd ? bases[i + 1] : bases[i];
        std::optional<matrix> n = express_in(dst, v.map(i) * src);
        if (!n) throw internal_error("restrict_to_bases: fibers are not closed under the maps");
        maps.push_back(std::move(*n));
    }
    return {v.shape(), std::move(dims), std::move(maps), v.field()};
}

summand embed_summand(const summand& s, const std::vector<matrix>& embed, uint32_t offset) {
    summand out{{s.itv.lo + offset, s.itv.hi + offset}, {}};
    for (uint32_t k = 0; k < s.gens.size(); ++k)
        out.gens.push_back(embed[s.itv.lo + k].apply(s.gens[k]));
    return out;
}

summand shift_summand(const summand& s, uint32_t offset) {
    return {{s.itv.lo + offset, s.itv.hi + offset}, s.gens};
}

summand reverse_summand(const summand& s, uint32_t n_points) {
    summand out{{n_points - 1 - s.itv.hi, n_points - 1 - s.itv.lo}, s.gens};
    std::reverse(out.gens.begin(), out.gens.end());
    return out;
}

namespace {

struct peel_state {
    persistence_module cur;
    std::vector<matrix> embed;  // per point: outer coords x cur coords
};

peel_state make_state(const persistence_module& v) {
    peel_state st{v, {}};
    for (uint32_t x = 0; x < v.points(); ++x)
        st.embed.push_back(matrix::identity(v.dim(x), v.field()));
    return st;
}

void shrink(peel_state& st, const std::vector<matrix>& keep) {
    persistence_module sub = restrict_to_bases(st.cur, keep);
    std::vector<matrix> embed;
    for (uint32_t x = 0; x < st.cur.points(); ++x) embed.push_back(st.embed[x] * keep[x]);
    st = {std::move(sub), std::move(embed)};
}

summand to_outer(const peel_state& st, const summand& s) { return embed_summand(s, st.embed, 0); }

}  // namespace

decomposition decompose_chain(const persistence_module& v, const decompose_options& opts) {
    require_forward_chain(v, "decompose_chain");
    std::optional<rng_t> rng;
    if (opts.seed) rng.emplace(*opts.seed);

    peel_state st = make_state(v);
    std::vector<summand> parts;
    while (st.cur.total_dim() > 0) {
        std::vector<uint32_t> nonzero;
        for (uint32_t x = 0; x < st.cur.points(); ++x)
            if (st.cur.dim(x) > 0) nonzero.push_back(x);
        uint32_t z = rng ? nonzero[(*rng)() % nonzero.size()] : nonzero.front();
        uint32_t pick = rng ? uint32_t((*rng)() % st.cur.dim(z)) : 0;
        split_result sr = peel_chain(st.cur, z, pick);
        parts.push_back(to_outer(st, sr.u));
        shrink(st, sr.complement);
    }
    return {v, std::move(parts)};
}

// -- the zigzag engine -----------------------------------------------------------

namespace {

std::vector<summand> chain_fast(const persistence_module& v, rng_t* rng);

// Monotone module of either orientation.
std::vector<summand> chain_fast_oriented(const persistence_module& v, rng_t* rng) {
    if (v.total_dim() == 0) return {};
    bool backward = v.points() > 1 && v.shape().dir(0) == direction::backward;
    if (!backward) return chain_fast(v, rng);
    std::vector<summand> bars = chain_fast(reverse_module(v), rng);
    for (summand& s : bars) s = reverse_summand(s, v.points());
    return bars;
}

// Full decomposition of an all-forward chain: peel every bar through one
// nonzero point at once, then recurse on the two leftover sides (which have a
// zero fiber at that point).
std::vector<summand> chain_fast(const persistence_module& v, rng_t* rng) {
    if (v.total_dim() == 0) return {};
    const uint32_t n = v.points();
    std::vector<uint32_t> nonzero;
    for (uint32_t x = 0; x < n; ++x)
        if (v.dim(x) > 0) nonzero.push_back(x);
    const uint32_t z = rng ? nonzero[(*rng)() % nonzero.size()] : nonzero.front();

    persistence_module left = restrict(v, 0, z);
    persistence_module right = restrict(v, z, n - 1);
    basis_with_labels b = common_basis(flag_of_images(left).fl, flag_of_kernels(right).fl);

    batch_split lb = batched_split_at_max(left, b);
    batch_split rb = batched_split_at_min(right, b);

    std::vector<summand> out;
    for (uint32_t c = 0; c < b.vectors.cols(); ++c) {
        if (lb.bars[c].gens.back() != rb.bars[c].gens.front())
            throw internal_error("chain peel: sides disagree at the split point");
        summand s{{lb.bars[c].itv.lo, z + rb.bars[c].itv.hi}, lb.bars[c].gens};
        s.gens.insert(s.gens.end(), rb.bars[c].gens.begin() + 1, rb.bars[c].gens.end());
        out.push_back(std::move(s));
    }
    for (const summand& s : chain_fast(restrict_to_bases(left, lb.leftover), rng))
        out.push_back(embed_summand(s, lb.leftover, 0));
    for (const summand& s : chain_fast(restrict_to_bases(right, rb.leftover), rng))
        out.push_back(embed_summand(shift_summand(s, 0), rb.leftover, z));
    return out;
}

matrix random_invertible(uint32_t d, fp_field f, rng_t& rng) {
    for (;;) {
        matrix m(d, d, f);
        for (uint32_t r = 0; r < d; ++r)
            for (uint32_t c = 0; c < d; ++c) m.at(r, c) = uint32_t(rng() % f.modulus());
        if (column_reduce(m).rank == d) return m;
    }
}

flag transport_flag(const flag& fl, const matrix& t) {
    std::vector<subspace> spaces;
    for (const subspace& s : fl.spaces()) spaces.push_back(subspace::span(t * s.basis()));
    return {t.rows(), fl.field(), std::move(spaces)};
}

matrix middle_step(const persistence_module& v, uint32_t arrow, const matrix& g) {
    const matrix& m = v.map(arrow);
    if (m.rows() != m.cols() || m.rows() != g.rows())
        throw internal_error("middle fibers of a fully split range must have equal dimension");
    try {
        return v.shape().dir(arrow) == direction::forward ? m * g : inverse(m) * g;
    } catch (const usage_error&) {
        throw internal_error("middle map of a fully split range is singular");
    }
}

// Full decomposition by induction on the number of extrema. Summands are
// returned in the coordinates of v.
std::vector<summand> decompose_faithful(const persistence_module& v, rng_t* rng) {
    if (v.total_dim() == 0) return {};
    if (v.shape().monotone()) return chain_fast_oriented(v, rng);

    const std::vector<uint32_t> ext = v.shape().extrema();
    const uint32_t e1 = ext[1];
    const uint32_t e2 = ext[ext.size() - 2];
    const uint32_t n = v.points();
    const fp_field f = v.field();

    peel_state st = make_state(v);
    std::vector<summand> out;

    auto keep_bases = [&](const std::vector<summand>& keep, uint32_t range_lo, uint32_t range_hi) {
        std::vector<matrix> bases;
        for (uint32_t x = 0; x < st.cur.points(); ++x) {
            if (x < range_lo || x > range_hi) {
                bases.push_back(matrix::identity(st.cur.dim(x), f));
                continue;
            }
            std::vector<fvec> cols;
            for (const summand& s : keep)
                if (s.itv.contains(x - range_lo)) cols.push_back(s.gen_at(x - range_lo));
            bases.push_back(matrix::from_columns(st.cur.dim(x), cols, f));
        }
        return bases;
    };

    // Summands of the restriction past the first extremum that vanish at the
    // cut extend by zero; the rest span the complement there.
    {
        std::vector<summand> a = decompose_faithful(restrict(st.cur, e1, n - 1), rng);
        std::vector<summand> keep, drop;
        for (summand& s : a) (s.itv.lo > 0 ? drop : keep).push_back(std::move(s));
        if (!drop.empty()) {
            for (const summand& s : drop)
                out.push_back(to_outer(st, extend_by_zero(s, e1, n - 1, {0})));
            shrink(st, keep_bases(keep, e1, n - 1));
        }
    }
    // Mirror step at the other end.
    {
        std::vector<summand> b = decompose_faithful(restrict(st.cur, 0, e2), rng);
        std::vector<summand> keep, drop;
        for (summand& s : b) (s.itv.hi < e2 ? drop : keep).push_back(std::move(s));
        if (!drop.empty()) {
            for (const summand& s : drop)
                out.push_back(to_outer(st, extend_by_zero(s, 0, e2, {e2})));
            shrink(st, keep_bases(keep, 0, e2));
        }
    }

    const uint32_t d = st.cur.dim(e1);
    if (d == 0) {
        // Nothing crosses the middle: the two outer blocks are independent.
        for (const summand& s : chain_fast_oriented(restrict(st.cur, 0, e1), rng))
            out.push_back(to_outer(st, s));
        for (const summand& s : chain_fast_oriented(restrict(st.cur, e2, n - 1), rng))
            out.push_back(to_outer(st, shift_summand(s, e2)));
        return out;
    }

    // Every remaining summand of either side restricts to the full middle
    // range, so all middle maps are invertible: propagate a fiber basis of
    // the first cut across it.
    std::vector<matrix> g;  // g[k] is the basis at point e1 + k
    g.push_back(rng ? random_invertible(d, f, *rng) : matrix::identity(d, f));
    for (uint32_t x = e1; x < e2; ++x) g.push_back(middle_step(st.cur, x, g.back()));

    persistence_module lblock = restrict(st.cur, 0, e1);
    persistence_module rblock = restrict(st.cur, e2, n - 1);
    const direction dl = st.cur.shape().dir(e1 - 1);
    const direction dr = st.cur.shape().dir(e2);

    flag fl = dl == direction::forward ? flag_of_images(lblock).fl
                                       : flag_of_kernels(reverse_module(lblock)).fl;
    flag fr = dr == direction::backward ? flag_of_images(reverse_module(rblock)).fl
                                        : flag_of_kernels(rblock).fl;

    basis_with_labels bh = common_basis(transport_flag(fl, inverse(g.front())),
                                        transport_flag(fr, inverse(g.back())));
    basis_with_labels bl{g.front() * bh.vectors, bh.labels};
    basis_with_labels br{g.back() * bh.vectors, bh.labels};

    batch_split ls = dl == direction::forward
                         ? batched_split_at_max(lblock, bl)
                         : unreverse(batched_split_at_min(reverse_module(lblock), bl), lblock.points());
    batch_split rs = dr == direction::backward
                         ? unreverse(batched_split_at_max(reverse_module(rblock), br), rblock.points())
                         : batched_split_at_min(rblock, br);

    for (uint32_t c = 0; c < bh.vectors.cols(); ++c) {
        const summand& lbar = ls.bars[c];
        const summand& rbar = rs.bars[c];
        if (lbar.itv.hi != e1 || rbar.itv.lo != 0)
            throw internal_error("outer split bars do not reach the cut extrema");
        summand s{{lbar.itv.lo, e2 + rbar.itv.hi}, lbar.gens};
        for (uint32_t x = e1 + 1; x < e2; ++x)
            s.gens.push_back(g[x - e1].apply(bh.vectors.column(c)));
        s.gens.insert(s.gens.end(), rbar.gens.begin() + (e1 == e2 ? 1 : 0), rbar.gens.end());
        out.push_back(to_outer(st, s));
    }
    for (const summand& s : chain_fast_oriented(restrict_to_bases(lblock, ls.leftover), rng))
        out.push_back(to_outer(st, embed_summand(s, ls.leftover, 0)));
    for (const summand& s : chain_fast_oriented(restrict_to_bases(rblock, rs.leftover), rng))
        out.push_back(to_outer(st, embed_summand(s, rs.leftover, e2)));
    return out;
}

}  // namespace

decomposition decompose_zigzag(const persistence_module& v, const decompose_options& opts) {
    if (v.shape().extrema().size() > kInductionExtremaLimit) return decompose_sweep(v);
    std::optional<rng_t> rng;
    if (opts.seed) rng.emplace(*opts.seed);
    return {v, decompose_faithful(v, rng ? &*rng : nullptr)};
}

monotone_report is_monotone_after(const persistence_module& v, uint32_t m_index,
                                  const std::vector<uint32_t>& probe_indices,
                                  const decompose_options& opts) {
    const std::vector<uint32_t> ext = v.shape().extrema();
    if (m_index >= ext.size()) throw usage_error("is_monotone_after: extremum index out of range");
    for (uint32_t idx : probe_indices) {
        if (idx < m_index) continue;
        if (idx >= ext.size()) throw usage_error("is_monotone_after: probe index out of range");
        decomposition d = decompose_zigzag(restrict(v, 0, ext[idx]), opts);
        for (const summand& s : d.parts) {
            if (s.itv.contains(ext[idx])) continue;      // alive at the truncation end
            if (s.itv.hi >= ext[m_index])                // intersects [z_m, z_n]
                return {false, idx, s.itv};
        }
    }
    return {};
}

}  // namespace pmod
