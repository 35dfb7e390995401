#include "sweep.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace pmod {

block_sweep::block_sweep(fp_field field, uint32_t first_dim, bool allow_mixing)
    : f_(field), allow_mixing_(allow_mixing), dims_{first_dim} {
    for (uint32_t i = 0; i < first_dim; ++i) {
        fvec e(first_dim, 0);
        e[i] = 1;
        open_.push_back({0, {std::move(e)}});
    }
}

block_sweep block_sweep::from_decomposition(const decomposition& d, bool allow_mixing) {
    block_sweep s(d.mod.field(), 0, allow_mixing);
    s.dims_ = d.mod.dims();
    s.dirs_ = d.mod.shape().dirs();
    s.maps_ = d.mod.maps();
    s.open_.clear();
    const uint32_t frontier = d.mod.points() - 1;

    std::map<uint32_t, std::vector<live_bar>> alive_by_birth;
    for (const summand& p : d.parts) {
        if (p.itv.hi < frontier) {
            s.closed_.push_back(p);
            continue;
        }
        alive_by_birth[p.itv.lo].push_back({p.itv.lo, p.gens});
    }
    // Canonical receive order: classes enter by birth; a class born across a
    // forward arrow goes on top, across a backward arrow to the bottom.
    for (auto& [birth, bars] : alive_by_birth) {
        bool on_top = birth == 0 || d.mod.shape().dir(birth - 1) == direction::forward;
        if (on_top)
            s.open_.insert(s.open_.end(), bars.begin(), bars.end());
        else
            s.open_.insert(s.open_.begin(), bars.begin(), bars.end());
    }
    if (s.open_.size() != s.dims_[frontier])
        throw usage_error("decomposition does not cover the frontier fiber");
    return s;
}

void block_sweep::mix_into(live_bar& into, const live_bar& from, uint32_t coef, const fp_field& f) {
    const uint32_t start = std::max(into.birth, from.birth);
    const uint32_t end = into.birth + uint32_t(into.gens.size());  // exclusive, = frontier + 1
    for (uint32_t x = start; x < end; ++x) {
        fvec& dst = into.gens[x - into.birth];
        const fvec& src = from.gens[x - from.birth];
        for (size_t i = 0; i < dst.size(); ++i) dst[i] = f.add(dst[i], f.mul(coef, src[i]));
    }
}

void block_sweep::close_bar(uint32_t index) {
    live_bar& b = open_[index];
    closed_.push_back({{b.birth, b.birth + uint32_t(b.gens.size()) - 1}, std::move(b.gens)});
    open_.erase(open_.begin() + index);
}

void block_sweep::push_arrow(direction dir, const matrix& m) {
    if (m.field() != f_) throw usage_error("arrow map over a different field");
    const uint32_t have = dims_.back();
    const uint32_t attach = dir == direction::forward ? m.cols() : m.rows();
    if (attach != have)
        throw usage_error("arrow map does not attach to the frontier fiber (expected " +
                          std::to_string(have) + ", got " + std::to_string(attach) + ")");
    if (dir == direction::forward)
        forward_step(m);
    else
        backward_step(m);
    dims_.push_back(dir == direction::forward ? m.rows() : m.cols());
    dirs_.push_back(dir);
    maps_.push_back(m);
}

void block_sweep::forward_step(const matrix& m) {
    const uint32_t t = uint32_t(dims_.size()) - 1;
    const uint32_t d = uint32_t(open_.size());

    subspace ker = kernel(m);
    if (ker.dim() > 0) {
        std::vector<fvec> frontier_gens;
        for (const live_bar& b : open_) frontier_gens.push_back(b.gens.back());
        matrix g = matrix::from_columns(dims_.back(), frontier_gens, f_);
        std::optional<matrix> kg = express_in(g, ker.basis());
        if (!kg) throw internal_error("frontier generators do not span the fiber");

        // Column-reduce the kernel in generator coordinates, pivots at the
        // highest receive-order position, then clear the pivot rows across
        // columns so only genuinely forced mixing remains.
        std::vector<fvec> cols;
        for (uint32_t c = 0; c < kg->cols(); ++c) cols.push_back(kg->column(c));
        std::vector<uint32_t> pivot(cols.size());
        auto last_nonzero = [](const fvec& v) {
            for (size_t i = v.size(); i-- > 0;)
                if (v[i]) return int64_t(i);
            return int64_t(-1);
        };
        for (size_t c = 0; c < cols.size(); ++c) {
            for (;;) {
                int64_t p = last_nonzero(cols[c]);
                if (p < 0) throw internal_error("kernel column collapsed during reduction");
                bool collided = false;
                for (size_t c2 = 0; c2 < c; ++c2) {
                    if (pivot[c2] == uint32_t(p)) {
                        uint32_t coef = f_.div(cols[c][size_t(p)], cols[c2][size_t(p)]);
                        for (size_t i = 0; i < cols[c].size(); ++i)
                            cols[c][i] = f_.sub(cols[c][i], f_.mul(coef, cols[c2][i]));
                        collided = true;
                        break;
                    }
                }
                if (!collided) {
                    pivot[c] = uint32_t(p);
                    break;
                }
            }
        }
        std::vector<size_t> order(cols.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return pivot[a] > pivot[b]; });
        for (size_t c = 0; c < cols.size(); ++c)
            for (size_t oi : order) {
                if (oi == c) continue;
                uint32_t entry = cols[c][pivot[oi]];
                if (entry == 0) continue;
                uint32_t coef = f_.div(entry, cols[oi][pivot[oi]]);
                for (size_t i = 0; i < cols[c].size(); ++i)
                    cols[c][i] = f_.sub(cols[c][i], f_.mul(coef, cols[oi][i]));
            }

        if (!allow_mixing_) {
            for (size_t c = 0; c < cols.size(); ++c)
                for (uint32_t i = 0; i < d; ++i)
                    if (i != pivot[c] && cols[c][i] != 0)
                        throw usage_error("summand neither extends nor dies across this map");
        }

        // New chains for the dying bars, from the pre-step chains.
        std::vector<live_bar> dying_chains;
        for (size_t c = 0; c < cols.size(); ++c) {
            const live_bar& base = open_[pivot[c]];
            live_bar nb{base.birth, std::vector<fvec>(base.gens.size(), fvec())};
            for (uint32_t k = 0; k < base.gens.size(); ++k)
                nb.gens[k] = fvec(base.gens[k].size(), 0);
            for (uint32_t i = 0; i < d; ++i) {
                if (cols[c][i] == 0) continue;
                mix_into(nb, open_[i], cols[c][i], f_);
            }
            dying_chains.push_back(std::move(nb));
        }
        std::vector<uint32_t> to_close;
        for (size_t c = 0; c < cols.size(); ++c) {
            open_[pivot[c]] = std::move(dying_chains[c]);
            to_close.push_back(pivot[c]);
        }
        std::sort(to_close.rbegin(), to_close.rend());
        for (uint32_t idx : to_close) close_bar(idx);
    }

    // Survivors extend by pushforward.
    for (live_bar& b : open_) b.gens.push_back(m.apply(b.gens.back()));
    std::vector<fvec> survivors;
    for (const live_bar& b : open_) survivors.push_back(b.gens.back());
    subspace span = subspace::span(matrix::from_columns(m.rows(), survivors, f_));
    if (span.dim() != survivors.size())
        throw internal_error("surviving generators became dependent");

    // Newborn bars complete the new fiber, greedily with standard vectors.
    for (uint32_t r = 0; r < m.rows(); ++r) {
        fvec e(m.rows(), 0);
        e[r] = 1;
        if (span.contains(e)) continue;
        span = sum(span, subspace::span(matrix::from_columns(m.rows(), {e}, f_)));
        open_.push_back({t + 1, {std::move(e)}});
    }
}

void block_sweep::backward_step(const matrix& m) {
    const uint32_t t = uint32_t(dims_.size()) - 1;
    const uint32_t d = uint32_t(open_.size());
    subspace im = image(m);

    std::vector<fvec> residuals;          // reduced residuals of the dying bars
    std::vector<uint32_t> residual_bars;  // open_ indices they belong to
    std::vector<bool> dies(d, false);
    std::vector<fvec> lifts(d);

    for (uint32_t i = 0; i < d; ++i) {
        fvec r = im.reduce_vector(open_[i].gens.back());
        if (!is_zero_vec(r)) {
            matrix rmat = matrix::from_columns(dims_.back(), residuals, f_);
            std::optional<fvec> combo = solve(rmat, r);
            if (!combo) {
                dies[i] = true;
                residuals.push_back(std::move(r));
                residual_bars.push_back(i);
                continue;
            }
            if (!allow_mixing_)
                throw usage_error("summand neither extends nor dies across this map");
            for (size_t j = 0; j < combo->size(); ++j) {
                if ((*combo)[j] == 0) continue;
                mix_into(open_[i], open_[residual_bars[j]], f_.neg((*combo)[j]), f_);
            }
        }
        std::optional<fvec> lift = solve(m, open_[i].gens.back());
        if (!lift) throw internal_error("generator marked liftable has no preimage");
        lifts[i] = std::move(*lift);
    }

    std::vector<live_bar> survivors;
    for (uint32_t i = 0; i < d; ++i) {
        if (dies[i]) continue;
        open_[i].gens.push_back(std::move(lifts[i]));
        survivors.push_back(std::move(open_[i]));
    }
    std::vector<uint32_t> to_close;
    for (uint32_t i = 0; i < d; ++i)
        if (dies[i]) to_close.push_back(i);
    std::sort(to_close.rbegin(), to_close.rend());
    for (uint32_t idx : to_close) close_bar(idx);

    open_.clear();
    subspace kern = kernel(m);
    for (uint32_t c = 0; c < kern.dim(); ++c)
        open_.push_back({t + 1, {kern.basis().column(c)}});
    open_.insert(open_.end(), survivors.begin(), survivors.end());
}

void block_sweep::push_block(const stream_block& b) {
    if (b.dims.size() != b.maps.size() || b.dims.empty())
        throw usage_error("block needs one map per appended point");
    for (size_t j = 0; j < b.dims.size(); ++j) {
        const matrix& m = b.maps[j];
        uint32_t away = b.dir == direction::forward ? m.rows() : m.cols();
        if (away != b.dims[j]) throw usage_error("block map shape does not match its dims entry");
        push_arrow(b.dir, m);
    }
}

persistence_module block_sweep::current() const {
    return {zigzag_shape(uint32_t(dims_.size()), dirs_), dims_, maps_, f_};
}

decomposition block_sweep::result() const {
    decomposition d{current(), closed_};
    const uint32_t frontier = uint32_t(dims_.size()) - 1;
    for (const live_bar& b : open_) d.parts.push_back({{b.birth, frontier}, b.gens});
    return d;
}

barcode block_sweep::closed_bars() const {
    barcode out;
    for (const summand& s : closed_) out.add(s.itv);
    return out;
}

barcode block_sweep::open_bars() const {
    barcode out;
    const uint32_t frontier = uint32_t(dims_.size()) - 1;
    for (const live_bar& b : open_) out.add({b.birth, frontier});
    return out;
}

decomposition decompose_sweep(const persistence_module& v) {
    block_sweep s(v.field(), v.dim(0), true);
    for (uint32_t i = 0; i + 1 < v.points(); ++i) s.push_arrow(v.shape().dir(i), v.map(i));
    decomposition d = s.result();
    return {v, std::move(d.parts)};
}

decomposition extend_decomposition(const decomposition& d, const persistence_module& next) {
    if (next.field() != d.mod.field()) throw usage_error("extend_decomposition: field mismatch");
    const uint32_t n_old = d.mod.points();
    if (next.points() < n_old || !(restrict(next, 0, n_old - 1) == d.mod))
        throw usage_error("extend_decomposition: module does not restrict to the decomposed one");
    block_sweep s = block_sweep::from_decomposition(d, /*allow_mixing=*/false);
    for (uint32_t i = n_old - 1; i + 1 < next.points(); ++i)
        s.push_arrow(next.shape().dir(i), next.map(i));
    decomposition out = s.result();
    return {next, std::move(out.parts)};
}

stream_result stream_decompose(fp_field field, uint32_t start_dim,
                               const std::vector<stream_block>& blocks, size_t horizon) {
    block_sweep s(field, start_dim, /*allow_mixing=*/true);
    const size_t take = std::min(horizon, blocks.size());
    for (size_t k = 0; k < take; ++k) {
        try {
            s.push_block(blocks[k]);
        } catch (const usage_error& e) {
            throw usage_error("block " + std::to_string(k + 1) + ": " + e.what());
        }
    }
    return {s.closed_bars(), s.open_bars(), s.result()};
}

}  // namespace pmod
