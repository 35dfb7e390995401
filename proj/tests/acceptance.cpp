// Acceptance suite: one line of output per criterion, exit status equal to
// the number of failed criteria. An optional argument runs one criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "decompose.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "sweep.hpp"
#include "test_helpers.hpp"

using namespace pmod;
using testing::rng_t;

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

barcode checked_barcode(const persistence_module& v, const decompose_options& opts = {}) {
    decomposition d = decompose_zigzag(v, opts);
    validation_report rep = validate(d);
    if (!rep.ok)
        throw std::runtime_error("validation failed: " + rep.failures.front().description);
    return barcode_of(d);
}

// ---- criterion 1: barcode uniqueness across randomized runs ----------------

void criterion_uniqueness() {
    rng_t rng(101);
    for (int i = 0; i < 500; ++i) {
        persistence_module v = testing::random_zigzag(8, 4, i % 2 ? 5 : 2, rng);
        barcode ref = checked_barcode(v);
        for (int run = 0; run < 20; ++run) {
            barcode got = barcode_of(decompose_zigzag(v, {rng()}));
            require(got == ref, "randomized run produced a different barcode (instance " +
                                    std::to_string(i) + ")");
        }
    }
}

// ---- criterion 2: chains against the rank-count oracle ---------------------

void criterion_chains() {
    rng_t rng(102);
    for (int i = 0; i < 500; ++i) {
        persistence_module v = testing::random_chain(10, 5, i % 2 ? 5 : 2, rng);
        decomposition d = decompose_chain(v);
        require(validate(d).ok, "chain decomposition failed validation");
        require(barcode_of(d) == chain_rank_barcode(v),
                "chain barcode disagrees with the rank-count oracle (instance " +
                    std::to_string(i) + ")");
    }
}

// ---- criterion 3: zigzags, validated and exhaustively cross-checked --------

void criterion_zigzags() {
    rng_t rng(103);
    for (int i = 0; i < 500; ++i) {
        persistence_module v = testing::random_zigzag(8, 4, i % 2 ? 5 : 2, rng);
        checked_barcode(v);
    }

    // every GF(2) module with up to 3 points and fiber dimensions up to 2
    fp_field f2(2);
    uint64_t instances = 0;
    for (uint32_t n = 1; n <= 3; ++n) {
        for (uint32_t pattern = 0; pattern < (n >= 2 ? 1u << (n - 1) : 1u); ++pattern) {
            std::vector<direction> dirs;
            for (uint32_t k = 0; k + 1 < n; ++k)
                dirs.push_back(pattern >> k & 1 ? direction::backward : direction::forward);
            zigzag_shape sh(n, dirs);
            std::vector<uint32_t> dims(n, 0);
            for (;;) {
                std::vector<std::pair<uint32_t, uint32_t>> shapes;
                uint32_t bits = 0;
                for (uint32_t a = 0; a + 1 < n; ++a) {
                    bool fwd = sh.dir(a) == direction::forward;
                    uint32_t r = fwd ? dims[a + 1] : dims[a];
                    uint32_t c = fwd ? dims[a] : dims[a + 1];
                    shapes.push_back({r, c});
                    bits += r * c;
                }
                for (uint64_t code = 0; code < (1ull << bits); ++code) {
                    std::vector<matrix> maps;
                    uint32_t bit = 0;
                    for (auto [r, c] : shapes) {
                        matrix m(r, c, f2);
                        for (uint32_t rr = 0; rr < r; ++rr)
                            for (uint32_t cc = 0; cc < c; ++cc) m.at(rr, cc) = code >> bit++ & 1;
                        maps.push_back(std::move(m));
                    }
                    persistence_module v(sh, dims, std::move(maps), f2);
                    require(checked_barcode(v) == exhaustive_decompose(v),
                            "engine disagrees with exhaustive search");
                    ++instances;
                }
                uint32_t k = 0;
                while (k < n && ++dims[k] == 3) dims[k++] = 0;
                if (k == n) break;
            }
        }
    }
    require(instances > 2000, "exhaustive sweep unexpectedly small");
}

// ---- criterion 4: duality reverses barcodes ---------------------------------

void criterion_duality() {
    rng_t rng(104);
    for (int i = 0; i < 200; ++i) {
        persistence_module v = testing::random_zigzag(8, 4, i % 2 ? 5 : 2, rng);
        require(checked_barcode(dual_module(v)) == checked_barcode(v).reversed(v.points()),
                "dual barcode is not the reversed barcode (instance " + std::to_string(i) + ")");
    }
}

// ---- criterion 5: linear duality facts --------------------------------------

void criterion_duality_facts() {
    rng_t rng(105);
    for (int i = 0; i < 1000; ++i) {
        fp_field f(i % 2 ? 5 : 2);
        uint32_t rows = 1 + rng() % 8, cols = 1 + rng() % 8;
        matrix m = testing::random_matrix(rows, cols, f, rng);
        subspace s = image(m);
        require(perp(perp(s)) == s, "perp is not an involution");
        subspace small = image(m * testing::random_matrix(cols, rng() % (cols + 1), f, rng));
        require(s.contains(small) && perp(small).contains(perp(s)),
                "perp does not reverse inclusions");
        require(image(m.transposed()) == perp(kernel(m)),
                "image of the transpose is not the annihilator of the kernel");
    }
}

// ---- criterion 6: two-flag compatible bases ----------------------------------

void criterion_common_basis() {
    rng_t rng(106);
    for (int i = 0; i < 1000; ++i) {
        fp_field f(i % 2 ? 5 : 2);
        uint32_t n = rng() % 7;
        flag fl = testing::random_flag(n, f, rng);
        flag gl = testing::random_flag(n, f, rng);
        basis_with_labels b = common_basis(fl, gl);
        require(compatible(b, fl) && compatible(b, gl),
                "common basis is not compatible with both flags");
    }

    // exhaustive certificate in GF(2)^2
    fp_field f2(2);
    std::vector<subspace> all{subspace(2, f2)};
    for (uint32_t bits = 1; bits < 4; ++bits) {
        matrix m(2, 1, f2);
        m.at(0, 0) = bits & 1;
        m.at(1, 0) = bits >> 1;
        all.push_back(image(m));
    }
    all.push_back(subspace::full(2, f2));

    std::vector<flag> flags;
    for (uint32_t subset = 0; subset < 32; ++subset) {
        std::vector<subspace> spaces;
        for (uint32_t k = 0; k < 5; ++k)
            if (subset >> k & 1) spaces.push_back(all[k]);
        try {
            flags.push_back(flag(2, f2, spaces));
        } catch (const usage_error&) {
        }
    }
    require(flags.size() == 16, "flag enumeration in GF(2)^2 is off");

    std::vector<std::pair<fvec, fvec>> bases;
    std::vector<fvec> nz{{1, 0}, {0, 1}, {1, 1}};
    for (const fvec& a : nz)
        for (const fvec& b : nz)
            if (a != b) bases.push_back({a, b});

    for (const flag& fl : flags)
        for (const flag& gl : flags) {
            basis_with_labels got = common_basis(fl, gl);
            require(compatible(got, fl) && compatible(got, gl),
                    "common basis fails the predicate in GF(2)^2");
            bool found = false, any = false;
            for (const auto& [a, b] : bases) {
                matrix m = matrix::from_columns(2, {a, b}, f2);
                bool ok = compatible(m, fl) && compatible(m, gl);
                any = any || ok;
                bool same = (got.vectors.column(0) == a && got.vectors.column(1) == b) ||
                            (got.vectors.column(0) == b && got.vectors.column(1) == a);
                found = found || (ok && same);
            }
            require(any, "exhaustive search found no compatible basis");
            require(found, "computed basis is not among the exhaustively verified ones");
        }
}

// ---- criterion 7: streaming against batch truncations ------------------------

void criterion_streaming() {
    rng_t rng(107);
    for (int i = 0; i < 100; ++i) {
        testing::random_stream s = testing::make_random_stream(20, 3, i % 2 ? 5 : 2, rng);
        barcode prev_closed;
        for (size_t horizon : {5, 10, 20}) {
            stream_result r = stream_decompose(s.f, s.start_dim, s.blocks, horizon);
            require(validate(r.decomp).ok, "streamed decomposition failed validation");
            persistence_module truncation = testing::stream_prefix_module(s, horizon);
            require(testing::merge_barcodes(r.closed, r.open) ==
                        barcode_of(decompose_zigzag(truncation)),
                    "streamed barcode differs from the batch barcode (instance " +
                        std::to_string(i) + ", horizon " + std::to_string(horizon) + ")");
            require(testing::barcode_subset(prev_closed, r.closed),
                    "closed bars are not monotone across horizons");
            prev_closed = r.closed;
        }
    }
}

// ---- criterion 8: rank-nullity, dimension sums, vanishing composites ---------

void criterion_counting() {
    rng_t rng(108);
    for (int i = 0; i < 1000; ++i) {
        fp_field f(i % 2 ? 5 : 2);
        matrix m = testing::random_matrix(1 + rng() % 8, 1 + rng() % 8, f, rng);
        require(column_reduce(m).rank + kernel(m).dim() == m.cols(), "rank-nullity fails");
    }

    for (int i = 0; i < 200; ++i) {
        persistence_module v = testing::random_zigzag(8, 4, i % 2 ? 5 : 2, rng);
        barcode b = checked_barcode(v);
        for (uint32_t x = 0; x < v.points(); ++x) {
            uint32_t covered = 0;
            for (const auto& [itv, mult] : b.bars())
                if (itv.contains(x)) covered += mult;
            require(covered == v.dim(x), "bar counts do not match fiber dimensions");
        }
    }

    // composites through a different interval vanish, all shapes up to 5 points
    fp_field f2(2);
    for (uint32_t n = 1; n <= 5; ++n) {
        for (uint32_t pattern = 0; pattern < (n >= 2 ? 1u << (n - 1) : 1u); ++pattern) {
            std::vector<direction> dirs;
            for (uint32_t k = 0; k + 1 < n; ++k)
                dirs.push_back(pattern >> k & 1 ? direction::backward : direction::forward);
            zigzag_shape sh(n, dirs);
            std::vector<interval> intervals;
            for (uint32_t lo = 0; lo < n; ++lo)
                for (uint32_t hi = lo; hi < n; ++hi) intervals.push_back({lo, hi});
            for (const interval& i : intervals)
                for (const interval& j : intervals) {
                    if (i == j) continue;
                    persistence_module mi = constant_module(sh, i, f2);
                    persistence_module mj = constant_module(sh, j, f2);
                    for (const module_hom& g : hom_basis(mi, mj))
                        for (const module_hom& h : hom_basis(mj, mi))
                            require(is_zero_hom(compose(h, g)),
                                    "composite through a different interval is nonzero");
                }
        }
    }
}

struct criterion {
    int id;
    const char* name;
    std::function<void()> run;
};

const std::vector<criterion> kCriteria{
    {1, "barcodes identical across 20 randomized runs on 500 random modules",
     criterion_uniqueness},
    {2, "chain decompositions validate and match the rank-count oracle on 500 chains",
     criterion_chains},
    {3, "zigzag decompositions validate on 500 instances and match exhaustive search "
        "on every tiny GF(2) module",
     criterion_zigzags},
    {4, "dual modules have reversed barcodes on 200 instances", criterion_duality},
    {5, "annihilator involution, inclusion reversal, transpose image on 1000 matrices",
     criterion_duality_facts},
    {6, "two-flag bases pass the compatibility predicate on 1000 pairs and the "
        "GF(2)^2 certificate search",
     criterion_common_basis},
    {7, "streamed barcodes equal batch barcodes at horizons 5/10/20 on 100 streams "
        "with monotone closed sets",
     criterion_streaming},
    {8, "rank-nullity, pointwise bar counts, and vanishing composites hold",
     criterion_counting},
};

}  // namespace

int main(int argc, char** argv) {
    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    int failures = 0;
    for (const criterion& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        auto start = std::chrono::steady_clock::now();
        std::string problem;
        try {
            c.run();
        } catch (const std::exception& e) {
            problem = e.what();
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (problem.empty()) {
            std::printf("[PASS] criterion %d: %s (%.1fs)\n", c.id, c.name, secs);
        } else {
            std::printf("[FAIL] criterion %d: %s (%.1fs): %s\n", c.id, c.name, secs,
                        problem.c_str());
            ++failures;
        }
    }
    return failures;
}
