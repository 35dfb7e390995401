#include "doctest.h"
#include "decompose.hpp"
#include "oracle.hpp"
#include "test_helpers.hpp"

using namespace pmod;
using testing::rng_t;

namespace {

persistence_module gf2_chain(std::vector<uint32_t> dims, std::vector<matrix> maps) {
    fp_field f2(2);
    std::vector<direction> dirs(dims.size() - 1, direction::forward);
    return {zigzag_shape(uint32_t(dims.size()), std::move(dirs)), std::move(dims), std::move(maps),
            f2};
}

// Every GF(2) module on the given shape with the given dims.
template <typename Fn>
void for_each_gf2_module(const zigzag_shape& sh, const std::vector<uint32_t>& dims, Fn&& fn) {
    fp_field f2(2);
    std::vector<std::pair<uint32_t, uint32_t>> shapes;  // (rows, cols) per arrow
    uint64_t total_bits = 0;
    for (uint32_t i = 0; i + 1 < sh.points(); ++i) {
        bool fwd = sh.dir(i) == direction::forward;
        uint32_t r = fwd ? dims[i + 1] : dims[i];
        uint32_t c = fwd ? dims[i] : dims[i + 1];
        shapes.push_back({r, c});
        total_bits += uint64_t(r) * c;
    }
    REQUIRE(total_bits <= 20);
    for (uint64_t code = 0; code < (1ull << total_bits); ++code) {
        std::vector<matrix> maps;
        uint64_t bit = 0;
        for (auto [r, c] : shapes) {
            matrix m(r, c, f2);
            for (uint32_t rr = 0; rr < r; ++rr)
                for (uint32_t cc = 0; cc < c; ++cc) m.at(rr, cc) = (code >> bit++) & 1;
            maps.push_back(std::move(m));
        }
        fn(persistence_module(sh, dims, std::move(maps), f2));
    }
}

}  // namespace

TEST_CASE("validate accepts the empty decomposition of the zero module") {
    fp_field f2(2);
    persistence_module z(zigzag_shape(3, {direction::forward, direction::forward}), {0, 0, 0},
                         {matrix(0, 0, f2), matrix(0, 0, f2)}, f2);
    CHECK(validate({z, {}}).ok);
}

TEST_CASE("validate flags duplicated generators and leaks") {
    fp_field f2(2);
    persistence_module m = constant_module(zigzag_shape(2, {direction::forward}), {0, 1}, f2);
    // dims are (1,1); two summands repeating the same generator at point 0
    decomposition bad{m, {{{0, 0}, {{1}}}, {{0, 1}, {{1}, {1}}}}};
    validation_report rep = validate(bad);
    CHECK(!rep.ok);

    // a summand that maps outside its interval
    decomposition leak{m, {{{0, 0}, {{1}}}, {{1, 1}, {{1}}}}};
    validation_report rep2 = validate(leak);
    CHECK(!rep2.ok);
}

TEST_CASE("validate accepts engine output on random instances") {
    rng_t rng(31);
    for (int i = 0; i < 100; ++i) {
        persistence_module v = testing::random_zigzag(7, 3, i % 2 ? 5 : 2, rng);
        REQUIRE(validate(decompose_zigzag(v)).ok);
    }
}

TEST_CASE("rank-count barcode on hand-checked examples") {
    fp_field f2(2);
    SUBCASE("identity chain of length three") {
        matrix id1 = matrix::identity(1, f2);
        barcode b = chain_rank_barcode(gf2_chain({1, 1, 1}, {id1, id1}));
        CHECK(b.total() == 1);
        CHECK(b.multiplicity({0, 2}) == 1);
    }
    SUBCASE("zero map between two points") {
        barcode b = chain_rank_barcode(gf2_chain({1, 1}, {matrix(1, 1, f2)}));
        CHECK(b.multiplicity({0, 0}) == 1);
        CHECK(b.multiplicity({1, 1}) == 1);
    }
    SUBCASE("non-chains are rejected") {
        persistence_module m = constant_module(zigzag_shape(2, {direction::backward}), {0, 1},
                                               f2);
        CHECK_THROWS_AS(chain_rank_barcode(m), usage_error);
    }
}

TEST_CASE("the rank formula agrees with exhaustive search on every tiny chain") {
    // This grounds the rank-count oracle before anything else relies on it.
    for (uint32_t n = 1; n <= 3; ++n) {
        zigzag_shape sh(n, std::vector<direction>(n - 1, direction::forward));
        std::vector<uint32_t> dims(n, 0);
        for (;;) {
            for_each_gf2_module(sh, dims, [&](const persistence_module& v) {
                REQUIRE(chain_rank_barcode(v) == exhaustive_decompose(v));
            });
            uint32_t k = 0;
            while (k < n && ++dims[k] == 3) dims[k++] = 0;
            if (k == n) break;
        }
    }
}

TEST_CASE("exhaustive search on hand-checked examples") {
    fp_field f2(2);
    SUBCASE("constant module on two points") {
        persistence_module m = constant_module(zigzag_shape(2, {direction::forward}), {0, 1}, f2);
        barcode b = exhaustive_decompose(m);
        CHECK(b.multiplicity({0, 1}) == 1);
        CHECK(b.total() == 1);
    }
    SUBCASE("zero map splits into two points") {
        barcode b = exhaustive_decompose(gf2_chain({1, 1}, {matrix(1, 1, f2)}));
        CHECK(b.multiplicity({0, 0}) == 1);
        CHECK(b.multiplicity({1, 1}) == 1);
    }
    SUBCASE("refuses large instances and odd primes") {
        persistence_module big(zigzag_shape(2, {direction::forward}), {4, 4},
                               {matrix(4, 4, f2)}, f2);
        CHECK_THROWS_AS(exhaustive_decompose(big), usage_error);
        fp_field f5(5);
        persistence_module odd(zigzag_shape(1, {}), {1}, {}, f5);
        CHECK_THROWS_AS(exhaustive_decompose(odd), usage_error);
    }
}

TEST_CASE("exhaustive search agrees with the chain engine on all two-point modules") {
    for (uint32_t d1 = 0; d1 <= 2; ++d1)
        for (uint32_t d2 = 0; d2 <= 2; ++d2) {
            zigzag_shape sh(2, {direction::forward});
            for_each_gf2_module(sh, {d1, d2}, [&](const persistence_module& v) {
                decomposition d = decompose_chain(v);
                REQUIRE(validate(d).ok);
                REQUIRE(barcode_of(d) == exhaustive_decompose(v));
            });
        }
}

TEST_CASE("hom spaces match the interval overlap structure on a chain") {
    fp_field f2(2);
    zigzag_shape sh(3, std::vector<direction>(2, direction::forward));
    persistence_module whole = constant_module(sh, {0, 2}, f2);
    persistence_module tail = constant_module(sh, {1, 2}, f2);
    // on a forward chain, maps exist from the later-born bar into the earlier
    // one but not back
    CHECK(hom_basis(tail, whole).size() == 1);
    CHECK(hom_basis(whole, tail).empty());
    persistence_module head = constant_module(sh, {0, 0}, f2);
    CHECK(hom_basis(head, tail).empty());
}
