#include "doctest.h"
#include "io.hpp"
#include "test_helpers.hpp"

using namespace pmod;
using testing::rng_t;

TEST_CASE("module files round-trip") {
    rng_t rng(61);
    for (int i = 0; i < 100; ++i) {
        persistence_module v = testing::random_zigzag(8, 4, i % 2 ? 5 : 101, rng);
        persistence_module back = parse_module(print_module(v));
        REQUIRE(back == v);
    }
}

TEST_CASE("module parser reports positioned errors") {
    auto line_of = [](const std::string& text) {
        try {
            parse_module(text);
        } catch (const parse_error& e) {
            return e.line;
        }
        return size_t(0);
    };
    CHECK(line_of("p 4\npoints 1\ndirs\ndims 0\n") == 1);                  // not prime
    CHECK(line_of("p 2\npoints 2\ndirs Q\ndims 0 0\n") == 3);             // bad direction
    CHECK(line_of("p 2\npoints 2\ndirs F\ndims 1\n") == 4);               // wrong dim count
    CHECK(line_of("p 2\npoints 2\ndirs F\ndims 1 1\nmap 2\n0\n") == 5);   // wrong arrow index
    CHECK(line_of("p 5\npoints 2\ndirs F\ndims 1 1\nmap 1\n7\n") == 6);   // entry not a residue
    CHECK(line_of("p 2\npoints 1\ndirs\ndims 0\nextra\n") == 5);          // trailing content
    CHECK_THROWS_AS(parse_module(""), parse_error);
}

TEST_CASE("module printer uses the documented layout") {
    fp_field f5(5);
    persistence_module m = constant_module(zigzag_shape(3, {direction::forward,
                                                            direction::backward}),
                                           {0, 1}, f5);
    CHECK(print_module(m) == "p 5\npoints 3\ndirs FB\ndims 1 1 0\nmap 1\n1\nmap 2\n");
}

TEST_CASE("barcode JSON round-trips and validates") {
    barcode_file f;
    f.p = 5;
    f.points = 4;
    f.bars.add({0, 2}, 2);
    f.bars.add({3, 3}, 1);
    barcode_file back = parse_barcode_json(print_barcode_json(f));
    CHECK(back.p == f.p);
    CHECK(back.points == f.points);
    CHECK(back.bars == f.bars);

    CHECK_THROWS_AS(parse_barcode_json("not json"), parse_error);
    CHECK_THROWS_AS(parse_barcode_json("{\"p\": 2}"), parse_error);
    CHECK_THROWS_AS(
        parse_barcode_json(
            R"({"p":2,"points":2,"bars":[{"lo":1,"hi":3,"mult":1}]})"),
        parse_error);
    CHECK_THROWS_AS(
        parse_barcode_json(
            R"({"p":2,"points":2,"bars":[{"lo":1,"hi":2,"mult":0}]})"),
        parse_error);
}

TEST_CASE("barcode text renderings") {
    barcode b;
    b.add({0, 2}, 1);
    b.add({1, 1}, 2);
    CHECK(barcode_csv(b) == "1,3,1\n2,2,2\n");
    CHECK(barcode_ascii(b, 3) == "###\n.#.\n.#.\n");
}

TEST_CASE("stream files round-trip") {
    rng_t rng(62);
    for (int i = 0; i < 40; ++i) {
        testing::random_stream s = testing::make_random_stream(5, 3, i % 2 ? 5 : 2, rng);
        stream_file f{s.f.modulus(), s.start_dim, s.blocks};
        stream_file back = parse_stream(print_stream(f));
        REQUIRE(back.p == f.p);
        REQUIRE(back.start_dim == f.start_dim);
        REQUIRE(back.blocks.size() == f.blocks.size());
        for (size_t b = 0; b < f.blocks.size(); ++b) {
            REQUIRE(back.blocks[b].dir == f.blocks[b].dir);
            REQUIRE(back.blocks[b].dims == f.blocks[b].dims);
            REQUIRE(back.blocks[b].maps == f.blocks[b].maps);
        }
    }
}

TEST_CASE("stream parser reports positioned errors") {
    CHECK_THROWS_AS(parse_stream("p 2\n"), parse_error);
    CHECK_THROWS_AS(parse_stream("p 2\nstart 1\nblok\n"), parse_error);
    CHECK_THROWS_AS(parse_stream("p 2\nstart 1\nblock\ndir X\n"), parse_error);
    CHECK_THROWS_AS(parse_stream("p 2\nstart 1\nblock\ndir F\ndims 1\nmap 1\n"), parse_error);
}

TEST_CASE("random modules are reproducible and seed-sensitive") {
    persistence_module a = random_module(6, 3, 5, 99);
    persistence_module b = random_module(6, 3, 5, 99);
    CHECK(a == b);
    CHECK(print_module(a) == print_module(b));
    persistence_module c = random_module(6, 3, 5, 100);
    CHECK(!(print_module(a) == print_module(c)));
    CHECK_THROWS_AS(random_module(0, 3, 5, 1), usage_error);
    CHECK_THROWS_AS(random_module(3, 3, 6, 1), usage_error);
}
