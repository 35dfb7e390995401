#pragma once

// Text formats: the module file, the barcode JSON file, and the block-stream
// file, plus the seeded random module generator. Point and arrow indices are
// 1-based in all files.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "module.hpp"
#include "sweep.hpp"

namespace pmod {

struct parse_error : std::runtime_error {
    parse_error(size_t line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    size_t line;
};

// Module file:
//   p <prime>
//   points <n>
//   dirs <string of F/B, length n-1>
//   dims <n integers>
//   map <i>            (1-based arrow, followed by its matrix rows;
//   <row>               forward maps are dims[i+1] x dims[i], backward
//   ...                 dims[i] x dims[i+1]; empty matrices have no rows)
persistence_module parse_module(const std::string& text);
std::string print_module(const persistence_module& v);

struct barcode_file {
    uint32_t p = 2;
    uint32_t points = 1;
    barcode bars;
};

// JSON object {"p": .., "points": .., "bars": [{"lo","hi","mult"}, ..]},
// bars sorted by (lo, hi), indices 1-based.
barcode_file parse_barcode_json(const std::string& text);
std::string print_barcode_json(const barcode_file& b);

std::string barcode_csv(const barcode& b);                     // lo,hi,mult lines
std::string barcode_ascii(const barcode& b, uint32_t points);  // one row per bar instance

// Stream file: a header
//   p <prime>
//   start <dim of the initial point>
// followed by any number of blocks
//   block
//   dir <F|B>
//   dims <k integers>     (the k new points)
//   map <j>               (j = 1..k, same matrix layout as module files;
//   <rows>                 map 1 attaches to the previous frontier)
struct stream_file {
    uint32_t p = 2;
    uint32_t start_dim = 0;
    std::vector<stream_block> blocks;
};

stream_file parse_stream(const std::string& text);
std::string print_stream(const stream_file& s);

// One block section ("dir ..." onward) on its own, attached to a frontier of
// the given dimension.
stream_block parse_stream_block(const std::string& text, uint32_t p, uint32_t frontier_dim);

// Reproducible generator: a std::mt19937_64 seeded as given drives every
// choice, with values reduced by modulo, so files are identical across
// platforms. Dimensions are uniform on [0, max_dim], directions are fair
// coin flips, entries uniform on [0, p).
persistence_module random_module(uint32_t points, uint32_t max_dim, uint32_t p, uint64_t seed);

std::string read_file(const std::string& path);  // throws usage_error on I/O failure

}  // namespace pmod
