#include "io.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace pmod {

namespace {

constexpr uint32_t kMaxFiberDim = 4096;
constexpr uint32_t kMaxPoints = 100000;

struct line_reader {
    explicit line_reader(const std::string& text) {
        std::string cur;
        for (char ch : text) {
            if (ch == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur.push_back(ch);
            }
        }
        if (!cur.empty()) lines.push_back(cur);
    }

    // Next non-blank line split into tokens; returns false at end of input.
    bool next(std::vector<std::string>& tokens, size_t& line_no) {
        while (idx < lines.size()) {
            ++idx;
            std::istringstream ss(lines[idx - 1]);
            tokens.clear();
            std::string tok;
            while (ss >> tok) tokens.push_back(tok);
            if (!tokens.empty()) {
                line_no = idx;
                return true;
            }
        }
        line_no = idx;
        return false;
    }

    std::vector<std::string> lines;
    size_t idx = 0;
};

uint64_t parse_uint(const std::string& tok, size_t line_no, const char* what) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw parse_error(line_no, std::string("expected ") + what + ", got '" + tok + "'");
    try {
        return std::stoull(tok);
    } catch (const std::exception&) {
        throw parse_error(line_no, std::string(what) + " out of range: '" + tok + "'");
    }
}

// Reads a keyword line "key v1 v2 ..." and returns the value tokens.
std::vector<std::string> expect_line(line_reader& r, const char* key, size_t& line_no) {
    std::vector<std::string> toks;
    if (!r.next(toks, line_no))
        throw parse_error(line_no + 1, std::string("expected '") + key + "' line, got end of input");
    if (toks[0] != key)
        throw parse_error(line_no, std::string("expected '") + key + "' line, got '" + toks[0] + "'");
    toks.erase(toks.begin());
    return toks;
}

matrix parse_matrix_rows(line_reader& r, uint32_t rows, uint32_t cols, const fp_field& f) {
    matrix m(rows, cols, f);
    if (rows == 0 || cols == 0) return m;
    for (uint32_t row = 0; row < rows; ++row) {
        std::vector<std::string> toks;
        size_t line_no;
        if (!r.next(toks, line_no))
            throw parse_error(r.idx + 1, "expected matrix row, got end of input");
        if (toks.size() != cols)
            throw parse_error(line_no, "expected " + std::to_string(cols) + " entries, got " +
                                           std::to_string(toks.size()));
        for (uint32_t c = 0; c < cols; ++c) {
            uint64_t e = parse_uint(toks[c], line_no, "matrix entry");
            if (e >= f.modulus())
                throw parse_error(line_no, "entry " + std::to_string(e) + " not a residue mod " +
                                               std::to_string(f.modulus()));
            m.at(row, c) = uint32_t(e);
        }
    }
    return m;
}

fp_field parse_field(const std::string& tok, size_t line_no) {
    uint64_t p = parse_uint(tok, line_no, "prime modulus");
    try {
        return fp_field(uint32_t(std::min<uint64_t>(p, UINT32_MAX)));
    } catch (const usage_error& e) {
        throw parse_error(line_no, e.what());
    }
}

void print_matrix_rows(std::ostringstream& out, const matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return;
    for (uint32_t r = 0; r < m.rows(); ++r) {
        for (uint32_t c = 0; c < m.cols(); ++c) out << (c ? " " : "") << m.at(r, c);
        out << "\n";
    }
}

}  // namespace

persistence_module parse_module(const std::string& text) {
    line_reader r(text);
    size_t ln = 0;

    std::vector<std::string> v = expect_line(r, "p", ln);
    if (v.size() != 1) throw parse_error(ln, "expected exactly one modulus");
    fp_field f = parse_field(v[0], ln);

    v = expect_line(r, "points", ln);
    if (v.size() != 1) throw parse_error(ln, "expected exactly one point count");
    uint64_t n64 = parse_uint(v[0], ln, "point count");
    if (n64 < 1 || n64 > kMaxPoints) throw parse_error(ln, "point count out of range");
    uint32_t n = uint32_t(n64);

    v = expect_line(r, "dirs", ln);
    std::string dirstr = v.empty() ? std::string() : v[0];
    if (v.size() > 1) throw parse_error(ln, "expected one direction string");
    if (dirstr.size() != n - 1)
        throw parse_error(ln, "expected " + std::to_string(n - 1) + " directions, got " +
                                  std::to_string(dirstr.size()));
    std::vector<direction> dirs;
    for (char c : dirstr) {
        if (c == 'F')
            dirs.push_back(direction::forward);
        else if (c == 'B')
            dirs.push_back(direction::backward);
        else
            throw parse_error(ln, std::string("direction must be F or B, got '") + c + "'");
    }

    v = expect_line(r, "dims", ln);
    if (v.size() != n)
        throw parse_error(ln, "expected " + std::to_string(n) + " dimensions, got " +
                                  std::to_string(v.size()));
    std::vector<uint32_t> dims;
    for (const std::string& tok : v) {
        uint64_t d = parse_uint(tok, ln, "dimension");
        if (d > kMaxFiberDim) throw parse_error(ln, "dimension out of range");
        dims.push_back(uint32_t(d));
    }

    std::vector<matrix> maps;
    for (uint32_t i = 0; i + 1 < n; ++i) {
        v = expect_line(r, "map", ln);
        if (v.size() != 1 || parse_uint(v[0], ln, "arrow index") != i + 1)
            throw parse_error(ln, "expected 'map " + std::to_string(i + 1) + "'");
        bool fwd = dirs[i] == direction::forward;
        maps.push_back(parse_matrix_rows(r, fwd ? dims[i + 1] : dims[i], fwd ? dims[i] : dims[i + 1], f));
    }
    std::vector<std::string> extra;
    if (r.next(extra, ln)) throw parse_error(ln, "unexpected trailing content");
    return {zigzag_shape(n, std::move(dirs)), std::move(dims), std::move(maps), f};
}

std::string print_module(const persistence_module& m) {
    std::ostringstream out;
    out << "p " << m.field().modulus() << "\n";
    out << "points " << m.points() << "\n";
    out << "dirs ";
    for (direction d : m.shape().dirs()) out << (d == direction::forward ? 'F' : 'B');
    out << "\n";
    out << "dims";
    for (uint32_t d : m.dims()) out << " " << d;
    out << "\n";
    for (uint32_t i = 0; i + 1 < m.points(); ++i) {
        out << "map " << i + 1 << "\n";
        print_matrix_rows(out, m.map(i));
    }
    return out.str();
}

// -- barcode JSON --------------------------------------------------------------

barcode_file parse_barcode_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(1, std::string("invalid JSON: ") + e.what());
    }
    try {
        barcode_file out;
        out.p = j.at("p").get<uint32_t>();
        out.points = j.at("points").get<uint32_t>();
        if (out.points < 1) throw parse_error(1, "points must be positive");
        for (const auto& bar : j.at("bars")) {
            uint32_t lo = bar.at("lo").get<uint32_t>();
            uint32_t hi = bar.at("hi").get<uint32_t>();
            uint32_t mult = bar.at("mult").get<uint32_t>();
            if (lo < 1 || lo > hi || hi > out.points)
                throw parse_error(1, "bar [" + std::to_string(lo) + "," + std::to_string(hi) +
                                         "] out of range");
            if (mult < 1) throw parse_error(1, "bar multiplicity must be positive");
            out.bars.add({lo - 1, hi - 1}, mult);
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(1, std::string("bad barcode file: ") + e.what());
    }
}

std::string print_barcode_json(const barcode_file& b) {
    nlohmann::json bars = nlohmann::json::array();
    for (const auto& [itv, mult] : b.bars.bars())
        bars.push_back({{"lo", itv.lo + 1}, {"hi", itv.hi + 1}, {"mult", mult}});
    nlohmann::json j{{"p", b.p}, {"points", b.points}, {"bars", bars}};
    return j.dump(2) + "\n";
}

std::string barcode_csv(const barcode& b) {
    std::ostringstream out;
    for (const auto& [itv, mult] : b.bars())
        out << itv.lo + 1 << "," << itv.hi + 1 << "," << mult << "\n";
    return out.str();
}

std::string barcode_ascii(const barcode& b, uint32_t points) {
    std::ostringstream out;
    for (const auto& [itv, mult] : b.bars())
        for (uint32_t k = 0; k < mult; ++k) {
            for (uint32_t x = 0; x < points; ++x) out << (itv.contains(x) ? '#' : '.');
            out << "\n";
        }
    return out.str();
}

// -- streams -------------------------------------------------------------------

namespace {

// Parses one block body (after the "block" line) off the reader.
stream_block parse_block_body(line_reader& r, const fp_field& f, uint32_t frontier) {
    size_t ln = 0;
    stream_block blk;
    std::vector<std::string> v = expect_line(r, "dir", ln);
    if (v.size() != 1 || (v[0] != "F" && v[0] != "B"))
        throw parse_error(ln, "expected 'dir F' or 'dir B'");
    blk.dir = v[0] == "F" ? direction::forward : direction::backward;
    v = expect_line(r, "dims", ln);
    if (v.empty()) throw parse_error(ln, "block needs at least one new point");
    for (const std::string& tok : v) {
        uint64_t d = parse_uint(tok, ln, "dimension");
        if (d > kMaxFiberDim) throw parse_error(ln, "dimension out of range");
        blk.dims.push_back(uint32_t(d));
    }
    for (uint32_t jx = 0; jx < blk.dims.size(); ++jx) {
        v = expect_line(r, "map", ln);
        if (v.size() != 1 || parse_uint(v[0], ln, "map index") != jx + 1)
            throw parse_error(ln, "expected 'map " + std::to_string(jx + 1) + "'");
        uint32_t prev = jx == 0 ? frontier : blk.dims[jx - 1];
        bool fwd = blk.dir == direction::forward;
        blk.maps.push_back(
            parse_matrix_rows(r, fwd ? blk.dims[jx] : prev, fwd ? prev : blk.dims[jx], f));
    }
    return blk;
}

}  // namespace

stream_file parse_stream(const std::string& text) {
    line_reader r(text);
    size_t ln = 0;

    std::vector<std::string> v = expect_line(r, "p", ln);
    if (v.size() != 1) throw parse_error(ln, "expected exactly one modulus");
    fp_field f = parse_field(v[0], ln);

    v = expect_line(r, "start", ln);
    if (v.size() != 1) throw parse_error(ln, "expected the initial fiber dimension");
    uint64_t d0 = parse_uint(v[0], ln, "dimension");
    if (d0 > kMaxFiberDim) throw parse_error(ln, "dimension out of range");

    stream_file out{f.modulus(), uint32_t(d0), {}};
    uint32_t frontier = out.start_dim;
    std::vector<std::string> toks;
    while (r.next(toks, ln)) {
        if (toks[0] != "block" || toks.size() != 1)
            throw parse_error(ln, "expected 'block', got '" + toks[0] + "'");
        stream_block blk = parse_block_body(r, f, frontier);
        frontier = blk.dims.back();
        out.blocks.push_back(std::move(blk));
    }
    return out;
}

stream_block parse_stream_block(const std::string& text, uint32_t p, uint32_t frontier_dim) {
    line_reader r(text);
    fp_field f(p);
    stream_block blk = parse_block_body(r, f, frontier_dim);
    std::vector<std::string> extra;
    size_t ln = 0;
    if (r.next(extra, ln)) throw parse_error(ln, "unexpected trailing content in block");
    return blk;
}

std::string print_stream(const stream_file& s) {
    std::ostringstream out;
    out << "p " << s.p << "\n";
    out << "start " << s.start_dim << "\n";
    for (const stream_block& blk : s.blocks) {
        out << "block\n";
        out << "dir " << (blk.dir == direction::forward ? 'F' : 'B') << "\n";
        out << "dims";
        for (uint32_t d : blk.dims) out << " " << d;
        out << "\n";
        for (uint32_t jx = 0; jx < blk.maps.size(); ++jx) {
            out << "map " << jx + 1 << "\n";
            print_matrix_rows(out, blk.maps[jx]);
        }
    }
    return out.str();
}

// -- random modules ------------------------------------------------------------

persistence_module random_module(uint32_t points, uint32_t max_dim, uint32_t p, uint64_t seed) {
    if (points < 1 || points > kMaxPoints) throw usage_error("point count out of range");
    if (max_dim > kMaxFiberDim) throw usage_error("maximum dimension out of range");
    fp_field f(p);
    std::mt19937_64 rng(seed);

    std::vector<uint32_t> dims;
    for (uint32_t x = 0; x < points; ++x) dims.push_back(uint32_t(rng() % (uint64_t(max_dim) + 1)));
    std::vector<direction> dirs;
    for (uint32_t i = 0; i + 1 < points; ++i)
        dirs.push_back(rng() % 2 ? direction::forward : direction::backward);
    std::vector<matrix> maps;
    for (uint32_t i = 0; i + 1 < points; ++i) {
        bool fwd = dirs[i] == direction::forward;
        matrix m(fwd ? dims[i + 1] : dims[i], fwd ? dims[i] : dims[i + 1], f);
        for (uint32_t r = 0; r < m.rows(); ++r)
            for (uint32_t c = 0; c < m.cols(); ++c) m.at(r, c) = uint32_t(rng() % p);
        maps.push_back(std::move(m));
    }
    return {zigzag_shape(points, std::move(dirs)), std::move(dims), std::move(maps), f};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace pmod
