#include "pmod.h"

#include <cstring>
#include <string>

#include "decompose.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "sweep.hpp"

namespace {

thread_local std::string g_last_error = "no error";

struct barcode_value {
    uint32_t p;
    uint32_t points;
    pmod::barcode bars;
};

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
pmod_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const pmod::parse_error& e) {
        g_last_error = e.what();
        return PMOD_PARSE_ERROR;
    } catch (const pmod::usage_error& e) {
        g_last_error = e.what();
        return PMOD_USAGE_ERROR;
    } catch (const pmod::internal_error& e) {
        g_last_error = e.what();
        return PMOD_INVARIANT_ERROR;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PMOD_INVARIANT_ERROR;
    }
}

}  // namespace

struct pmod_module {
    pmod::persistence_module m;
};

struct pmod_barcode {
    barcode_value b;
};

struct pmod_stream {
    pmod::block_sweep sweep;
    uint32_t blocks = 0;
};

extern "C" {

const char* pmod_last_error(void) { return g_last_error.c_str(); }

pmod_status pmod_module_parse(const char* text, pmod_module** out) {
    if (!text || !out) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&] {
        *out = new pmod_module{pmod::parse_module(text)};
        return PMOD_OK;
    });
}

pmod_status pmod_module_read(const char* path, pmod_module** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&] {
        *out = new pmod_module{pmod::parse_module(pmod::read_file(path))};
        return PMOD_OK;
    });
}

pmod_status pmod_module_print(const pmod_module* m, char** out_text) {
    if (!m || !out_text) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&] {
        *out_text = dup_string(pmod::print_module(m->m));
        return PMOD_OK;
    });
}

pmod_status pmod_module_random(uint32_t points, uint32_t max_dim, uint32_t prime, uint64_t seed,
                               pmod_module** out) {
    if (!out) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&] {
        *out = new pmod_module{pmod::random_module(points, max_dim, prime, seed)};
        return PMOD_OK;
    });
}

void pmod_module_free(pmod_module* m) { delete m; }

uint32_t pmod_module_points(const pmod_module* m) { return m ? m->m.points() : 0; }
uint32_t pmod_module_prime(const pmod_module* m) { return m ? m->m.field().modulus() : 0; }

uint32_t pmod_module_dim(const pmod_module* m, uint32_t point) {
    if (!m || point < 1 || point > m->m.points()) return 0;
    return m->m.dim(point - 1);
}

char pmod_module_direction(const pmod_module* m, uint32_t arrow) {
    if (!m || arrow < 1 || arrow >= m->m.points()) return 0;
    return m->m.shape().dir(arrow - 1) == pmod::direction::forward ? 'F' : 'B';
}

pmod_status pmod_decompose(const pmod_module* m, const uint64_t* seed, int check,
                           pmod_barcode** out) {
    if (!m || !out) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&]() -> pmod_status {
        pmod::decompose_options opts;
        if (seed) opts.seed = *seed;
        pmod::decomposition d = pmod::decompose_zigzag(m->m, opts);
        if (check) {
            pmod::validation_report rep = pmod::validate(d);
            if (!rep.ok) {
                g_last_error = "decomposition failed validation: " + rep.failures.front().description;
                return PMOD_INVARIANT_ERROR;
            }
        }
        *out = new pmod_barcode{
            {m->m.field().modulus(), m->m.points(), pmod::barcode_of(d)}};
        return PMOD_OK;
    });
}

pmod_status pmod_verify(const pmod_module* m, const pmod_barcode* expected) {
    if (!m || !expected) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&]() -> pmod_status {
        if (expected->b.p != m->m.field().modulus() || expected->b.points != m->m.points()) {
            g_last_error = "barcode header does not match the module";
            return PMOD_MISMATCH;
        }
        pmod::barcode got = pmod::barcode_of(pmod::decompose_zigzag(m->m));
        if (!(got == expected->b.bars)) {
            for (const auto& [itv, mult] : got.bars()) {
                if (expected->b.bars.multiplicity(itv) != mult) {
                    g_last_error = "bar [" + std::to_string(itv.lo + 1) + "," +
                                   std::to_string(itv.hi + 1) + "] has multiplicity " +
                                   std::to_string(mult) + ", file says " +
                                   std::to_string(expected->b.bars.multiplicity(itv));
                    return PMOD_MISMATCH;
                }
            }
            for (const auto& [itv, mult] : expected->b.bars.bars()) {
                if (got.multiplicity(itv) != mult) {
                    g_last_error = "bar [" + std::to_string(itv.lo + 1) + "," +
                                   std::to_string(itv.hi + 1) + "] has multiplicity " +
                                   std::to_string(got.multiplicity(itv)) + ", file says " +
                                   std::to_string(mult);
                    return PMOD_MISMATCH;
                }
            }
            g_last_error = "barcodes differ";
            return PMOD_MISMATCH;
        }
        return PMOD_OK;
    });
}

size_t pmod_barcode_size(const pmod_barcode* b) { return b ? b->b.bars.bars().size() : 0; }

pmod_status pmod_barcode_bar(const pmod_barcode* b, size_t index, uint32_t* lo, uint32_t* hi,
                             uint32_t* mult) {
    if (!b || index >= b->b.bars.bars().size()) {
        g_last_error = "bar index out of range";
        return PMOD_USAGE_ERROR;
    }
    const auto& [itv, m] = b->b.bars.bars()[index];
    if (lo) *lo = itv.lo + 1;
    if (hi) *hi = itv.hi + 1;
    if (mult) *mult = m;
    return PMOD_OK;
}

pmod_status pmod_barcode_to_json(const pmod_barcode* b, char** out_text) {
    if (!b || !out_text) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&] {
        *out_text = dup_string(pmod::print_barcode_json({b->b.p, b->b.points, b->b.bars}));
        return PMOD_OK;
    });
}

pmod_status pmod_barcode_parse_json(const char* text, pmod_barcode** out) {
    if (!text || !out) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&] {
        pmod::barcode_file f = pmod::parse_barcode_json(text);
        *out = new pmod_barcode{{f.p, f.points, f.bars}};
        return PMOD_OK;
    });
}

int pmod_barcode_equal(const pmod_barcode* a, const pmod_barcode* b) {
    if (!a || !b) return 0;
    return a->b.p == b->b.p && a->b.points == b->b.points && a->b.bars == b->b.bars ? 1 : 0;
}

uint32_t pmod_barcode_points(const pmod_barcode* b) { return b ? b->b.points : 0; }

void pmod_barcode_free(pmod_barcode* b) { delete b; }

pmod_status pmod_stream_new(uint32_t prime, uint32_t start_dim, pmod_stream** out) {
    if (!out) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&] {
        *out = new pmod_stream{pmod::block_sweep(pmod::fp_field(prime), start_dim, true)};
        return PMOD_OK;
    });
}

pmod_status pmod_stream_push(pmod_stream* s, const char* block_text) {
    if (!s || !block_text) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&] {
        pmod::stream_block blk = pmod::parse_stream_block(
            block_text, s->sweep.field().modulus(), s->sweep.frontier_dim());
        s->sweep.push_block(blk);
        ++s->blocks;
        return PMOD_OK;
    });
}

uint32_t pmod_stream_blocks(const pmod_stream* s) { return s ? s->blocks : 0; }
uint32_t pmod_stream_points(const pmod_stream* s) { return s ? s->sweep.points() : 0; }

pmod_status pmod_stream_closed(const pmod_stream* s, pmod_barcode** out) {
    if (!s || !out) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&] {
        *out = new pmod_barcode{
            {s->sweep.field().modulus(), s->sweep.points(), s->sweep.closed_bars()}};
        return PMOD_OK;
    });
}

pmod_status pmod_stream_open(const pmod_stream* s, pmod_barcode** out) {
    if (!s || !out) {
        g_last_error = "null argument";
        return PMOD_USAGE_ERROR;
    }
    return guarded([&] {
        *out = new pmod_barcode{
            {s->sweep.field().modulus(), s->sweep.points(), s->sweep.open_bars()}};
        return PMOD_OK;
    });
}

void pmod_stream_free(pmod_stream* s) { delete s; }

void pmod_string_free(char* text) { delete[] text; }

}  // extern "C"
