// pmod command line: decompose persistence module files into barcodes,
// verify barcode files, generate random instances, and run block streams.
// Exit codes: 0 ok, 1 semantic mismatch, 2 input error, 3 internal
// invariant violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pmod.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;

int exit_code_for(pmod_status s) {
    switch (s) {
        case PMOD_OK: return kExitOk;
        case PMOD_MISMATCH: return kExitMismatch;
        case PMOD_PARSE_ERROR: return kExitInput;
        case PMOD_USAGE_ERROR: return kExitInput;
        case PMOD_INVARIANT_ERROR: return kExitInvariant;
    }
    return kExitInvariant;
}

int fail(pmod_status s) {
    std::cerr << "error: " << pmod_last_error() << "\n";
    return exit_code_for(s);
}

struct module_handle {
    pmod_module* m = nullptr;
    ~module_handle() { pmod_module_free(m); }
};

struct barcode_handle {
    pmod_barcode* b = nullptr;
    ~barcode_handle() { pmod_barcode_free(b); }
};

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::RuntimeError("cannot open file: " + path, kExitInput);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool seed_from_env(uint64_t& seed) {
    const char* env = std::getenv("PMOD_SEED");
    if (!env) return false;
    try {
        seed = std::stoull(env);
        return true;
    } catch (const std::exception&) {
        throw CLI::RuntimeError("PMOD_SEED is not an integer", kExitInput);
    }
}

nlohmann::json bars_to_json(const pmod_barcode* b) {
    nlohmann::json bars = nlohmann::json::array();
    for (size_t i = 0; i < pmod_barcode_size(b); ++i) {
        uint32_t lo, hi, mult;
        pmod_barcode_bar(b, i, &lo, &hi, &mult);
        bars.push_back({{"lo", lo}, {"hi", hi}, {"mult", mult}});
    }
    return bars;
}

int run_decompose(const std::string& path, const std::string& format, bool check,
                  const uint64_t* seed) {
    module_handle mod;
    pmod_status s = pmod_module_read(path.c_str(), &mod.m);
    if (s != PMOD_OK) return fail(s);

    barcode_handle bars;
    s = pmod_decompose(mod.m, seed, check ? 1 : 0, &bars.b);
    if (s != PMOD_OK) return fail(s);

    if (format == "json") {
        char* text = nullptr;
        s = pmod_barcode_to_json(bars.b, &text);
        if (s != PMOD_OK) return fail(s);
        std::cout << text;
        pmod_string_free(text);
    } else if (format == "csv") {
        for (size_t i = 0; i < pmod_barcode_size(bars.b); ++i) {
            uint32_t lo, hi, mult;
            pmod_barcode_bar(bars.b, i, &lo, &hi, &mult);
            std::cout << lo << "," << hi << "," << mult << "\n";
        }
    } else {  // ascii
        uint32_t points = pmod_module_points(mod.m);
        for (size_t i = 0; i < pmod_barcode_size(bars.b); ++i) {
            uint32_t lo, hi, mult;
            pmod_barcode_bar(bars.b, i, &lo, &hi, &mult);
            for (uint32_t k = 0; k < mult; ++k) {
                for (uint32_t x = 1; x <= points; ++x) std::cout << (lo <= x && x <= hi ? '#' : '.');
                std::cout << "\n";
            }
        }
    }
    return kExitOk;
}

int run_verify(const std::string& module_path, const std::string& barcode_path) {
    module_handle mod;
    pmod_status s = pmod_module_read(module_path.c_str(), &mod.m);
    if (s != PMOD_OK) return fail(s);

    barcode_handle bars;
    std::string text;
    try {
        text = read_input(barcode_path);
    } catch (const CLI::RuntimeError& e) {
        std::cerr << "error: cannot open file: " << barcode_path << "\n";
        return kExitInput;
    }
    s = pmod_barcode_parse_json(text.c_str(), &bars.b);
    if (s != PMOD_OK) return fail(s);

    s = pmod_verify(mod.m, bars.b);
    if (s != PMOD_OK) return fail(s);
    return kExitOk;
}

int run_random(uint32_t points, uint32_t max_dim, uint32_t prime, uint64_t seed) {
    module_handle mod;
    pmod_status s = pmod_module_random(points, max_dim, prime, seed, &mod.m);
    if (s != PMOD_OK) return fail(s);
    char* text = nullptr;
    s = pmod_module_print(mod.m, &text);
    if (s != PMOD_OK) return fail(s);
    std::cout << text;
    pmod_string_free(text);
    return kExitOk;
}

// The stream file is split textually: the library parses each block.
int run_stream(const std::vector<std::string>& paths, uint64_t horizon) {
    std::string text;
    for (const std::string& p : paths) text += read_input(p);
    if (paths.empty()) text = read_input("-");

    std::istringstream in(text);
    std::string line;
    uint32_t prime = 0, start_dim = 0;
    bool have_p = false, have_start = false;
    std::vector<std::string> blocks;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (!have_p || !have_start) {
            uint64_t value;
            if (key == "p" && (ls >> value)) {
                prime = uint32_t(value);
                have_p = true;
                continue;
            }
            if (key == "start" && (ls >> value)) {
                start_dim = uint32_t(value);
                have_start = true;
                continue;
            }
            std::cerr << "error: stream must begin with 'p' and 'start' lines\n";
            return kExitInput;
        }
        if (key == "block") {
            blocks.emplace_back();
        } else if (blocks.empty()) {
            std::cerr << "error: content before the first block\n";
            return kExitInput;
        } else {
            blocks.back() += line + "\n";
        }
    }
    if (!have_p || !have_start) {
        std::cerr << "error: stream must begin with 'p' and 'start' lines\n";
        return kExitInput;
    }

    pmod_stream* stream = nullptr;
    pmod_status s = pmod_stream_new(prime, start_dim, &stream);
    if (s != PMOD_OK) return fail(s);
    std::unique_ptr<pmod_stream, decltype(&pmod_stream_free)> guard(stream, pmod_stream_free);

    uint64_t consumed = 0;
    for (const std::string& b : blocks) {
        if (consumed == horizon) break;
        s = pmod_stream_push(stream, b.c_str());
        if (s != PMOD_OK) {
            std::cerr << "error: block " << consumed + 1 << ": " << pmod_last_error() << "\n";
            return exit_code_for(s);
        }
        ++consumed;
    }

    barcode_handle closed, open;
    if ((s = pmod_stream_closed(stream, &closed.b)) != PMOD_OK) return fail(s);
    if ((s = pmod_stream_open(stream, &open.b)) != PMOD_OK) return fail(s);

    nlohmann::json out{{"p", prime},
                       {"points", pmod_stream_points(stream)},
                       {"blocks", consumed},
                       {"closed", bars_to_json(closed.b)},
                       {"open", bars_to_json(open.b)}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact barcodes of zigzag persistence modules over GF(p)"};
    app.require_subcommand(1);

    // decompose
    std::string in_path, format = "json";
    bool check = false;
    uint64_t seed_value = 0;
    auto* dec = app.add_subcommand("decompose", "compute the barcode of a module file");
    dec->add_option("input", in_path, "module file (- for stdin is not supported here)")->required();
    dec->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "ascii"}));
    dec->add_flag("--check", check, "run the independent validity checker");
    auto* seed_opt = dec->add_option("--seed", seed_value, "randomize tie-breaking");

    // verify
    std::string ver_module, ver_barcode;
    auto* ver = app.add_subcommand("verify", "check a barcode file against a module file");
    ver->add_option("module", ver_module, "module file")->required();
    ver->add_option("barcode", ver_barcode, "barcode JSON file")->required();

    // random
    uint32_t rnd_points = 0, rnd_maxdim = 3, rnd_p = 2;
    uint64_t rnd_seed = 0;
    auto* rnd = app.add_subcommand("random", "emit a reproducible random module file");
    rnd->add_option("--points", rnd_points, "number of points")->required();
    rnd->add_option("--maxdim", rnd_maxdim, "maximum fiber dimension");
    rnd->add_option("--p", rnd_p, "prime modulus");
    auto* rnd_seed_opt = rnd->add_option("--seed", rnd_seed, "generator seed");

    // stream
    std::vector<std::string> stream_paths;
    uint64_t horizon = UINT64_MAX;
    auto* str = app.add_subcommand("stream", "consume a block stream and report closed/open bars");
    str->add_option("input", stream_paths, "stream file(s); stdin when omitted");
    str->add_option("--horizon", horizon, "number of blocks to consume");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        if (dec->parsed()) {
            uint64_t env_seed;
            const uint64_t* seed = nullptr;
            if (seed_opt->count()) {
                seed = &seed_value;
            } else if (seed_from_env(env_seed)) {
                seed_value = env_seed;
                seed = &seed_value;
            }
            return run_decompose(in_path, format, check, seed);
        }
        if (ver->parsed()) return run_verify(ver_module, ver_barcode);
        if (rnd->parsed()) {
            if (!rnd_seed_opt->count()) seed_from_env(rnd_seed);
            return run_random(rnd_points, rnd_maxdim, rnd_p, rnd_seed);
        }
        if (str->parsed()) return run_stream(stream_paths, horizon);
    } catch (const CLI::RuntimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.get_exit_code();
    }
    return kExitInput;
}
