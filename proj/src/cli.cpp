#include "xsgen/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "xsgen/analysis.hpp"
#include "xsgen/construct.hpp"
#include "xsgen/errors.hpp"
#include "xsgen/factorization.hpp"
#include "xsgen/generator.hpp"
#include "xsgen/gf2poly.hpp"

namespace xsgen {

namespace {

volatile std::uint64_t g_bench_sink;

std::vector<std::uint64_t> parse_seed_words(const std::string& text) {
    std::vector<std::uint64_t> words;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(item, &pos, 16);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != item.size() || item.empty()) {
            throw Error("bad seed word '" + item + "' (hex expected)");
        }
        words.push_back(v);
    }
    if (words.empty()) {
        throw Error("empty seed list");
    }
    return words;
}

std::uint64_t parse_word(const std::string& text) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(text, &pos, 0);  // 0x prefix selects hex
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != text.size() || text.empty()) {
        throw Error("bad word literal '" + text + "'");
    }
    return v;
}

std::uint64_t parse_bits(const std::string& text) {
    // accepts plain integers and scientific notation like 1e8
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != text.size() || text.empty() || v < 0 || v > 9.2e18) {
        throw Error("bad bit count '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
}

std::optional<FactorTable> load_table(const std::string& path) {
    if (path.empty()) {
        return std::nullopt;
    }
    return FactorTable::load(path);
}

Factorization factorization_for(unsigned d, const std::string& table_path) {
    const auto table = load_table(table_path);
    return factor_mersenne(d, table ? &*table : nullptr);
}

void write_text_output(std::ostream& out, const std::string& path,
                       const std::string& content) {
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream f(path);
    if (!f) {
        throw Error("cannot open output file: " + path);
    }
    f << content;
}

}  // namespace

std::vector<BenchResult> run_bench(unsigned mn,
                                   const std::vector<unsigned>& word_sizes,
                                   std::uint64_t nbits, unsigned repetitions) {
    if (mn < 1) {
        throw Error("bench needs mn >= 1");
    }
    if (repetitions < 1) {
        throw Error("bench needs at least one repetition");
    }
    for (unsigned m : word_sizes) {
        if (m < 1 || m > 64 || mn % m != 0) {
            throw Error("word size " + std::to_string(m) +
                        " does not divide mn = " + std::to_string(mn));
        }
    }

    // Fixed polynomial with a_0 = a_mn = 1; period deliberately unverified
    // (the experiment measures step cost, not cycle structure).
    std::mt19937_64 rng(0x78736765'6e303031ull);
    Gf2Poly f;
    for (unsigned i = 1; i < mn; ++i) {
        f.set_coeff(i, rng() & 1);
    }
    f.set_coeff(0, true);
    f.set_coeff(mn, true);

    std::vector<BenchResult> results;
    const BenchResult* prev = nullptr;
    for (unsigned m : word_sizes) {
        const XorshiftSpec spec = build_tap_vectors(f, m);
        const std::uint64_t mask = word_mask(m);
        std::vector<std::uint64_t> seed_words(spec.n);
        for (auto& w : seed_words) {
            w = (rng() & mask) | 1;  // odd seeds: every tap active at start
        }
        const std::uint64_t steps = nbits == 0 ? 0 : (nbits + m - 1) / m;

        std::vector<double> times;
        times.reserve(repetitions);
        for (unsigned rep = 0; rep < repetitions; ++rep) {
            auto [state, quality] = seed(spec, seed_words);
            (void)quality;
            std::uint64_t sink = 0;
            const auto t0 = std::chrono::steady_clock::now();
            for (std::uint64_t s = 0; s < steps; ++s) {
                sink ^= step(spec, state);
            }
            const auto t1 = std::chrono::steady_clock::now();
            g_bench_sink = sink;
            times.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
        std::sort(times.begin(), times.end());
        BenchResult row;
        row.word_size = m;
        row.bits_generated = nbits;
        row.elapsed_seconds = times[times.size() / 2];
        if (prev != nullptr && nbits > 0 && row.elapsed_seconds > 0) {
            row.ratio_to_prev = prev->elapsed_seconds / row.elapsed_seconds;
        }
        results.push_back(row);
        prev = &results.back();
    }
    return results;
}

namespace {

int cmd_construct(const std::string& poly_text, unsigned m,
                  const std::string& table_path, const std::string& out_path,
                  std::ostream& out, std::ostream& err) {
    const Gf2Poly f = Gf2Poly::parse(poly_text);
    const int deg = f.degree();
    if (deg < 1 || m < 1 || static_cast<unsigned>(deg) % m != 0) {
        throw Error("word size " + std::to_string(m) +
                    " does not divide deg(f) = " + std::to_string(deg));
    }
    const Factorization fact =
        factorization_for(static_cast<unsigned>(deg), table_path);
    const XorshiftSpec spec = construct_from_primitive(f, m, fact);
    std::ostringstream ss;
    write_spec(ss, spec);
    write_text_output(out, out_path, ss.str());
    (void)err;
    return kExitOk;
}

int cmd_sample(unsigned m, unsigned n, unsigned k, std::uint64_t search_seed,
               unsigned max_attempts, const std::string& table_path,
               const std::string& out_path, std::ostream& out,
               std::ostream& err) {
    const Factorization fact = factorization_for(m * n, table_path);
    std::mt19937_64 rng(search_seed);
    unsigned attempts = 0;
    const XorshiftSpec spec =
        sample_k_tap(m, n, k, rng, fact, max_attempts, &attempts);
    err << "attempts=" << attempts << "\n";
    std::ostringstream ss;
    write_spec(ss, spec);
    write_text_output(out, out_path, ss.str());
    return kExitOk;
}

int cmd_stream(const std::string& spec_path, const std::string& seed_text,
               const std::string& bits_text, const std::string& out_path,
               bool allow_degraded, std::ostream& out, std::ostream& err) {
    const XorshiftSpec spec = load_spec(spec_path);
    const std::vector<std::uint64_t> words = parse_seed_words(seed_text);
    const std::uint64_t nbits = parse_bits(bits_text);
    auto [state, report] = seed(spec, words);  // throws on the zero seed
    if (report.quality == SeedQuality::Degraded && !allow_degraded) {
        err << "warning: degraded seed (every word divisible by 2^"
            << report.shared_pow2 << "); the first " << spec.n * report.shared_pow2
            << " outputs follow the predictable right-shift cascade\n";
    }
    const std::vector<std::uint8_t> bytes = generate_stream(spec, state, nbits);
    if (out_path.empty()) {
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            throw Error("cannot open output file: " + out_path);
        }
        f.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
    }
    return kExitOk;
}

int cmd_period(const std::string& spec_path, const std::string& seed_text,
               std::ostream& out) {
    const XorshiftSpec spec = load_spec(spec_path);
    const std::vector<std::uint64_t> words = parse_seed_words(seed_text);
    out << orbit_period(spec, words) << "\n";
    return kExitOk;
}

int cmd_weakness(const std::string& spec_path, const std::string& d_text,
                 unsigned l, const std::string& format, std::ostream& out) {
    const XorshiftSpec spec = load_spec(spec_path);
    const std::uint64_t d = parse_word(d_text);
    const WeaknessReport report = weakness_trace(spec, d, l);
    if (format == "tsv") {
        out << "pattern_ok\t" << (report.pattern_ok ? "true" : "false") << "\n";
        out << "closed_form_step_indexed\t"
            << (report.closed_form_step_indexed_ok ? "true" : "false") << "\n";
        out << "closed_form_sequence_indexed\t"
            << (report.closed_form_sequence_indexed_ok ? "true" : "false")
            << "\n";
        const auto join = [](const std::vector<std::uint64_t>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i != 0) s += ",";
                s += std::to_string(v[i]);
            }
            return s;
        };
        out << "trace\t" << join(report.trace) << "\n";
        out << "predicted\t" << join(report.predicted) << "\n";
    } else {
        out << render_weakness_table(report, spec, d);
    }
    return kExitOk;
}

int cmd_census(unsigned m, unsigned n, const std::string& table_path,
               std::ostream& out) {
    const unsigned mn = m * n;
    if (mn > 64 && table_path.empty()) {
        throw FactorizationError(
            "census beyond mn = 64 needs --factor-table (or "
            "XSGEN_FACTOR_TABLE)");
    }
    const Factorization fact = factorization_for(mn, table_path);
    out << census(m, n, fact).get_str() << "\n";
    return kExitOk;
}

int cmd_check_triplet(unsigned m, unsigned n, unsigned a, unsigned b,
                      unsigned c, const std::string& table_path,
                      std::ostream& out) {
    const Factorization fact = factorization_for(m * n, table_path);
    const bool ok = check_triplet(TripletSpec{a, b, c, m, n}, fact);
    out << (ok ? "true" : "false") << "\n";
    return kExitOk;
}

int cmd_bench(unsigned mn, const std::string& sizes_text,
              const std::string& bits_text, unsigned reps,
              const std::string& format, std::ostream& out) {
    std::vector<unsigned> sizes;
    std::stringstream ss(sizes_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        sizes.push_back(static_cast<unsigned>(parse_word(item)));
    }
    if (sizes.empty()) {
        throw Error("empty word-size list");
    }
    const std::uint64_t nbits = parse_bits(bits_text);
    const std::vector<BenchResult> rows = run_bench(mn, sizes, nbits, reps);

    const char* sep = format == "tsv" ? "\t" : "  ";
    if (format != "tsv") {
        out << "# timing specs use a fixed degree-" << mn
            << " polynomial; period unverified\n";
    }
    out << "m" << sep << "n" << sep << "bits" << sep << "seconds" << sep
        << "ratio_to_prev\n";
    for (const BenchResult& r : rows) {
        out << r.word_size << sep << mn / r.word_size << sep
            << r.bits_generated << sep << std::fixed << std::setprecision(6)
            << r.elapsed_seconds << sep;
        if (r.ratio_to_prev) {
            out << std::setprecision(3) << *r.ratio_to_prev;
        } else {
            out << "-";
        }
        out << "\n";
    }
    out.unsetf(std::ios::fixed);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    CLI::App app{
        "xsgen: construct, run and analyze maximal-period word-based "
        "xorshift generators"};
    app.require_subcommand(1);

    // construct
    std::string c_poly, c_table, c_out;
    unsigned c_m = 0;
    auto* sc_construct = app.add_subcommand(
        "construct", "compile a primitive polynomial into tap vectors");
    sc_construct->add_option("--poly", c_poly,
                             "polynomial, 'degs:...' or 'hex:...'")
        ->required();
    sc_construct->add_option("--word-size", c_m, "word size m in bits")
        ->required();
    sc_construct->add_option("--factor-table", c_table, "factor table file")
        ->envname("XSGEN_FACTOR_TABLE");
    sc_construct->add_option("--output,-o", c_out, "spec file (default stdout)");

    // sample
    unsigned s_m = 0, s_n = 0, s_k = 0, s_max = 0;
    std::uint64_t s_seed = 1;
    std::string s_table, s_out;
    auto* sc_sample = app.add_subcommand(
        "sample", "search for a primitive generator with exactly k taps");
    sc_sample->add_option("--m", s_m, "word size")->required();
    sc_sample->add_option("--n", s_n, "order")->required();
    sc_sample->add_option("--k", s_k, "xorshift operation count")->required();
    sc_sample->add_option("--search-seed", s_seed, "search RNG seed");
    sc_sample->add_option("--max-attempts", s_max,
                          "primitivity test budget (default 64*m*n)");
    sc_sample->add_option("--factor-table", s_table, "factor table file")
        ->envname("XSGEN_FACTOR_TABLE");
    sc_sample->add_option("--output,-o", s_out, "spec file (default stdout)");

    // stream
    std::string st_spec, st_seed, st_bits, st_out;
    bool st_allow_degraded = false;
    auto* sc_stream =
        app.add_subcommand("stream", "emit the generator bitstream as bytes");
    sc_stream->add_option("--spec", st_spec, "spec file")->required();
    sc_stream->add_option("--seed", st_seed, "n hex words, stage 0 first")
        ->required();
    sc_stream->add_option("--bits", st_bits, "bit count")->required();
    sc_stream->add_option("--output,-o", st_out, "output file (default stdout)");
    sc_stream->add_flag("--allow-degraded", st_allow_degraded,
                        "silence the even-seed warning");

    // period
    std::string p_spec, p_seed;
    auto* sc_period =
        app.add_subcommand("period", "brute-force orbit length (mn <= 24)");
    sc_period->add_option("--spec", p_spec, "spec file")->required();
    sc_period->add_option("--seed", p_seed, "n hex words")->required();

    // weakness
    std::string w_spec, w_d, w_format = "table";
    unsigned w_l = 0;
    auto* sc_weakness = app.add_subcommand(
        "weakness", "demonstrate the even-seed right-shift cascade");
    sc_weakness->add_option("--spec", w_spec, "spec file")->required();
    sc_weakness->add_option("--d", w_d, "seed word, multiple of 2^l")
        ->required();
    sc_weakness->add_option("--l", w_l, "divisibility exponent")->required();
    sc_weakness->add_option("--format", w_format, "table or tsv");

    // census
    unsigned ce_m = 0, ce_n = 0;
    std::string ce_table;
    auto* sc_census = app.add_subcommand(
        "census", "count full-period generators of order n over GF(2^m)");
    sc_census->add_option("--m", ce_m, "word size")->required();
    sc_census->add_option("--n", ce_n, "order")->required();
    sc_census->add_option("--factor-table", ce_table, "factor table file")
        ->envname("XSGEN_FACTOR_TABLE");

    // check-triplet
    unsigned t_m = 0, t_n = 0, t_a = 0, t_b = 0, t_c = 0;
    std::string t_table;
    auto* sc_triplet = app.add_subcommand(
        "check-triplet", "test a Marsaglia (a,b,c) triplet for full period");
    sc_triplet->add_option("--m", t_m, "word size")->required();
    sc_triplet->add_option("--n", t_n, "order")->required();
    sc_triplet->add_option("--a", t_a, "left-shift amount")->required();
    sc_triplet->add_option("--b", t_b, "right-shift amount")->required();
    sc_triplet->add_option("--c", t_c, "right-shift amount")->required();
    sc_triplet->add_option("--factor-table", t_table, "factor table file")
        ->envname("XSGEN_FACTOR_TABLE");

    // bench
    unsigned b_mn = 512, b_reps = 3;
    std::string b_sizes = "8,16,32,64", b_bits = "1e8", b_format = "table";
    auto* sc_bench = app.add_subcommand(
        "bench", "time bit generation across word sizes of one mn");
    sc_bench->add_option("--mn", b_mn, "state size in bits");
    sc_bench->add_option("--word-sizes", b_sizes, "comma list of m values");
    sc_bench->add_option("--bits", b_bits, "bits per timing run");
    sc_bench->add_option("--reps", b_reps, "repetitions (median)");
    sc_bench->add_option("--format", b_format, "table or tsv");

    try {
        app.parse(argc, argv);
        if (sc_construct->parsed()) {
            return cmd_construct(c_poly, c_m, c_table, c_out, out, err);
        }
        if (sc_sample->parsed()) {
            return cmd_sample(s_m, s_n, s_k, s_seed, s_max, s_table, s_out, out,
                              err);
        }
        if (sc_stream->parsed()) {
            return cmd_stream(st_spec, st_seed, st_bits, st_out,
                              st_allow_degraded, out, err);
        }
        if (sc_period->parsed()) {
            return cmd_period(p_spec, p_seed, out);
        }
        if (sc_weakness->parsed()) {
            return cmd_weakness(w_spec, w_d, w_l, w_format, out);
        }
        if (sc_census->parsed()) {
            return cmd_census(ce_m, ce_n, ce_table, out);
        }
        if (sc_triplet->parsed()) {
            return cmd_check_triplet(t_m, t_n, t_a, t_b, t_c, t_table, out);
        }
        if (sc_bench->parsed()) {
            return cmd_bench(b_mn, b_sizes, b_bits, b_reps, b_format, out);
        }
        err << "no subcommand given\n";
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const NotPrimitiveError& e) {
        err << "not primitive ("
            << (e.failure() == PrimitivityFailure::Reducible
                    ? "reducible"
                    : "proper-divisor order")
            << "): " << e.what() << "\n";
        return kExitNotPrimitive;
    } catch (const FactorizationError& e) {
        err << "factorization unavailable: " << e.what() << "\n";
        return kExitNoFactorization;
    } catch (const SearchExhaustedError& e) {
        err << "search exhausted: " << e.what() << "\n";
        return kExitSearchExhausted;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace xsgen
