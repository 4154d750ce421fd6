#include "xsgen/analysis.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "xsgen/errors.hpp"
#include "xsgen/generator.hpp"

namespace xsgen {

std::uint64_t orbit_period(const XorshiftSpec& spec,
                           std::span<const std::uint64_t> seed_words,
                           const CancelFn& cancelled) {
    validate_spec(spec);
    const unsigned dim = spec.m * spec.n;
    if (dim > kOrbitDimBound) {
        throw Error("orbit scan bound exceeded: mn = " + std::to_string(dim) +
                    " > " + std::to_string(kOrbitDimBound));
    }
    auto [state, report] = seed(spec, seed_words);  // rejects the zero seed
    (void)report;
    const std::vector<std::uint64_t> start(seed_words.begin(),
                                           seed_words.end());
    const std::uint64_t limit = std::uint64_t{1} << dim;
    for (std::uint64_t k = 1; k <= limit; ++k) {
        step(spec, state);
        if (state.words == start) {
            return k;
        }
        if ((k & 0xffff) == 0 && cancelled && cancelled()) {
            throw CancelledError("orbit scan cancelled");
        }
    }
    throw Error(
        "state never returned to the seed; the transition is not invertible "
        "on this orbit");
}

bool verify_full_period(const XorshiftSpec& spec,
                        const Factorization& factorization) {
    validate_spec(spec);
    const unsigned dim = spec.m * spec.n;
    if (factorization.d() != dim) {
        throw Error("factorization is for 2^" +
                    std::to_string(factorization.d()) + " - 1 but mn = " +
                    std::to_string(dim));
    }
    const Gf2Poly f = det_matrix_polynomial(build_matrix_polynomial(spec));
    const bool algebraic = is_primitive(f, factorization);

    // Orbit cross-check where brute force is in reach. A zero constant term
    // means a singular transition whose orbits need not be cycles; that case
    // is already decided (not primitive).
    if (dim <= kOrbitDimBound && f.coeff(0)) {
        std::vector<std::uint64_t> seed_words(spec.n, 0);
        seed_words[0] = 1;
        const std::uint64_t orbit = orbit_period(spec, seed_words);
        const bool full = orbit == (std::uint64_t{1} << dim) - 1;
        if (full != algebraic) {
            throw Error(
                "internal inconsistency: algebraic primitivity says " +
                std::string(algebraic ? "true" : "false") + " but the orbit " +
                "scan found period " + std::to_string(orbit));
        }
    }
    return algebraic;
}

unsigned tap_count(const XorshiftSpec& spec) {
    unsigned nonzero = 0;
    for (std::uint64_t v : spec.taps) {
        if (v != 0) {
            ++nonzero;
        }
    }
    return 1 + nonzero;
}

namespace {

std::uint64_t shift_right(std::uint64_t w, unsigned k, unsigned m) {
    return k >= m ? 0 : w >> k;
}

}  // namespace

WeaknessReport weakness_trace(const XorshiftSpec& spec, std::uint64_t d,
                              unsigned l) {
    validate_spec(spec);
    const unsigned m = spec.m;
    const unsigned n = spec.n;
    if (d == 0) {
        throw Error("weakness trace needs d != 0");
    }
    if ((d & ~word_mask(m)) != 0) {
        throw Error("d does not fit in m bits");
    }
    if (l < 1 || l > 63 ||
        (d & ((std::uint64_t{1} << l) - 1)) != 0) {
        throw Error("d must be a nonzero multiple of 2^l");
    }
    const std::uint64_t total = std::uint64_t{n} * l;
    if (total > (std::uint64_t{1} << 20)) {
        throw Error("trace budget exceeded");
    }

    WeaknessReport report;
    report.l = l;

    std::vector<std::uint64_t> seed_words(n, 0);
    seed_words[n - 1] = d;
    auto [state, quality] = seed(spec, seed_words);
    (void)quality;

    report.trace.reserve(total);
    report.states.reserve(total);
    for (std::uint64_t k = 0; k < total; ++k) {
        report.trace.push_back(step(spec, state));
        report.states.push_back(state.words);
    }

    report.predicted.assign(total, 0);
    for (unsigned t = 0; t < l; ++t) {
        report.predicted[static_cast<std::size_t>(t) * n + n - 1] =
            shift_right(d, t + 1, m);
    }
    report.pattern_ok = report.trace == report.predicted;

    // closed form s_{n+j} = R^{ceil(j/n)} s_{(j-1) mod n}, two readings
    report.closed_form_step_indexed_ok = true;
    report.closed_form_sequence_indexed_ok = true;
    for (std::uint64_t j = 1; j < total; ++j) {
        const unsigned j1 = static_cast<unsigned>((j + n - 1) / n);
        const std::uint64_t rhs =
            shift_right(seed_words[(j - 1) % n], j1, m);
        if (report.trace[j - 1] != rhs) {
            report.closed_form_step_indexed_ok = false;
        }
        if (report.trace[j] != rhs) {  // sequence element n+j is trace[j]
            report.closed_form_sequence_indexed_ok = false;
        }
    }
    return report;
}

std::string render_weakness_table(const WeaknessReport& report,
                                  const XorshiftSpec& spec, std::uint64_t d) {
    const unsigned n = spec.n;
    const unsigned hexw = std::max(1u, (spec.m + 3) / 4);
    std::ostringstream os;

    std::vector<std::uint64_t> seed_words(n, 0);
    seed_words[n - 1] = d;

    const auto put_state = [&](std::uint64_t iteration,
                               const std::vector<std::uint64_t>& words) {
        os << std::setw(9) << std::dec << iteration << "  (";
        // newest stage first, mirroring the usual display order
        for (unsigned i = 0; i < n; ++i) {
            if (i != 0) {
                os << ", ";
            }
            os << "0x" << std::hex << std::setw(hexw) << std::setfill('0')
               << words[n - 1 - i] << std::setfill(' ');
        }
        os << ")\n";
    };

    os << "iteration  state (newest stage first)\n";
    put_state(1, seed_words);
    for (std::size_t k = 0; k < report.states.size(); ++k) {
        put_state(k + 2, report.states[k]);
    }
    os << std::dec;
    os << "outputs:";
    for (std::uint64_t w : report.trace) {
        os << " " << w;
    }
    os << "\n";
    os << "pattern_ok=" << (report.pattern_ok ? "true" : "false") << "\n";
    os << "closed_form(step-indexed)="
       << (report.closed_form_step_indexed_ok ? "true" : "false") << "\n";
    os << "closed_form(sequence-indexed)="
       << (report.closed_form_sequence_indexed_ok ? "true" : "false") << "\n";
    return os.str();
}

mpz_class census(unsigned m, unsigned n, const Factorization& factorization) {
    if (m < 1 || n < 1) {
        throw Error("census needs m >= 1 and n >= 1");
    }
    const unsigned mn = m * n;
    if (factorization.d() != mn) {
        throw Error("factorization is for 2^" +
                    std::to_string(factorization.d()) + " - 1 but mn = " +
                    std::to_string(mn));
    }
    const mpz_class phi = factorization.totient();
    mpz_class q, r;
    mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), phi.get_mpz_t(), mn);
    if (r != 0) {
        throw Error("phi(2^" + std::to_string(mn) + " - 1) is not divisible " +
                    "by " + std::to_string(mn) +
                    "; the factorization must be wrong");
    }
    return q;
}

OpCountBounds op_count_bounds(unsigned m, unsigned n, std::uint64_t l) {
    if (m < 1 || n < 1) {
        throw Error("op_count_bounds needs m >= 1 and n >= 1");
    }
    OpCountBounds b;
    b.iterations = (l + m - 1) / m;
    b.lower = (std::uint64_t{n} + 2) * b.iterations;
    b.upper = (2 * std::uint64_t{n} + 1) * b.iterations;
    return b;
}

OpCountRatio op_count_ratio(unsigned m1, unsigned n1, unsigned m2, unsigned n2,
                            std::uint64_t l) {
    const OpCountBounds b1 = op_count_bounds(m1, n1, l);
    const OpCountBounds b2 = op_count_bounds(m2, n2, l);
    OpCountRatio r;
    r.lower_num = b1.lower;
    r.lower_den = b2.upper;
    r.upper_num = b1.upper;
    r.upper_den = b2.lower;
    return r;
}

}  // namespace xsgen
