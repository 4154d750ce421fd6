#include "xsgen/generator.hpp"

#include <bit>
#include <cstring>

#include "xsgen/errors.hpp"

namespace xsgen {

SeedReport classify_seed(std::span<const std::uint64_t> words) {
    bool all_zero = true;
    unsigned min_val = ~0u;
    for (std::uint64_t w : words) {
        if (w == 0) {
            continue;
        }
        all_zero = false;
        min_val = std::min(min_val,
                           static_cast<unsigned>(std::countr_zero(w)));
    }
    if (all_zero) {
        return {SeedQuality::Reject, 0};
    }
    if (min_val == 0) {
        return {SeedQuality::Good, 0};
    }
    return {SeedQuality::Degraded, min_val};
}

std::pair<GeneratorState, SeedReport> seed(
    const XorshiftSpec& spec, std::span<const std::uint64_t> words) {
    validate_spec(spec);
    if (words.size() != spec.n) {
        throw Error("seed needs exactly n = " + std::to_string(spec.n) +
                    " words");
    }
    const std::uint64_t mask = word_mask(spec.m);
    for (std::uint64_t w : words) {
        if ((w & ~mask) != 0) {
            throw Error("seed word does not fit in m bits");
        }
    }
    const SeedReport report = classify_seed(words);
    if (report.quality == SeedQuality::Reject) {
        throw Error("all-zero seed is the period-1 fixed point");
    }
    GeneratorState state;
    state.m = spec.m;
    state.words.assign(words.begin(), words.end());
    return {std::move(state), report};
}

std::uint64_t step(const XorshiftSpec& spec, GeneratorState& state) {
    std::uint64_t* w = state.words.data();
    const unsigned n = spec.n;
    std::uint64_t fb = w[0] >> 1;
    for (unsigned i = 0; i < n; ++i) {
        const std::uint64_t v = spec.taps[i];
        if (v != 0) {
            fb ^= v & (std::uint64_t{0} - (w[i] & 1));
        }
    }
    std::memmove(w, w + 1, (n - 1) * sizeof(std::uint64_t));
    w[n - 1] = fb;
    ++state.step_count;
    return fb;
}

std::uint64_t step_counted(const XorshiftSpec& spec, GeneratorState& state,
                           StepOpCounts& counts) {
    std::uint64_t* w = state.words.data();
    const unsigned n = spec.n;
    std::uint64_t fb = w[0] >> 1;
    counts.feedback_shifts += 1;
    for (unsigned i = 0; i < n; ++i) {
        const std::uint64_t v = spec.taps[i];
        if (v != 0) {
            counts.feedback_tap_terms += 1;
            const std::uint64_t active = w[i] & 1;
            counts.active_tap_xors += active;
            fb ^= v & (std::uint64_t{0} - active);
        }
    }
    std::memmove(w, w + 1, (n - 1) * sizeof(std::uint64_t));
    w[n - 1] = fb;
    counts.stage_moves += n;
    ++state.step_count;
    return fb;
}

GeneratorState step_dense(const BitMatrix& T, const GeneratorState& state) {
    const unsigned m = state.m;
    const unsigned n = static_cast<unsigned>(state.words.size());
    if (T.dim() != m * n) {
        throw Error("dense step: matrix dim " + std::to_string(T.dim()) +
                    " != m*n = " + std::to_string(m * n));
    }
    // flatten: stage i occupies flat bits [i*m, (i+1)*m), x_1 (word bit m-1)
    // first
    std::vector<std::uint64_t> flat((m * n + 63) / 64, 0);
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; j < m; ++j) {
            if ((state.words[i] >> (m - 1 - j)) & 1) {
                const unsigned t = i * m + j;
                flat[t / 64] |= std::uint64_t{1} << (t % 64);
            }
        }
    }
    const std::vector<std::uint64_t> out = T.mul_vector(flat);
    GeneratorState next;
    next.m = m;
    next.words.assign(n, 0);
    next.step_count = state.step_count + 1;
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; j < m; ++j) {
            const unsigned t = i * m + j;
            if ((out[t / 64] >> (t % 64)) & 1) {
                next.words[i] |= std::uint64_t{1} << (m - 1 - j);
            }
        }
    }
    return next;
}

std::vector<std::uint8_t> generate_stream(const XorshiftSpec& spec,
                                          GeneratorState& state,
                                          std::uint64_t nbits) {
    validate_spec(spec);
    if (nbits == 0) {
        return {};
    }
    const unsigned m = spec.m;
    const std::uint64_t steps = (nbits + m - 1) / m;
    const std::uint64_t nbytes = (nbits + 7) / 8;
    std::vector<std::uint8_t> out(nbytes, 0);
    std::uint64_t bitpos = 0;
    for (std::uint64_t s = 0; s < steps; ++s) {
        const std::uint64_t w = step(spec, state);
        for (unsigned j = 0; j < m && bitpos < nbits; ++j, ++bitpos) {
            if ((w >> j) & 1) {
                out[bitpos / 8] |= static_cast<std::uint8_t>(1u << (bitpos % 8));
            }
        }
    }
    return out;
}

}  // namespace xsgen
