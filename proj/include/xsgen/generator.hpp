#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "xsgen/bitmatrix.hpp"
#include "xsgen/construct.hpp"

namespace xsgen {

/// Runtime state: n words of m bits, words[0] = oldest stage s_0.
struct GeneratorState {
    unsigned m = 0;
    std::vector<std::uint64_t> words;
    std::uint64_t step_count = 0;

    bool operator==(const GeneratorState&) const = default;
};

enum class SeedQuality { Good, Degraded, Reject };

struct SeedReport {
    SeedQuality quality = SeedQuality::Reject;
    /// For Degraded: the maximal l >= 1 with 2^l dividing every word.
    unsigned shared_pow2 = 0;
};

/// Good when at least one word is odd, Degraded(l) when every word is
/// divisible by 2^l (maximal l >= 1), Reject when all words are zero.
SeedReport classify_seed(std::span<const std::uint64_t> words);

/// Builds a state from exactly n words. Throws on an all-zero seed (the
/// period-1 fixed point) and on words that do not fit in m bits.
std::pair<GeneratorState, SeedReport> seed(const XorshiftSpec& spec,
                                           std::span<const std::uint64_t> words);

/// One generator step: fb = (s_0 >> 1) XOR the taps v_i whose stage has an
/// odd word; stages age by one and the feedback becomes the newest stage.
/// Returns the feedback word, which is the emitted output.
std::uint64_t step(const XorshiftSpec& spec, GeneratorState& state);

/// Word-operation counters for the cost-model tests. `feedback_tap_terms`
/// counts one masked XOR per nonzero tap (evaluated every step);
/// `active_tap_xors` counts only the taps whose selector bit was 1.
struct StepOpCounts {
    std::uint64_t stage_moves = 0;
    std::uint64_t feedback_shifts = 0;
    std::uint64_t feedback_tap_terms = 0;
    std::uint64_t active_tap_xors = 0;

    std::uint64_t model_total() const {
        return stage_moves + feedback_shifts + feedback_tap_terms;
    }
};

std::uint64_t step_counted(const XorshiftSpec& spec, GeneratorState& state,
                           StepOpCounts& counts);

/// Oracle step: flattens the state to an mn-bit vector (stage 0 first, x_1
/// of each stage at the lowest flat index), multiplies by T over GF(2) and
/// repacks. Throws on dimension mismatch.
GeneratorState step_dense(const BitMatrix& T, const GeneratorState& state);

/// Performs ceil(nbits/m) steps and packs the output words into bytes:
/// word bits are appended least significant first and bytes fill least
/// significant bit first, so for m in {8,16,32,64} each word lands as
/// ceil(m/8) little-endian bytes. Truncated to ceil(nbits/8) bytes with
/// zero padding after bit nbits-1.
std::vector<std::uint8_t> generate_stream(const XorshiftSpec& spec,
                                          GeneratorState& state,
                                          std::uint64_t nbits);

}  // namespace xsgen
