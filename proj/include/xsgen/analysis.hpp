#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "xsgen/construct.hpp"
#include "xsgen/factorization.hpp"

namespace xsgen {

/// Polled at least every 2^16 iterations of long-running scans; returning
/// true aborts with CancelledError.
using CancelFn = std::function<bool()>;

inline constexpr unsigned kOrbitDimBound = 24;

/// Cycle length of the seed's orbit, found by stepping until the state
/// returns to the seed (the transition is linear, so orbits are pure
/// cycles). Requires m*n <= 24 and a nonzero seed.
std::uint64_t orbit_period(const XorshiftSpec& spec,
                           std::span<const std::uint64_t> seed_words,
                           const CancelFn& cancelled = {});

/// Reassembles the spec's characteristic polynomial through the matrix
/// polynomial determinant and tests primitivity. For m*n <= 24 (and an
/// invertible transition) also runs one full orbit and demands agreement,
/// throwing a hard error on any mismatch between the two routes.
bool verify_full_period(const XorshiftSpec& spec,
                        const Factorization& factorization);

/// 1 + |{i : v_i != 0}|: the right shift plus one XOR per nonzero tap.
unsigned tap_count(const XorshiftSpec& spec);

struct WeaknessReport {
    unsigned l = 0;
    std::vector<std::uint64_t> trace;      // n*l output words
    std::vector<std::uint64_t> predicted;  // (n-1) zeros then d/2^t blocks
    bool pattern_ok = false;
    /// Closed form checked with s_{n+j} read as the output of step j (the
    /// iteration numbering of the state table, which starts at the seed).
    bool closed_form_step_indexed_ok = false;
    /// Same formula read against the raw recurrence sequence element n+j.
    bool closed_form_sequence_indexed_ok = false;
    std::vector<std::vector<std::uint64_t>> states;  // after each step, s_0 first
};

/// Seeds (0, ..., 0, d) with 2^l | d, d != 0, runs n*l steps and compares
/// the outputs against the predicted right-shift cascade.
WeaknessReport weakness_trace(const XorshiftSpec& spec, std::uint64_t d,
                              unsigned l);

/// Aligned ASCII table of the trace states (newest stage first, iteration 1
/// being the seed), plus the pattern and closed-form verdicts.
std::string render_weakness_table(const WeaknessReport& report,
                                  const XorshiftSpec& spec,
                                  std::uint64_t d);

/// phi(2^{mn} - 1) / (mn): the number of distinct full-period generators of
/// order n over GF(2^m). Throws if the factorization is for the wrong d or
/// if mn does not divide the totient (impossible for a correct
/// factorization).
mpz_class census(unsigned m, unsigned n, const Factorization& factorization);

struct OpCountBounds {
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    std::uint64_t iterations = 0;

    bool operator==(const OpCountBounds&) const = default;
};

/// [ (n+2) ceil(l/m), (2n+1) ceil(l/m) ]: word operations to emit l bits.
OpCountBounds op_count_bounds(unsigned m, unsigned n, std::uint64_t l);

/// Exact fraction bounds for N_1/N_2 between two word sizes of one mn:
/// lower = lower_1/upper_2, upper = upper_1/lower_2.
struct OpCountRatio {
    std::uint64_t lower_num = 0, lower_den = 1;
    std::uint64_t upper_num = 0, upper_den = 1;
};

OpCountRatio op_count_ratio(unsigned m1, unsigned n1, unsigned m2, unsigned n2,
                            std::uint64_t l);

}  // namespace xsgen
