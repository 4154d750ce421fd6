#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace xsgen {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotPrimitive = 2;
inline constexpr int kExitNoFactorization = 3;
inline constexpr int kExitSearchExhausted = 4;

struct BenchResult {
    unsigned word_size = 0;
    std::uint64_t bits_generated = 0;
    double elapsed_seconds = 0.0;
    std::optional<double> ratio_to_prev;  // previous row's time / this row's
};

/// Times bit generation at each word size with a fixed (period-unverified)
/// degree-mn polynomial: median of `repetitions` runs per word size, stream
/// discarded, rows run sequentially. Every word size must divide mn.
std::vector<BenchResult> run_bench(unsigned mn,
                                   const std::vector<unsigned>& word_sizes,
                                   std::uint64_t nbits, unsigned repetitions);

/// Full command-line surface; returns the process exit code. Subcommands:
/// construct, sample, stream, period, weakness, census, check-triplet,
/// bench.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace xsgen
