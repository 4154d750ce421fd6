#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace xsgen {

struct FactorEntry {
    mpz_class prime;
    unsigned exponent = 1;

    bool operator==(const FactorEntry&) const = default;
};

/// Complete factorization of 2^d - 1. Construction validates that primes are
/// strictly increasing with exponents >= 1, that the product reassembles
/// 2^d - 1 exactly, and that every prime passes the deterministic
/// Miller-Rabin certificate. Primes beyond the deterministic range are
/// rejected unless the factorization is marked trusted.
class Factorization {
public:
    Factorization(unsigned d, std::vector<FactorEntry> factors,
                  bool trusted = false);

    unsigned d() const { return d_; }
    const std::vector<FactorEntry>& factors() const { return factors_; }
    bool trusted() const { return trusted_; }

    mpz_class modulus() const;  // 2^d - 1
    mpz_class totient() const;  // phi(2^d - 1), multiplicative from factors

private:
    unsigned d_;
    std::vector<FactorEntry> factors_;
    bool trusted_;
};

/// Deterministic Miller-Rabin with the 13-base set valid below
/// 3.317e24; callers must check within_deterministic_mr_range first.
bool within_deterministic_mr_range(const mpz_class& n);
bool is_certified_prime(const mpz_class& n);

struct FactorEffort {
    std::uint64_t trial_division_bound = 1'000'000;
    std::uint64_t rho_iteration_cap = std::uint64_t{1} << 26;
};

/// Factor-table file: one line per d, "d: p1^e1 * p2^e2 * ...", optional
/// trailing "trusted" word, '#' comments and blank lines allowed.
class FactorTable {
public:
    static FactorTable parse(std::istream& in);
    static FactorTable load(const std::string& path);

    const Factorization* find(unsigned d) const;
    std::size_t size() const { return entries_.size(); }
    void insert(Factorization f);

private:
    std::map<unsigned, Factorization> entries_;
};

/// Complete factorization of 2^d - 1: consults the supplied table first,
/// then the built-in table (all d <= 64), then trial division up to the
/// configured bound followed by Pollard rho under an iteration cap. Either
/// returns a complete, certified factorization or throws FactorizationError;
/// never a silent partial result.
Factorization factor_mersenne(unsigned d, const FactorTable* table = nullptr,
                              const FactorEffort& effort = {});

/// The built-in entry for d <= 64, or nullptr.
const Factorization* builtin_mersenne_factorization(unsigned d);

}  // namespace xsgen
