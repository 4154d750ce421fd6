#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace xsgen {

class Factorization;

/// Polynomial over GF(2), bit-packed: the coefficient of X^i lives at bit i
/// (a_0 in the least significant bit of word 0). Storage is kept trimmed so
/// the top word is nonzero; the zero polynomial has no words.
class Gf2Poly {
public:
    Gf2Poly() = default;

    static Gf2Poly zero() { return {}; }
    static Gf2Poly one();
    static Gf2Poly x();
    static Gf2Poly x_pow(unsigned k);
    static Gf2Poly from_degrees(const std::vector<unsigned>& degrees);
    static Gf2Poly from_words(std::vector<std::uint64_t> words);

    /// Text forms: "hex:<hexstring>" with a_0 as the least significant bit,
    /// or "degs:<comma separated degree list>".
    static Gf2Poly parse(const std::string& text);
    std::string to_hex() const;   // bare lowercase hex digits, "0" for zero
    std::string to_degs() const;  // bare descending degree list, "" for zero

    /// Index of the highest set bit; -1 for the zero polynomial.
    int degree() const;
    bool is_zero() const { return words_.empty(); }
    bool coeff(unsigned i) const;
    void set_coeff(unsigned i, bool value);
    std::size_t weight() const;

    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const Gf2Poly&) const = default;

    Gf2Poly operator+(const Gf2Poly& rhs) const;  // coefficient-wise XOR
    Gf2Poly& operator+=(const Gf2Poly& rhs);
    Gf2Poly operator*(const Gf2Poly& rhs) const;  // carry-less product
    Gf2Poly operator<<(unsigned k) const;         // times X^k

private:
    void trim();
    std::vector<std::uint64_t> words_;
};

std::ostream& operator<<(std::ostream& os, const Gf2Poly& p);

/// Remainder of a modulo `modulus`; throws on zero modulus.
Gf2Poly poly_mod(Gf2Poly a, const Gf2Poly& modulus);
void poly_divmod(const Gf2Poly& a, const Gf2Poly& divisor, Gf2Poly& quotient,
                 Gf2Poly& remainder);

/// (a * b) mod modulus. Throws on zero modulus; use operator* for the plain
/// product.
Gf2Poly poly_mulmod(const Gf2Poly& a, const Gf2Poly& b, const Gf2Poly& modulus);

/// base^exponent mod modulus by square-and-multiply. The exponent may exceed
/// machine words (order checks use exponents up to 2^d - 1).
Gf2Poly poly_powmod(const Gf2Poly& base, const mpz_class& exponent,
                    const Gf2Poly& modulus);
Gf2Poly poly_powmod(const Gf2Poly& base, std::uint64_t exponent,
                    const Gf2Poly& modulus);

/// Monic gcd; throws if both arguments are zero.
Gf2Poly poly_gcd(Gf2Poly a, Gf2Poly b);

/// Frobenius-based irreducibility test: X^{2^d} = X mod f and
/// gcd(X^{2^{d/p}} - X, f) = 1 for every prime p dividing d. Throws for
/// degree < 1.
bool is_irreducible(const Gf2Poly& f);

/// True iff f is irreducible and the order of X mod f is exactly 2^d - 1,
/// checked as X^{(2^d-1)/p} != 1 for every prime p of the factorization.
/// Throws if factorization.d() != degree(f).
bool is_primitive(const Gf2Poly& f, const Factorization& factorization);

namespace detail {
/// Order half of the primitivity test; f must already be irreducible with
/// degree matching the factorization.
bool has_full_order(const Gf2Poly& f, const Factorization& factorization);
}  // namespace detail

/// Rejection-samples a primitive polynomial of degree d with a_0 = a_d = 1.
/// Deterministic for a given rng state. max_attempts = 0 selects the default
/// budget of 64*d primitivity tests. A null factorization means "factor
/// 2^d - 1 internally" (built-in table for d <= 64).
Gf2Poly random_primitive(unsigned d, std::mt19937_64& rng,
                         unsigned max_attempts = 0,
                         const Factorization* factorization = nullptr);

}  // namespace xsgen
