#include "xsgen/gf2poly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <ostream>
#include <sstream>

#include "xsgen/errors.hpp"
#include "xsgen/factorization.hpp"

namespace xsgen {

namespace {

constexpr unsigned kWordBits = 64;

}  // namespace

void Gf2Poly::trim() {
    while (!words_.empty() && words_.back() == 0) {
        words_.pop_back();
    }
}

Gf2Poly Gf2Poly::one() { return from_words({1}); }

Gf2Poly Gf2Poly::x() { return from_words({2}); }

Gf2Poly Gf2Poly::x_pow(unsigned k) {
    Gf2Poly p;
    p.set_coeff(k, true);
    return p;
}

Gf2Poly Gf2Poly::from_degrees(const std::vector<unsigned>& degrees) {
    Gf2Poly p;
    for (unsigned d : degrees) {
        if (p.coeff(d)) {
            throw Error("duplicate degree " + std::to_string(d) +
                        " in polynomial degree list");
        }
        p.set_coeff(d, true);
    }
    return p;
}

Gf2Poly Gf2Poly::from_words(std::vector<std::uint64_t> words) {
    Gf2Poly p;
    p.words_ = std::move(words);
    p.trim();
    return p;
}

int Gf2Poly::degree() const {
    if (words_.empty()) {
        return -1;
    }
    return static_cast<int>(words_.size() * kWordBits) - 1 -
           std::countl_zero(words_.back());
}

bool Gf2Poly::coeff(unsigned i) const {
    const std::size_t w = i / kWordBits;
    if (w >= words_.size()) {
        return false;
    }
    return (words_[w] >> (i % kWordBits)) & 1;
}

void Gf2Poly::set_coeff(unsigned i, bool value) {
    const std::size_t w = i / kWordBits;
    if (w >= words_.size()) {
        if (!value) {
            return;
        }
        words_.resize(w + 1, 0);
    }
    const std::uint64_t bit = std::uint64_t{1} << (i % kWordBits);
    if (value) {
        words_[w] |= bit;
    } else {
        words_[w] &= ~bit;
        trim();
    }
}

std::size_t Gf2Poly::weight() const {
    std::size_t w = 0;
    for (std::uint64_t word : words_) {
        w += static_cast<std::size_t>(std::popcount(word));
    }
    return w;
}

Gf2Poly Gf2Poly::operator+(const Gf2Poly& rhs) const {
    Gf2Poly out = *this;
    out += rhs;
    return out;
}

Gf2Poly& Gf2Poly::operator+=(const Gf2Poly& rhs) {
    if (rhs.words_.size() > words_.size()) {
        words_.resize(rhs.words_.size(), 0);
    }
    for (std::size_t i = 0; i < rhs.words_.size(); ++i) {
        words_[i] ^= rhs.words_[i];
    }
    trim();
    return *this;
}

Gf2Poly Gf2Poly::operator<<(unsigned k) const {
    if (is_zero() || k == 0) {
        Gf2Poly out = *this;
        return out;
    }
    const unsigned wordshift = k / kWordBits;
    const unsigned bitshift = k % kWordBits;
    std::vector<std::uint64_t> out(words_.size() + wordshift + 1, 0);
    for (std::size_t i = 0; i < words_.size(); ++i) {
        out[i + wordshift] ^= words_[i] << bitshift;
        if (bitshift != 0) {
            out[i + wordshift + 1] ^= words_[i] >> (kWordBits - bitshift);
        }
    }
    return from_words(std::move(out));
}

Gf2Poly Gf2Poly::operator*(const Gf2Poly& rhs) const {
    if (is_zero() || rhs.is_zero()) {
        return {};
    }
    std::vector<std::uint64_t> out(words_.size() + rhs.words_.size(), 0);
    for (std::size_t i = 0; i < rhs.words_.size(); ++i) {
        std::uint64_t w = rhs.words_[i];
        while (w != 0) {
            const unsigned b = static_cast<unsigned>(std::countr_zero(w));
            w &= w - 1;
            const unsigned shift = b;
            for (std::size_t j = 0; j < words_.size(); ++j) {
                out[i + j] ^= words_[j] << shift;
                if (shift != 0) {
                    out[i + j + 1] ^= words_[j] >> (kWordBits - shift);
                }
            }
        }
    }
    return from_words(std::move(out));
}

std::ostream& operator<<(std::ostream& os, const Gf2Poly& p) {
    if (p.is_zero()) {
        return os << "0";
    }
    return os << "degs:" << p.to_degs();
}

Gf2Poly poly_mod(Gf2Poly a, const Gf2Poly& modulus) {
    if (modulus.is_zero()) {
        throw Error("polynomial reduction by the zero modulus");
    }
    const int dm = modulus.degree();
    int da = a.degree();
    while (da >= dm) {
        a += modulus << static_cast<unsigned>(da - dm);
        da = a.degree();
    }
    return a;
}

void poly_divmod(const Gf2Poly& a, const Gf2Poly& divisor, Gf2Poly& quotient,
                 Gf2Poly& remainder) {
    if (divisor.is_zero()) {
        throw Error("polynomial division by zero");
    }
    quotient = Gf2Poly::zero();
    remainder = a;
    const int dd = divisor.degree();
    int dr = remainder.degree();
    while (dr >= dd) {
        const unsigned shift = static_cast<unsigned>(dr - dd);
        quotient.set_coeff(shift, true);
        remainder += divisor << shift;
        dr = remainder.degree();
    }
}

Gf2Poly poly_mulmod(const Gf2Poly& a, const Gf2Poly& b,
                    const Gf2Poly& modulus) {
    if (modulus.is_zero()) {
        throw Error("polynomial reduction by the zero modulus");
    }
    return poly_mod(a * b, modulus);
}

Gf2Poly poly_powmod(const Gf2Poly& base, const mpz_class& exponent,
                    const Gf2Poly& modulus) {
    if (modulus.is_zero()) {
        throw Error("polynomial reduction by the zero modulus");
    }
    if (modulus.degree() < 1) {
        throw Error("poly_powmod needs a modulus of degree >= 1");
    }
    if (sgn(exponent) < 0) {
        throw Error("poly_powmod exponent must be nonnegative");
    }
    Gf2Poly result = Gf2Poly::one();
    Gf2Poly sq = poly_mod(base, modulus);
    const mp_bitcnt_t nbits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
    if (exponent == 0) {
        return result;
    }
    for (mp_bitcnt_t i = 0; i < nbits; ++i) {
        if (mpz_tstbit(exponent.get_mpz_t(), i)) {
            result = poly_mulmod(result, sq, modulus);
        }
        if (i + 1 < nbits) {
            sq = poly_mulmod(sq, sq, modulus);
        }
    }
    return result;
}

Gf2Poly poly_powmod(const Gf2Poly& base, std::uint64_t exponent,
                    const Gf2Poly& modulus) {
    mpz_class e;
    mpz_set_ui(e.get_mpz_t(), static_cast<unsigned long>(exponent));
    return poly_powmod(base, e, modulus);
}

Gf2Poly poly_gcd(Gf2Poly a, Gf2Poly b) {
    if (a.is_zero() && b.is_zero()) {
        throw Error("gcd(0, 0) is undefined");
    }
    while (!b.is_zero()) {
        Gf2Poly r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool is_irreducible(const Gf2Poly& f) {
    const int d = f.degree();
    if (d < 1) {
        throw Error("irreducibility is defined for degree >= 1");
    }
    const Gf2Poly x = poly_mod(Gf2Poly::x(), f);
    // X^{2^d} mod f by d Frobenius squarings.
    Gf2Poly t = x;
    for (int i = 0; i < d; ++i) {
        t = poly_mulmod(t, t, f);
    }
    if (t != x) {
        return false;
    }
    for (unsigned p = 2; p <= static_cast<unsigned>(d); ++p) {
        if (static_cast<unsigned>(d) % p != 0) {
            continue;
        }
        bool prime = true;
        for (unsigned q = 2; q * q <= p; ++q) {
            if (p % q == 0) {
                prime = false;
                break;
            }
        }
        if (!prime) {
            continue;
        }
        t = x;
        for (unsigned i = 0; i < static_cast<unsigned>(d) / p; ++i) {
            t = poly_mulmod(t, t, f);
        }
        if (poly_gcd(t + x, f) != Gf2Poly::one()) {
            return false;
        }
    }
    return true;
}

namespace detail {

// Order part of the primitivity test, assuming f irreducible of degree d:
// X^{(2^d-1)/p} != 1 for every prime p | 2^d - 1.
bool has_full_order(const Gf2Poly& f, const Factorization& factorization) {
    const mpz_class group_order = factorization.modulus();
    const Gf2Poly one = Gf2Poly::one();
    for (const FactorEntry& entry : factorization.factors()) {
        mpz_class e = group_order / entry.prime;
        if (poly_powmod(Gf2Poly::x(), e, f) == one) {
            return false;
        }
    }
    return true;
}

}  // namespace detail

bool is_primitive(const Gf2Poly& f, const Factorization& factorization) {
    const int d = f.degree();
    if (d < 1) {
        throw Error("primitivity is defined for degree >= 1");
    }
    if (factorization.d() != static_cast<unsigned>(d)) {
        throw Error("factorization is for 2^" +
                    std::to_string(factorization.d()) + " - 1 but deg(f) = " +
                    std::to_string(d));
    }
    if (!f.coeff(0)) {
        return false;  // X divides f
    }
    if (!is_irreducible(f)) {
        return false;
    }
    return detail::has_full_order(f, factorization);
}

Gf2Poly random_primitive(unsigned d, std::mt19937_64& rng,
                         unsigned max_attempts,
                         const Factorization* factorization) {
    if (d < 1) {
        throw Error("random_primitive needs degree >= 1");
    }
    Factorization owned = factorization ? *factorization : factor_mersenne(d);
    if (owned.d() != d) {
        throw Error("factorization does not match requested degree");
    }
    if (max_attempts == 0) {
        max_attempts = 64 * d;
    }
    for (unsigned attempt = 1; attempt <= max_attempts; ++attempt) {
        std::vector<std::uint64_t> words((d + 64) / 64);
        for (auto& w : words) {
            w = rng();
        }
        Gf2Poly f = Gf2Poly::from_words(std::move(words));
        // clear everything above X^d, force a_d = a_0 = 1
        for (int i = f.degree(); i > static_cast<int>(d); --i) {
            f.set_coeff(static_cast<unsigned>(i), false);
        }
        f.set_coeff(d, true);
        f.set_coeff(0, true);
        if (is_primitive(f, owned)) {
            return f;
        }
    }
    throw SearchExhaustedError(
        "no primitive polynomial of degree " + std::to_string(d) + " found in " +
            std::to_string(max_attempts) + " attempts",
        max_attempts);
}

// ---- text format ----

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Gf2Poly Gf2Poly::parse(const std::string& text) {
    if (text.rfind("hex:", 0) == 0) {
        const std::string digits = text.substr(4);
        if (digits.empty()) {
            throw Error("empty hex polynomial literal");
        }
        Gf2Poly p;
        // digits are most significant first; nibble k from the right covers
        // bits 4k..4k+3
        const std::size_t nd = digits.size();
        std::vector<std::uint64_t> words((nd * 4 + 63) / 64, 0);
        for (std::size_t k = 0; k < nd; ++k) {
            const int v = hex_digit(digits[nd - 1 - k]);
            if (v < 0) {
                throw Error("bad hex digit '" + std::string(1, digits[nd - 1 - k]) +
                            "' in polynomial literal");
            }
            words[(k * 4) / 64] |= static_cast<std::uint64_t>(v) << ((k * 4) % 64);
        }
        return from_words(std::move(words));
    }
    if (text.rfind("degs:", 0) == 0) {
        const std::string list = text.substr(5);
        std::vector<unsigned> degrees;
        std::stringstream ss(list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            // trim spaces
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            if (b == std::string::npos) {
                throw Error("empty entry in polynomial degree list");
            }
            item = item.substr(b, e - b + 1);
            std::size_t pos = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(item, &pos, 10);
            } catch (const std::exception&) {
                throw Error("bad degree '" + item + "' in polynomial literal");
            }
            if (pos != item.size()) {
                throw Error("bad degree '" + item + "' in polynomial literal");
            }
            degrees.push_back(static_cast<unsigned>(v));
        }
        if (degrees.empty()) {
            throw Error("empty polynomial degree list");
        }
        return from_degrees(degrees);
    }
    throw Error("polynomial literal must start with 'hex:' or 'degs:'");
}

std::string Gf2Poly::to_hex() const {
    if (is_zero()) {
        return "0";
    }
    const int d = degree();
    const int nibbles = d / 4 + 1;
    std::string out;
    out.reserve(static_cast<std::size_t>(nibbles));
    for (int k = nibbles - 1; k >= 0; --k) {
        const std::size_t w = static_cast<std::size_t>(k) * 4 / 64;
        const unsigned shift = static_cast<unsigned>(k) * 4 % 64;
        const unsigned v = (words_[w] >> shift) & 0xf;
        out.push_back("0123456789abcdef"[v]);
    }
    // strip leading zeros (possible when d % 4 == 3 they are not, but be safe)
    const auto first = out.find_first_not_of('0');
    return out.substr(first);
}

std::string Gf2Poly::to_degs() const {
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        if (coeff(static_cast<unsigned>(i))) {
            if (!out.empty()) {
                out.push_back(',');
            }
            out += std::to_string(i);
        }
    }
    return out;
}

}  // namespace xsgen
