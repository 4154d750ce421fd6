#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "xsgen/bitmatrix.hpp"
#include "xsgen/factorization.hpp"
#include "xsgen/gf2poly.hpp"

namespace xsgen {

/// A word-based xorshift generator: word size m, order n, and the n tap
/// vectors v_0..v_{n-1}. Word bit convention used throughout: a state word
/// encodes the column vector (x_1, ..., x_m) with x_1 at bit m-1 and x_m at
/// bit 0, so the right-shift operator R is `>> 1` and the feedback selector
/// alpha_i is the least significant bit. Tap word v_i packs a_{jn+i} at bit
/// m-1-j (a_i at the most significant bit).
struct XorshiftSpec {
    unsigned m = 0;
    unsigned n = 0;
    std::vector<std::uint64_t> taps;

    bool operator==(const XorshiftSpec&) const = default;
};

/// Throws unless 1 <= m <= 64, n >= 1, taps.size() == n and every tap fits
/// in m bits.
void validate_spec(const XorshiftSpec& spec);

std::uint64_t word_mask(unsigned m);

/// Marsaglia triplet generator parameters for the (I+L^a)(I+R^b) / (I+R^c)
/// companion form.
struct TripletSpec {
    unsigned a = 1, b = 1, c = 1;
    unsigned m = 1, n = 1;
};

/// The m x m matrix polynomial with X^n down the diagonal, 1 on the
/// subdiagonal and the coefficient chunks of f in the last column.
class MatrixPolynomial {
public:
    MatrixPolynomial(unsigned block_size, unsigned degree_bound);

    unsigned block_size() const { return m_; }    // m
    unsigned degree_bound() const { return n_; }  // n

    const Gf2Poly& entry(unsigned r, unsigned c) const;
    Gf2Poly& entry(unsigned r, unsigned c);

private:
    unsigned m_, n_;
    std::vector<Gf2Poly> entries_;
};

/// Reads the n-strided coefficient columns of f into tap words:
/// v_i = (a_i, a_{n+i}, ..., a_{(m-1)n+i}). Requires deg(f) = m*n.
XorshiftSpec build_tap_vectors(const Gf2Poly& f, unsigned m);

/// Inverse of build_tap_vectors: the degree-mn polynomial whose strided
/// columns are the spec's taps (leading coefficient 1).
Gf2Poly tap_polynomial(const XorshiftSpec& spec);

/// The mn x mn block companion matrix: identity blocks on the superdiagonal,
/// bottom block row (C_0, ..., C_{n-1}) with C_0 = R + (last column v_0) and
/// C_i (i >= 1) zero except for last column v_i.
BitMatrix build_block_companion(const XorshiftSpec& spec);

MatrixPolynomial build_matrix_polynomial(const Gf2Poly& f, unsigned m);
/// Same shape reassembled directly from tap words (leading coefficient 1).
MatrixPolynomial build_matrix_polynomial(const XorshiftSpec& spec);

/// Determinant of the matrix polynomial by the nested Horner evaluation of
/// its last column; equals the originating polynomial.
Gf2Poly det_matrix_polynomial(const MatrixPolynomial& M);

inline constexpr unsigned kCharpolyOracleBound = 64;

/// Characteristic polynomial det(XI - T) by similarity reduction to
/// Hessenberg form and the standard recurrence -- a generic method,
/// deliberately independent of the Horner elimination above so the two can
/// cross-check each other. Exact; throws when dim(T) > max_dim.
Gf2Poly charpoly_dense(const BitMatrix& T,
                       unsigned max_dim = kCharpolyOracleBound);

/// Checks that f is primitive (throwing NotPrimitiveError with the failed
/// criterion otherwise), then compiles it into tap vectors.
XorshiftSpec construct_from_primitive(const Gf2Poly& f, unsigned m,
                                      const Factorization& factorization);

/// The Marsaglia xorshift companion: bottom-left block (I+L^a)(I+R^b),
/// bottom-right block (I+R^c) (the two coincide and add when n = 1).
BitMatrix build_marsaglia_matrix(const TripletSpec& t);

/// Builds the triplet matrix, takes its dense characteristic polynomial and
/// tests primitivity. Requires m*n within the charpoly oracle bound.
bool check_triplet(const TripletSpec& t, const Factorization& factorization,
                   unsigned max_dim = kCharpolyOracleBound);

/// Samples a primitive spec with exactly k xorshift operations: column 0
/// plus k-2 random distinct columns get random bits (columns resampled while
/// all-zero), a_0 = a_{mn} = 1, repeated until primitive. Requires
/// 2 <= k <= n+1. max_attempts = 0 selects the default budget of 64*m*n
/// primitivity tests.
XorshiftSpec sample_k_tap(unsigned m, unsigned n, unsigned k,
                          std::mt19937_64& rng,
                          const Factorization& factorization,
                          unsigned max_attempts = 0,
                          unsigned* attempts_out = nullptr);

/// Spec file format (line-oriented ASCII, '#' comments): "m=<int>",
/// "n=<int>", then "v<i>=hex:<hex>" for i = 0..n-1.
void write_spec(std::ostream& out, const XorshiftSpec& spec);
XorshiftSpec parse_spec(std::istream& in);
XorshiftSpec load_spec(const std::string& path);

}  // namespace xsgen
