#include "xsgen/construct.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "xsgen/errors.hpp"

namespace xsgen {

std::uint64_t word_mask(unsigned m) {
    return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
}

void validate_spec(const XorshiftSpec& spec) {
    if (spec.m < 1 || spec.m > 64) {
        throw Error("word size m must be in [1, 64]");
    }
    if (spec.n < 1) {
        throw Error("order n must be >= 1");
    }
    if (spec.taps.size() != spec.n) {
        throw Error("spec needs exactly n tap words");
    }
    const std::uint64_t mask = word_mask(spec.m);
    for (std::uint64_t v : spec.taps) {
        if ((v & ~mask) != 0) {
            throw Error("tap word does not fit in m bits");
        }
    }
}

XorshiftSpec build_tap_vectors(const Gf2Poly& f, unsigned m) {
    if (m < 1 || m > 64) {
        throw Error("word size m must be in [1, 64]");
    }
    const int deg = f.degree();
    if (deg < 1 || static_cast<unsigned>(deg) % m != 0) {
        throw Error("word size " + std::to_string(m) +
                    " does not divide deg(f) = " + std::to_string(deg));
    }
    const unsigned n = static_cast<unsigned>(deg) / m;
    XorshiftSpec spec{m, n, std::vector<std::uint64_t>(n, 0)};
    for (unsigned i = 0; i < n; ++i) {
        std::uint64_t v = 0;
        for (unsigned j = 0; j < m; ++j) {
            if (f.coeff(j * n + i)) {
                v |= std::uint64_t{1} << (m - 1 - j);
            }
        }
        spec.taps[i] = v;
    }
    return spec;
}

Gf2Poly tap_polynomial(const XorshiftSpec& spec) {
    validate_spec(spec);
    Gf2Poly f;
    for (unsigned i = 0; i < spec.n; ++i) {
        for (unsigned j = 0; j < spec.m; ++j) {
            if ((spec.taps[i] >> (spec.m - 1 - j)) & 1) {
                f.set_coeff(j * spec.n + i, true);
            }
        }
    }
    f.set_coeff(spec.m * spec.n, true);
    return f;
}

BitMatrix build_block_companion(const XorshiftSpec& spec) {
    validate_spec(spec);
    const unsigned m = spec.m;
    const unsigned n = spec.n;
    const unsigned dim = m * n;
    BitMatrix T(dim);
    // identity blocks on the superdiagonal
    for (unsigned b = 0; b + 1 < n; ++b) {
        for (unsigned r = 0; r < m; ++r) {
            T.set(b * m + r, (b + 1) * m + r, true);
        }
    }
    // bottom block row: C_0 = R + last column v_0, C_i = last column v_i
    const unsigned r0 = (n - 1) * m;
    for (unsigned r = 1; r < m; ++r) {
        T.set(r0 + r, r - 1, true);
    }
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned r = 0; r < m; ++r) {
            if ((spec.taps[i] >> (m - 1 - r)) & 1) {
                T.set(r0 + r, i * m + (m - 1), true);
            }
        }
    }
    return T;
}

MatrixPolynomial::MatrixPolynomial(unsigned block_size, unsigned degree_bound)
    : m_(block_size), n_(degree_bound),
      entries_(static_cast<std::size_t>(block_size) * block_size) {
    if (m_ < 1 || n_ < 1) {
        throw Error("matrix polynomial needs m >= 1 and n >= 1");
    }
}

const Gf2Poly& MatrixPolynomial::entry(unsigned r, unsigned c) const {
    if (r >= m_ || c >= m_) {
        throw Error("matrix polynomial index out of range");
    }
    return entries_[static_cast<std::size_t>(r) * m_ + c];
}

Gf2Poly& MatrixPolynomial::entry(unsigned r, unsigned c) {
    if (r >= m_ || c >= m_) {
        throw Error("matrix polynomial index out of range");
    }
    return entries_[static_cast<std::size_t>(r) * m_ + c];
}

MatrixPolynomial build_matrix_polynomial(const Gf2Poly& f, unsigned m) {
    const int deg = f.degree();
    if (m < 1 || deg < 1 || static_cast<unsigned>(deg) % m != 0) {
        throw Error("word size " + std::to_string(m) +
                    " does not divide deg(f) = " + std::to_string(deg));
    }
    const unsigned n = static_cast<unsigned>(deg) / m;
    MatrixPolynomial M(m, n);
    // coefficient chunks: f_i = sum_{k=in}^{(i+1)n-1} a_k X^{k-in}
    std::vector<Gf2Poly> chunks(m);
    for (unsigned i = 0; i < m; ++i) {
        for (unsigned k = 0; k < n; ++k) {
            if (f.coeff(i * n + k)) {
                chunks[i].set_coeff(k, true);
            }
        }
    }
    const Gf2Poly xn = Gf2Poly::x_pow(n);
    for (unsigned r = 0; r + 1 < m; ++r) {
        M.entry(r, r) = xn;
        M.entry(r + 1, r) = Gf2Poly::one();
        M.entry(r, m - 1) += chunks[r];
    }
    M.entry(m - 1, m - 1) += chunks[m - 1] + xn;  // f_{m-1} + f_m X^n, f_m = 1
    return M;
}

MatrixPolynomial build_matrix_polynomial(const XorshiftSpec& spec) {
    return build_matrix_polynomial(tap_polynomial(spec), spec.m);
}

Gf2Poly det_matrix_polynomial(const MatrixPolynomial& M) {
    const unsigned m = M.block_size();
    const unsigned n = M.degree_bound();
    const Gf2Poly xn = Gf2Poly::x_pow(n);
    // shape check: X^n diagonal, unit subdiagonal, zeros elsewhere off the
    // last column; last-column degrees < n except the bottom entry, which
    // carries the X^n of the leading coefficient.
    for (unsigned r = 0; r < m; ++r) {
        for (unsigned c = 0; c + 1 < m; ++c) {
            const Gf2Poly& e = M.entry(r, c);
            if (r == c) {
                if (e != xn) throw Error("matrix polynomial: diagonal is not X^n");
            } else if (r == c + 1) {
                if (e != Gf2Poly::one())
                    throw Error("matrix polynomial: subdiagonal is not 1");
            } else if (!e.is_zero()) {
                throw Error("matrix polynomial: unexpected nonzero entry");
            }
        }
    }
    for (unsigned r = 0; r + 1 < m; ++r) {
        if (M.entry(r, m - 1).degree() >= static_cast<int>(n)) {
            throw Error("matrix polynomial: last column chunk too large");
        }
    }
    if (M.entry(m - 1, m - 1).degree() != static_cast<int>(n)) {
        throw Error("matrix polynomial: bottom corner must have degree n");
    }

    // nested Horner down the last column: g = e_0 + X^n (e_1 + X^n (...))
    Gf2Poly g = M.entry(m - 1, m - 1);
    for (int r = static_cast<int>(m) - 2; r >= 0; --r) {
        g = M.entry(static_cast<unsigned>(r), m - 1) + (g << n);
    }
    return g;
}

Gf2Poly charpoly_dense(const BitMatrix& T, unsigned max_dim) {
    const unsigned dim = T.dim();
    if (dim > max_dim) {
        throw Error("charpoly oracle bound exceeded: dim " +
                    std::to_string(dim) + " > " + std::to_string(max_dim));
    }
    // dense copy, one byte per entry; dims stay small here
    std::vector<std::uint8_t> H(static_cast<std::size_t>(dim) * dim, 0);
    const auto at = [&H, dim](unsigned r, unsigned c) -> std::uint8_t& {
        return H[static_cast<std::size_t>(r) * dim + c];
    };
    for (unsigned r = 0; r < dim; ++r) {
        for (unsigned c = 0; c < dim; ++c) {
            at(r, c) = T.get(r, c) ? 1 : 0;
        }
    }

    // similarity reduction to upper Hessenberg form
    for (unsigned j = 0; j + 2 < dim; ++j) {
        unsigned piv = 0;
        bool found = false;
        for (unsigned r = j + 1; r < dim; ++r) {
            if (at(r, j)) {
                piv = r;
                found = true;
                break;
            }
        }
        if (!found) {
            continue;
        }
        if (piv != j + 1) {
            for (unsigned c = 0; c < dim; ++c) {
                std::swap(at(piv, c), at(j + 1, c));
            }
            for (unsigned r = 0; r < dim; ++r) {
                std::swap(at(r, piv), at(r, j + 1));
            }
        }
        for (unsigned r = j + 2; r < dim; ++r) {
            if (!at(r, j)) {
                continue;
            }
            for (unsigned c = 0; c < dim; ++c) {
                at(r, c) ^= at(j + 1, c);
            }
            // inverse similarity: column j+1 += column r
            for (unsigned rr = 0; rr < dim; ++rr) {
                at(rr, j + 1) ^= at(rr, r);
            }
        }
    }

    // p_k = (X + H_kk) p_{k-1} + sum_i H_ik (prod of subdiagonals) p_{i-1}
    std::vector<Gf2Poly> p;
    p.reserve(dim + 1);
    p.push_back(Gf2Poly::one());
    for (unsigned k = 1; k <= dim; ++k) {
        Gf2Poly cur = p[k - 1] << 1;
        if (at(k - 1, k - 1)) {
            cur += p[k - 1];
        }
        for (unsigned i = k - 1; i >= 1; --i) {
            if (!at(i, i - 1)) {
                break;
            }
            if (at(i - 1, k - 1)) {
                cur += p[i - 1];
            }
        }
        p.push_back(std::move(cur));
    }
    return p[dim];
}

XorshiftSpec construct_from_primitive(const Gf2Poly& f, unsigned m,
                                      const Factorization& factorization) {
    const int deg = f.degree();
    if (deg < 1 || m < 1 || m > 64 || static_cast<unsigned>(deg) % m != 0) {
        throw Error("word size " + std::to_string(m) +
                    " does not divide deg(f) = " + std::to_string(deg));
    }
    if (factorization.d() != static_cast<unsigned>(deg)) {
        throw Error("factorization is for 2^" +
                    std::to_string(factorization.d()) + " - 1 but deg(f) = " +
                    std::to_string(deg));
    }
    if (!f.coeff(0) || !is_irreducible(f)) {
        throw NotPrimitiveError(PrimitivityFailure::Reducible,
                                "polynomial is reducible over GF(2)");
    }
    if (!detail::has_full_order(f, factorization)) {
        throw NotPrimitiveError(
            PrimitivityFailure::ProperDivisorOrder,
            "polynomial is irreducible but X has order properly dividing 2^" +
                std::to_string(deg) + " - 1");
    }
    return build_tap_vectors(f, m);
}

BitMatrix build_marsaglia_matrix(const TripletSpec& t) {
    if (t.m < 1 || t.n < 1 || t.a < 1 || t.b < 1 || t.c < 1) {
        throw Error("triplet spec needs positive a, b, c, m, n");
    }
    const unsigned m = t.m;
    const unsigned n = t.n;
    BitMatrix T(m * n);
    for (unsigned b = 0; b + 1 < n; ++b) {
        T.add_block(b * m, (b + 1) * m, BitMatrix::identity(m));
    }
    const BitMatrix I = BitMatrix::identity(m);
    const BitMatrix A =
        (I + BitMatrix::left_shift(m, std::min(t.a, m))) *
        (I + BitMatrix::right_shift(m, std::min(t.b, m)));
    const BitMatrix B = I + BitMatrix::right_shift(m, std::min(t.c, m));
    T.add_block((n - 1) * m, 0, A);
    T.add_block((n - 1) * m, (n - 1) * m, B);
    return T;
}

bool check_triplet(const TripletSpec& t, const Factorization& factorization,
                   unsigned max_dim) {
    if (t.m * t.n > max_dim) {
        throw Error("triplet dimension " + std::to_string(t.m * t.n) +
                    " exceeds the charpoly oracle bound " +
                    std::to_string(max_dim) +
                    "; supply a factor table and smaller dim, or use an orbit "
                    "check");
    }
    const Gf2Poly P = charpoly_dense(build_marsaglia_matrix(t), max_dim);
    return is_primitive(P, factorization);
}

XorshiftSpec sample_k_tap(unsigned m, unsigned n, unsigned k,
                          std::mt19937_64& rng,
                          const Factorization& factorization,
                          unsigned max_attempts, unsigned* attempts_out) {
    if (m < 1 || m > 64 || n < 1) {
        throw Error("sample_k_tap needs 1 <= m <= 64 and n >= 1");
    }
    if (k < 2 || k > n + 1) {
        throw Error("tap count k must lie in [2, n+1]; got " +
                    std::to_string(k));
    }
    if (factorization.d() != m * n) {
        throw Error("factorization is for 2^" +
                    std::to_string(factorization.d()) + " - 1 but mn = " +
                    std::to_string(m * n));
    }
    if (max_attempts == 0) {
        max_attempts = 64 * m * n;
    }
    const std::uint64_t mask = word_mask(m);
    for (unsigned attempt = 1; attempt <= max_attempts; ++attempt) {
        // column 0 first, then k-2 distinct random columns in [1, n)
        std::vector<unsigned> columns{0};
        std::vector<bool> used(n, false);
        used[0] = true;
        while (columns.size() < k - 1) {
            const unsigned l = static_cast<unsigned>(rng() % n);
            if (!used[l]) {
                used[l] = true;
                columns.push_back(l);
            }
        }
        Gf2Poly f;
        for (unsigned l : columns) {
            std::uint64_t colbits = 0;  // bit j -> a_{jn+l}
            do {
                colbits = rng() & mask;
                if (l == 0) {
                    colbits |= 1;  // a_0 = 1
                }
            } while (colbits == 0);  // an all-zero column would drop a tap
            for (unsigned j = 0; j < m; ++j) {
                if ((colbits >> j) & 1) {
                    f.set_coeff(j * n + l, true);
                }
            }
        }
        f.set_coeff(m * n, true);  // a_{mn} = 1
        if (is_primitive(f, factorization)) {
            if (attempts_out != nullptr) {
                *attempts_out = attempt;
            }
            return build_tap_vectors(f, m);
        }
    }
    if (attempts_out != nullptr) {
        *attempts_out = max_attempts;
    }
    throw SearchExhaustedError(
        "no primitive " + std::to_string(k) + "-tap generator found for m=" +
            std::to_string(m) + ", n=" + std::to_string(n) + " in " +
            std::to_string(max_attempts) + " attempts",
        max_attempts);
}

// ---- spec file io ----

void write_spec(std::ostream& out, const XorshiftSpec& spec) {
    validate_spec(spec);
    out << "m=" << spec.m << "\n";
    out << "n=" << spec.n << "\n";
    for (unsigned i = 0; i < spec.n; ++i) {
        out << "v" << i << "=hex:";
        std::uint64_t v = spec.taps[i];
        std::string hex;
        do {
            hex.push_back("0123456789abcdef"[v & 0xf]);
            v >>= 4;
        } while (v != 0);
        std::reverse(hex.begin(), hex.end());
        out << hex << "\n";
    }
}

namespace {

std::string strip_ws(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

XorshiftSpec parse_spec(std::istream& in) {
    XorshiftSpec spec;
    bool have_m = false, have_n = false;
    std::vector<bool> have_tap;
    std::string line;
    unsigned lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = strip_ws(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error("spec file line " + std::to_string(lineno) +
                        ": missing '='");
        }
        const std::string key = strip_ws(line.substr(0, eq));
        const std::string value = strip_ws(line.substr(eq + 1));
        const auto parse_uint = [&](const std::string& s) -> unsigned long {
            std::size_t pos = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(s, &pos, 10);
            } catch (const std::exception&) {
                pos = std::string::npos;
            }
            if (pos != s.size()) {
                throw Error("spec file line " + std::to_string(lineno) +
                            ": bad number '" + s + "'");
            }
            return v;
        };
        if (key == "m") {
            spec.m = static_cast<unsigned>(parse_uint(value));
            have_m = true;
        } else if (key == "n") {
            spec.n = static_cast<unsigned>(parse_uint(value));
            have_n = true;
            spec.taps.assign(spec.n, 0);
            have_tap.assign(spec.n, false);
        } else if (key.size() > 1 && key[0] == 'v') {
            if (!have_m || !have_n) {
                throw Error("spec file line " + std::to_string(lineno) +
                            ": tap before m= and n=");
            }
            const unsigned long idx = parse_uint(key.substr(1));
            if (idx >= spec.n) {
                throw Error("spec file line " + std::to_string(lineno) +
                            ": tap index out of range");
            }
            if (value.rfind("hex:", 0) != 0) {
                throw Error("spec file line " + std::to_string(lineno) +
                            ": tap value must be 'hex:<hexstring>'");
            }
            const std::string digits = value.substr(4);
            if (digits.empty() || digits.size() > 16) {
                throw Error("spec file line " + std::to_string(lineno) +
                            ": bad tap hex literal");
            }
            std::uint64_t v = 0;
            for (char ch : digits) {
                int nib = -1;
                if (ch >= '0' && ch <= '9') nib = ch - '0';
                else if (ch >= 'a' && ch <= 'f') nib = ch - 'a' + 10;
                else if (ch >= 'A' && ch <= 'F') nib = ch - 'A' + 10;
                if (nib < 0) {
                    throw Error("spec file line " + std::to_string(lineno) +
                                ": bad hex digit");
                }
                v = (v << 4) | static_cast<unsigned>(nib);
            }
            spec.taps[idx] = v;
            have_tap[idx] = true;
        } else {
            throw Error("spec file line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
        }
    }
    if (!have_m || !have_n) {
        throw Error("spec file is missing m= or n=");
    }
    for (unsigned i = 0; i < spec.n; ++i) {
        if (!have_tap[i]) {
            throw Error("spec file is missing v" + std::to_string(i) + "=");
        }
    }
    validate_spec(spec);
    return spec;
}

XorshiftSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open spec file: " + path);
    }
    return parse_spec(in);
}

}  // namespace xsgen
