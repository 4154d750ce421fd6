#include "xsgen/bitmatrix.hpp"

#include <bit>

#include "xsgen/errors.hpp"

namespace xsgen {

BitMatrix::BitMatrix(unsigned dim)
    : dim_(dim), words_per_row_((dim + 63) / 64),
      bits_(static_cast<std::size_t>(dim) * words_per_row_, 0) {
    if (dim == 0) {
        throw Error("BitMatrix dimension must be positive");
    }
}

BitMatrix BitMatrix::identity(unsigned dim) {
    BitMatrix m(dim);
    for (unsigned i = 0; i < dim; ++i) {
        m.set(i, i, true);
    }
    return m;
}

BitMatrix BitMatrix::right_shift(unsigned dim, unsigned k) {
    BitMatrix m(dim);
    for (unsigned r = k; r < dim; ++r) {
        m.set(r, r - k, true);
    }
    return m;
}

BitMatrix BitMatrix::left_shift(unsigned dim, unsigned k) {
    BitMatrix m(dim);
    for (unsigned r = 0; r + k < dim; ++r) {
        m.set(r, r + k, true);
    }
    return m;
}

std::span<std::uint64_t> BitMatrix::row(unsigned r) {
    return {bits_.data() + static_cast<std::size_t>(r) * words_per_row_,
            words_per_row_};
}

std::span<const std::uint64_t> BitMatrix::row(unsigned r) const {
    return {bits_.data() + static_cast<std::size_t>(r) * words_per_row_,
            words_per_row_};
}

bool BitMatrix::get(unsigned r, unsigned c) const {
    if (r >= dim_ || c >= dim_) {
        throw Error("BitMatrix index out of range");
    }
    return (row(r)[c / 64] >> (c % 64)) & 1;
}

void BitMatrix::set(unsigned r, unsigned c, bool value) {
    if (r >= dim_ || c >= dim_) {
        throw Error("BitMatrix index out of range");
    }
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    if (value) {
        row(r)[c / 64] |= bit;
    } else {
        row(r)[c / 64] &= ~bit;
    }
}

BitMatrix BitMatrix::operator+(const BitMatrix& rhs) const {
    if (dim_ != rhs.dim_) {
        throw Error("BitMatrix dimension mismatch in addition");
    }
    BitMatrix out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        out.bits_[i] ^= rhs.bits_[i];
    }
    return out;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
    if (dim_ != rhs.dim_) {
        throw Error("BitMatrix dimension mismatch in multiplication");
    }
    BitMatrix out(dim_);
    for (unsigned r = 0; r < dim_; ++r) {
        auto lrow = row(r);
        auto orow = out.row(r);
        for (unsigned c = 0; c < dim_; ++c) {
            if ((lrow[c / 64] >> (c % 64)) & 1) {
                auto rrow = rhs.row(c);
                for (unsigned w = 0; w < words_per_row_; ++w) {
                    orow[w] ^= rrow[w];
                }
            }
        }
    }
    return out;
}

void BitMatrix::add_block(unsigned r0, unsigned c0, const BitMatrix& block) {
    if (r0 + block.dim_ > dim_ || c0 + block.dim_ > dim_) {
        throw Error("BitMatrix block placement out of range");
    }
    for (unsigned r = 0; r < block.dim_; ++r) {
        for (unsigned c = 0; c < block.dim_; ++c) {
            if (block.get(r, c)) {
                set(r0 + r, c0 + c, !get(r0 + r, c0 + c));
            }
        }
    }
}

std::vector<std::uint64_t> BitMatrix::mul_vector(
    std::span<const std::uint64_t> v) const {
    if (v.size() != words_per_row_) {
        throw Error("BitMatrix/vector dimension mismatch");
    }
    std::vector<std::uint64_t> out(words_per_row_, 0);
    for (unsigned r = 0; r < dim_; ++r) {
        auto rr = row(r);
        std::uint64_t acc = 0;
        for (unsigned w = 0; w < words_per_row_; ++w) {
            acc ^= rr[w] & v[w];
        }
        if (std::popcount(acc) & 1) {
            out[r / 64] |= std::uint64_t{1} << (r % 64);
        }
    }
    return out;
}

std::string BitMatrix::row_string(unsigned r) const {
    std::string s;
    s.reserve(dim_);
    for (unsigned c = 0; c < dim_; ++c) {
        s.push_back(get(r, c) ? '1' : '0');
    }
    return s;
}

std::string BitMatrix::to_string() const {
    std::string s;
    for (unsigned r = 0; r < dim_; ++r) {
        s += row_string(r);
        s.push_back('\n');
    }
    return s;
}

}  // namespace xsgen
