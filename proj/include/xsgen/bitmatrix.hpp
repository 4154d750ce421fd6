#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace xsgen {

/// Dense square matrix over GF(2), row-major bit packing. Entry (r, c) with
/// 0-based indices; bit c of row r lives at word c/64, bit c%64.
class BitMatrix {
public:
    explicit BitMatrix(unsigned dim);
    static BitMatrix identity(unsigned dim);
    /// R^k: ones on the k-th subdiagonal, so Rx = (0, x_1, ..., x_{m-1}).
    static BitMatrix right_shift(unsigned dim, unsigned k = 1);
    /// L^k = (R^k)^T: ones on the k-th superdiagonal.
    static BitMatrix left_shift(unsigned dim, unsigned k = 1);

    unsigned dim() const { return dim_; }
    bool get(unsigned r, unsigned c) const;
    void set(unsigned r, unsigned c, bool value);

    BitMatrix operator+(const BitMatrix& rhs) const;  // entry-wise XOR
    BitMatrix operator*(const BitMatrix& rhs) const;

    /// XORs `block` into the submatrix with top-left corner (r0, c0).
    void add_block(unsigned r0, unsigned c0, const BitMatrix& block);

    /// Multiplies a bit-packed column vector (bit t at word t/64, bit t%64).
    std::vector<std::uint64_t> mul_vector(
        std::span<const std::uint64_t> v) const;

    bool operator==(const BitMatrix&) const = default;

    /// Rows as '0'/'1' strings, column 1 first (e.g. "0010").
    std::string row_string(unsigned r) const;
    std::string to_string() const;

private:
    std::span<std::uint64_t> row(unsigned r);
    std::span<const std::uint64_t> row(unsigned r) const;

    unsigned dim_ = 0;
    unsigned words_per_row_ = 0;
    std::vector<std::uint64_t> bits_;
};

}  // namespace xsgen
