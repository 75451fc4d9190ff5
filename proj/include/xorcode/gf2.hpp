#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xorcode {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

// Packed bit vector. Bit j lives in word j / 64 at position j % 64; bits past
// size() in the last word are always zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t size);

    static BitVector unit(std::size_t size, std::size_t index);
    // Parses a string of '0'/'1' characters, index 0 first.
    static BitVector from_string(std::string_view bits);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] bool get(std::size_t i) const;
    void set(std::size_t i, bool value = true);
    void flip(std::size_t i);

    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] bool none() const noexcept;
    [[nodiscard]] bool any() const noexcept { return !none(); }
    // Index of the lowest set bit, or size() when none is set.
    [[nodiscard]] std::size_t first_set() const noexcept;
    // Parity of the bitwise AND with `other`.
    [[nodiscard]] bool dot(const BitVector& other) const;
    // 0-based indexes of the set bits, ascending.
    [[nodiscard]] std::vector<std::size_t> support() const;

    BitVector& operator^=(const BitVector& other);

    [[nodiscard]] std::span<const Word> words() const noexcept { return words_; }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    std::size_t size_ = 0;
    std::vector<Word> words_;
};

// Dense GF(2) matrix stored as one BitVector per row.
class BitMatrix {
public:
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);
    static BitMatrix from_rows(std::vector<BitVector> rows);
    // Convenience for fixtures: each string is one row of '0'/'1'.
    static BitMatrix from_strings(const std::vector<std::string>& rows);

    [[nodiscard]] std::size_t rows() const noexcept { return data_.size(); }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows() == cols_; }

    [[nodiscard]] bool get(std::size_t r, std::size_t c) const { return data_.at(r).get(c); }
    void set(std::size_t r, std::size_t c, bool value = true) { data_.at(r).set(c, value); }
    [[nodiscard]] const BitVector& row(std::size_t r) const { return data_.at(r); }

    [[nodiscard]] BitMatrix transpose() const;
    // Submatrix made of the listed rows, in the listed order.
    [[nodiscard]] BitMatrix select_rows(std::span<const std::size_t> rows) const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t cols_;
    std::vector<BitVector> data_;
};

BitVector mat_vec_mul(const BitMatrix& m, const BitVector& x);

// Row-parallel product (OpenMP when available).
BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b);

bool determinant(const BitMatrix& m);
BitMatrix invert(const BitMatrix& m);
std::size_t rank(const BitMatrix& m);
bool in_rowspan(const BitMatrix& rows, const BitVector& target);

// Incremental row-echelon basis. Each stored row has a distinct pivot (its
// lowest set bit) and is reduced against all earlier rows.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t width);

    // Returns true if `v` was independent of the basis and has been added.
    bool insert(BitVector v);
    [[nodiscard]] BitVector reduce(BitVector v) const;
    [[nodiscard]] bool contains(const BitVector& v) const { return reduce(v).none(); }
    [[nodiscard]] std::size_t rank() const noexcept { return rows_.size(); }
    [[nodiscard]] std::size_t width() const noexcept { return width_; }

private:
    std::size_t width_;
    std::vector<BitVector> rows_;
    std::vector<std::size_t> pivots_;
};

// Matrix text format: "rows cols" followed by one line of '0'/'1' per row.
std::string to_text(const BitMatrix& m);
BitMatrix parse_matrix(std::string_view text);

namespace reference {

// Straightforward triple loop, kept as the oracle for the parallel kernel.
BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b);

}  // namespace reference

}  // namespace xorcode
