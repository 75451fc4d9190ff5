#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xorcode/gf2.hpp"

namespace xorcode {

using Symbol = std::uint16_t;

// k x n array over the symbols 1..n. Construction does not check the Latin
// property so that malformed input can still be represented and reported by
// validate().
class LatinRectangle {
public:
    LatinRectangle(std::size_t rows, std::size_t cols, std::vector<Symbol> cells);
    static LatinRectangle from_rows(const std::vector<std::vector<Symbol>>& rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] Symbol at(std::size_t r, std::size_t c) const { return cells_.at(r * cols_ + c); }
    // Symbols of column j (0-based), ascending.
    [[nodiscard]] std::vector<Symbol> column_set(std::size_t j) const;
    [[nodiscard]] std::vector<Symbol> row(std::size_t r) const;

    friend bool operator==(const LatinRectangle&, const LatinRectangle&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Symbol> cells_;
};

bool validate(const LatinRectangle& l);

inline std::size_t default_mixing_moves(std::size_t n) { return n * n * n; }

// Uniform-in-the-limit Latin square of order n via the Jacobson-Matthews
// +-1 walk, started from the cyclic square. The walk runs in blocks of
// `moves` steps (0 selects default_mixing_moves(n)) and emits the first block
// boundary that lands on a proper square. Deterministic for fixed
// (n, seed, moves).
LatinRectangle jm_generate(std::size_t n, std::uint64_t seed, std::size_t moves = 0);

// First k rows of a square.
LatinRectangle split_upper(const LatinRectangle& square, std::size_t k);

// Row j is the indicator of the symbol set of column j: entry [j][i] is set
// iff symbol i+1 occurs in column j.
BitMatrix block_incidence(const LatinRectangle& l);
// Transpose of block_incidence: rows are symbols, columns are blocks.
BitMatrix symbol_incidence(const LatinRectangle& l);

struct DesignMatrices {
    BitMatrix symbol_incidence;
    BitMatrix block_incidence;
};
DesignMatrices design_matrices(const LatinRectangle& l);

bool is_balanced(const BitMatrix& m, std::size_t k);

// Rows used by the automatic choice: n-1 for even n, n-2 for odd n, and 1
// for n <= 3 where that would leave no odd row count.
std::size_t auto_rows(std::size_t n);

inline constexpr std::size_t kDefaultMaxRetries = 64;

struct NonsingularDesign {
    LatinRectangle rectangle;
    BitMatrix block_incidence;
    std::size_t attempts;
};

// Repeats jm_generate + split_upper until the block incidence matrix is
// nonsingular. Throws InvalidArgument for even k and SearchFailure when
// max_retries attempts all produce singular matrices.
NonsingularDesign find_nonsingular_rectangle(std::size_t n, std::optional<std::size_t> k, std::uint64_t seed,
                                             std::size_t max_retries = kDefaultMaxRetries,
                                             std::size_t moves = 0);

// Text format: "k n" then k lines of n space-separated symbols.
std::string to_text(const LatinRectangle& l);
LatinRectangle parse_rectangle(std::string_view text);

}  // namespace xorcode
