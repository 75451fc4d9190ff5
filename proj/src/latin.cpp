#include "xorcode/latin.hpp"

#include <algorithm>
#include <array>
#include <random>

#include "text_reader.hpp"
#include "xorcode/error.hpp"

namespace xorcode {

LatinRectangle::LatinRectangle(std::size_t rows, std::size_t cols, std::vector<Symbol> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
    if (rows_ == 0 || cols_ == 0) throw InvalidArgument("Latin rectangle needs at least one row and column");
    if (cells_.size() != rows_ * cols_) throw InvalidArgument("Latin rectangle cell count does not match k*n");
}

LatinRectangle LatinRectangle::from_rows(const std::vector<std::vector<Symbol>>& rows) {
    if (rows.empty()) throw InvalidArgument("Latin rectangle needs at least one row");
    std::vector<Symbol> cells;
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) throw InvalidArgument("Latin rectangle rows differ in length");
        cells.insert(cells.end(), r.begin(), r.end());
    }
    return LatinRectangle(rows.size(), rows.front().size(), std::move(cells));
}

std::vector<Symbol> LatinRectangle::column_set(std::size_t j) const {
    std::vector<Symbol> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(at(r, j));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Symbol> LatinRectangle::row(std::size_t r) const {
    return {cells_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            cells_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

bool validate(const LatinRectangle& l) {
    const std::size_t n = l.cols();
    if (l.rows() > n) return false;
    std::vector<char> seen(n + 1);
    for (std::size_t r = 0; r < l.rows(); ++r) {
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t c = 0; c < n; ++c) {
            const Symbol s = l.at(r, c);
            if (s < 1 || s > n || seen[s]) return false;
            seen[s] = 1;
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t r = 0; r < l.rows(); ++r) {
            const Symbol s = l.at(r, c);
            if (seen[s]) return false;
            seen[s] = 1;
        }
    }
    return true;
}

namespace {

// Incidence cube of a (possibly improper) Latin square: value[r][c][s] is
// 1 when cell (r, c) holds symbol s, and -1 on the single improper cell.
class IncidenceCube {
public:
    explicit IncidenceCube(std::size_t n) : n_(n), cube_(n * n * n, 0) {
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) at(r, c, (r + c) % n) = 1;
    }

    std::int8_t& at(std::size_t r, std::size_t c, std::size_t s) { return cube_[(r * n_ + c) * n_ + s]; }

    // One +-1 move. Leaves the cube either proper or with one improper cell.
    template <class Rng>
    void step(Rng& rng) {
        std::uniform_int_distribution<std::size_t> pick(0, n_ - 1);
        std::size_t r, c, s;
        std::size_t r2, c2, s2;
        if (!improper_) {
            do {
                r = pick(rng);
                c = pick(rng);
                s = pick(rng);
            } while (at(r, c, s) != 0);
            // In a proper square each line through a zero cell holds exactly
            // one 1.
            r2 = find_row(c, s, rng, false);
            c2 = find_col(r, s, rng, false);
            s2 = find_sym(r, c, rng, false);
        } else {
            r = bad_[0];
            c = bad_[1];
            s = bad_[2];
            r2 = find_row(c, s, rng, true);
            c2 = find_col(r, s, rng, true);
            s2 = find_sym(r, c, rng, true);
        }
        at(r, c, s) += 1;
        at(r, c2, s2) += 1;
        at(r2, c, s2) += 1;
        at(r2, c2, s) += 1;
        at(r, c, s2) -= 1;
        at(r, c2, s) -= 1;
        at(r2, c, s) -= 1;
        at(r2, c2, s2) -= 1;
        improper_ = at(r2, c2, s2) < 0;
        if (improper_) bad_ = {r2, c2, s2};
    }

    [[nodiscard]] bool proper() const noexcept { return !improper_; }

    LatinRectangle to_square() {
        std::vector<Symbol> cells(n_ * n_);
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t c = 0; c < n_; ++c)
                for (std::size_t s = 0; s < n_; ++s)
                    if (at(r, c, s) == 1) cells[r * n_ + c] = static_cast<Symbol>(s + 1);
        return LatinRectangle(n_, n_, std::move(cells));
    }

private:
    // Each finder returns an index along one axis holding a 1. In the
    // improper state there are two candidates and one is chosen uniformly.
    template <class Rng>
    std::size_t choose(std::array<std::size_t, 2> found, std::size_t count, Rng& rng) {
        if (count == 1) return found[0];
        std::bernoulli_distribution coin(0.5);
        return coin(rng) ? found[1] : found[0];
    }

    template <class Rng>
    std::size_t find_row(std::size_t c, std::size_t s, Rng& rng, bool two) {
        std::array<std::size_t, 2> found{};
        std::size_t count = 0;
        for (std::size_t i = 0; i < n_ && count < 2; ++i)
            if (at(i, c, s) == 1) found[count++] = i;
        return choose(found, two ? count : 1, rng);
    }
    template <class Rng>
    std::size_t find_col(std::size_t r, std::size_t s, Rng& rng, bool two) {
        std::array<std::size_t, 2> found{};
        std::size_t count = 0;
        for (std::size_t i = 0; i < n_ && count < 2; ++i)
            if (at(r, i, s) == 1) found[count++] = i;
        return choose(found, two ? count : 1, rng);
    }
    template <class Rng>
    std::size_t find_sym(std::size_t r, std::size_t c, Rng& rng, bool two) {
        std::array<std::size_t, 2> found{};
        std::size_t count = 0;
        for (std::size_t i = 0; i < n_ && count < 2; ++i)
            if (at(r, c, i) == 1) found[count++] = i;
        return choose(found, two ? count : 1, rng);
    }

    std::size_t n_;
    std::vector<std::int8_t> cube_;
    bool improper_ = false;
    std::array<std::size_t, 3> bad_{};
};

}  // namespace

LatinRectangle jm_generate(std::size_t n, std::uint64_t seed, std::size_t moves) {
    if (n == 0) throw InvalidArgument("Latin square order must be at least 1");
    if (n > 0xFFFF) throw InvalidArgument("Latin square order too large");
    if (n == 1) return LatinRectangle(1, 1, {1});
    if (moves == 0) moves = default_mixing_moves(n);
    std::mt19937_64 rng(seed);
    IncidenceCube cube(n);
    // Properness is only inspected at block boundaries. Stopping at the first
    // proper state instead would favour squares that improper states fall
    // back into more often.
    for (;;) {
        for (std::size_t i = 0; i < moves; ++i) cube.step(rng);
        if (cube.proper()) return cube.to_square();
    }
}

LatinRectangle split_upper(const LatinRectangle& square, std::size_t k) {
    if (k < 1 || k > square.rows())
        throw InvalidArgument("split row count " + std::to_string(k) + " outside 1.." +
                              std::to_string(square.rows()));
    std::vector<Symbol> cells;
    cells.reserve(k * square.cols());
    for (std::size_t r = 0; r < k; ++r) {
        const auto row = square.row(r);
        cells.insert(cells.end(), row.begin(), row.end());
    }
    return LatinRectangle(k, square.cols(), std::move(cells));
}

BitMatrix block_incidence(const LatinRectangle& l) {
    if (!validate(l)) throw InvalidArgument("block_incidence: not a valid Latin rectangle");
    const std::size_t n = l.cols();
    BitMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < l.rows(); ++r) m.set(j, l.at(r, j) - 1U);
    return m;
}

BitMatrix symbol_incidence(const LatinRectangle& l) { return block_incidence(l).transpose(); }

DesignMatrices design_matrices(const LatinRectangle& l) {
    auto block = block_incidence(l);
    auto symbol = block.transpose();
    return {std::move(symbol), std::move(block)};
}

bool is_balanced(const BitMatrix& m, std::size_t k) {
    if (!m.square()) throw DimensionError("is_balanced: matrix must be square");
    std::vector<std::size_t> col_weight(m.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (m.row(r).count() != k) return false;
        for (std::size_t c : m.row(r).support()) ++col_weight[c];
    }
    return std::all_of(col_weight.begin(), col_weight.end(), [k](std::size_t w) { return w == k; });
}

std::size_t auto_rows(std::size_t n) {
    if (n <= 3) return 1;
    return n % 2 == 0 ? n - 1 : n - 2;
}

NonsingularDesign find_nonsingular_rectangle(std::size_t n, std::optional<std::size_t> k, std::uint64_t seed,
                                             std::size_t max_retries, std::size_t moves) {
    if (n == 0) throw InvalidArgument("order must be at least 1");
    const std::size_t rows = k.value_or(auto_rows(n));
    if (rows < 1 || rows > n)
        throw InvalidArgument("row count " + std::to_string(rows) + " outside 1.." + std::to_string(n));
    if (rows % 2 == 0)
        throw InvalidArgument("k = " + std::to_string(rows) +
                              " is even; the incidence matrix of an even-row Latin rectangle is always singular "
                              "over GF(2), so k must be odd");
    if (max_retries == 0) throw InvalidArgument("max_retries must be at least 1");

    // Attempt seeds are drawn from one stream so the whole search is a
    // function of `seed`.
    std::mt19937_64 seeds(seed);
    for (std::size_t attempt = 1; attempt <= max_retries; ++attempt) {
        auto upper = split_upper(jm_generate(n, seeds(), moves), rows);
        auto matrix = block_incidence(upper);
        if (determinant(matrix)) return {std::move(upper), std::move(matrix), attempt};
    }
    throw SearchFailure("no nonsingular " + std::to_string(rows) + "x" + std::to_string(n) +
                            " Latin rectangle found in " + std::to_string(max_retries) + " attempts",
                        max_retries);
}

std::string to_text(const LatinRectangle& l) {
    std::string out = std::to_string(l.rows()) + " " + std::to_string(l.cols()) + "\n";
    for (std::size_t r = 0; r < l.rows(); ++r) {
        for (std::size_t c = 0; c < l.cols(); ++c) {
            if (c) out += ' ';
            out += std::to_string(l.at(r, c));
        }
        out += '\n';
    }
    return out;
}

LatinRectangle parse_rectangle(std::string_view text) {
    const auto lines = detail::content_lines(text);
    if (lines.empty()) throw ParseError("empty rectangle text", 0);
    const auto header = detail::tokens(lines[0]);
    if (header.size() != 2) throw ParseError("rectangle header must be 'k n'", lines[0].offset);
    const std::size_t k = detail::to_count(header[0]);
    const std::size_t n = detail::to_count(header[1]);
    if (k == 0 || n == 0 || n > 0xFFFF) throw ParseError("rectangle dimensions out of range", lines[0].offset);
    if (lines.size() != k + 1)
        throw ParseError("expected " + std::to_string(k) + " rectangle rows, found " +
                             std::to_string(lines.size() - 1),
                         lines.back().offset);
    std::vector<Symbol> cells;
    cells.reserve(k * n);
    for (std::size_t r = 0; r < k; ++r) {
        const auto toks = detail::tokens(lines[r + 1]);
        if (toks.size() != n)
            throw ParseError("rectangle row " + std::to_string(r + 1) + " has " + std::to_string(toks.size()) +
                                 " entries, expected " + std::to_string(n),
                             lines[r + 1].offset);
        for (const auto& t : toks) {
            const std::size_t v = detail::to_count(t);
            if (v < 1 || v > n) throw ParseError("symbol out of range 1.." + std::to_string(n), t.offset);
            cells.push_back(static_cast<Symbol>(v));
        }
    }
    return LatinRectangle(k, n, std::move(cells));
}

}  // namespace xorcode
