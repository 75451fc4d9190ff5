#include "xorcode/gf2.hpp"

#include <bit>
#include <utility>

#include "text_reader.hpp"
#include "xorcode/error.hpp"

namespace xorcode {

namespace {

std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

void require_square(const BitMatrix& m, const char* op) {
    if (!m.square())
        throw DimensionError(std::string(op) + ": matrix is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected square");
}

// Forward elimination on a copy. Returns the rank; `rows` ends up in
// row-echelon form with the pivots in the leading rank rows.
std::size_t eliminate(std::vector<BitVector>& rows, std::size_t cols) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && !rows[pivot].get(c)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r)
            if (rows[r].get(c)) rows[r] ^= rows[rank];
        ++rank;
    }
    return rank;
}

}  // namespace

// BitVector

BitVector::BitVector(std::size_t size) : size_(size), words_(word_count(size), 0) {}

BitVector BitVector::unit(std::size_t size, std::size_t index) {
    BitVector v(size);
    v.set(index);
    return v;
}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i);
        else if (bits[i] != '0')
            throw ParseError("bit string contains '" + std::string(1, bits[i]) + "'", i);
    }
    return v;
}

bool BitVector::get(std::size_t i) const {
    if (i >= size_) throw DimensionError("bit index " + std::to_string(i) + " out of range");
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void BitVector::set(std::size_t i, bool value) {
    if (i >= size_) throw DimensionError("bit index " + std::to_string(i) + " out of range");
    const Word mask = Word{1} << (i % kWordBits);
    if (value)
        words_[i / kWordBits] |= mask;
    else
        words_[i / kWordBits] &= ~mask;
}

void BitVector::flip(std::size_t i) {
    if (i >= size_) throw DimensionError("bit index " + std::to_string(i) + " out of range");
    words_[i / kWordBits] ^= Word{1} << (i % kWordBits);
}

std::size_t BitVector::count() const noexcept {
    std::size_t total = 0;
    for (Word w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

bool BitVector::none() const noexcept {
    for (Word w : words_)
        if (w != 0) return false;
    return true;
}

std::size_t BitVector::first_set() const noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w] != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return size_;
}

bool BitVector::dot(const BitVector& other) const {
    if (other.size_ != size_) throw DimensionError("dot: length mismatch");
    Word acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
}

std::vector<std::size_t> BitVector::support() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        Word bits = words_[w];
        while (bits != 0) {
            out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.size_ != size_) throw DimensionError("xor: length mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

// BitMatrix

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be at least 1x1");
    data_.assign(rows, BitVector(cols));
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
}

BitMatrix BitMatrix::from_rows(std::vector<BitVector> rows) {
    if (rows.empty()) throw DimensionError("matrix needs at least one row");
    BitMatrix m(rows.size(), rows.front().size());
    for (const auto& r : rows)
        if (r.size() != m.cols_) throw DimensionError("rows have different lengths");
    m.data_ = std::move(rows);
    return m;
}

BitMatrix BitMatrix::from_strings(const std::vector<std::string>& rows) {
    std::vector<BitVector> vs;
    vs.reserve(rows.size());
    for (const auto& r : rows) vs.push_back(BitVector::from_string(r));
    return from_rows(std::move(vs));
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows());
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t c : data_[r].support()) t.set(c, r);
    return t;
}

BitMatrix BitMatrix::select_rows(std::span<const std::size_t> rows) const {
    std::vector<BitVector> picked;
    picked.reserve(rows.size());
    for (std::size_t r : rows) picked.push_back(data_.at(r));
    return from_rows(std::move(picked));
}

// Algebra

BitVector mat_vec_mul(const BitMatrix& m, const BitVector& x) {
    if (m.cols() != x.size())
        throw DimensionError("mat_vec_mul: matrix has " + std::to_string(m.cols()) + " columns, vector has " +
                             std::to_string(x.size()) + " bits");
    BitVector y(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (m.row(r).dot(x)) y.set(r);
    return y;
}

BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("mat_mul: inner dimensions differ");
    const auto rows = static_cast<std::ptrdiff_t>(a.rows());
    std::vector<BitVector> out(a.rows(), BitVector(b.cols()));
    // Row r of the product is the XOR of the rows of b selected by row r of a.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        BitVector acc(b.cols());
        for (std::size_t k : a.row(static_cast<std::size_t>(r)).support()) acc ^= b.row(k);
        out[static_cast<std::size_t>(r)] = std::move(acc);
    }
    return BitMatrix::from_rows(std::move(out));
}

namespace reference {

BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("mat_mul: inner dimensions differ");
    BitMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            bool sum = false;
            for (std::size_t k = 0; k < a.cols(); ++k) sum ^= a.get(i, k) && b.get(k, j);
            c.set(i, j, sum);
        }
    return c;
}

}  // namespace reference

bool determinant(const BitMatrix& m) {
    require_square(m, "determinant");
    return rank(m) == m.rows();
}

BitMatrix invert(const BitMatrix& m) {
    require_square(m, "invert");
    const std::size_t n = m.rows();
    std::vector<BitVector> left;
    std::vector<BitVector> right;
    left.reserve(n);
    right.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        left.push_back(m.row(i));
        right.push_back(BitVector::unit(n, i));
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && !left[pivot].get(c)) ++pivot;
        if (pivot == n) throw SingularMatrixError("matrix is singular over GF(2)");
        std::swap(left[c], left[pivot]);
        std::swap(right[c], right[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != c && left[r].get(c)) {
                left[r] ^= left[c];
                right[r] ^= right[c];
            }
        }
    }
    return BitMatrix::from_rows(std::move(right));
}

std::size_t rank(const BitMatrix& m) {
    std::vector<BitVector> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
    return eliminate(rows, m.cols());
}

bool in_rowspan(const BitMatrix& rows, const BitVector& target) {
    if (rows.cols() != target.size()) throw DimensionError("in_rowspan: target length differs from row length");
    EchelonBasis basis(rows.cols());
    for (std::size_t r = 0; r < rows.rows(); ++r) basis.insert(rows.row(r));
    return basis.contains(target);
}

// EchelonBasis

EchelonBasis::EchelonBasis(std::size_t width) : width_(width) {}

BitVector EchelonBasis::reduce(BitVector v) const {
    if (v.size() != width_) throw DimensionError("EchelonBasis: vector length differs from basis width");
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (v.get(pivots_[i])) v ^= rows_[i];
    return v;
}

bool EchelonBasis::insert(BitVector v) {
    v = reduce(std::move(v));
    const std::size_t pivot = v.first_set();
    if (pivot == width_) return false;
    rows_.push_back(std::move(v));
    pivots_.push_back(pivot);
    return true;
}

// Text format

std::string to_text(const BitMatrix& m) {
    std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) out += m.row(r).to_string() + "\n";
    return out;
}

BitMatrix parse_matrix(std::string_view text) {
    const auto lines = detail::content_lines(text);
    if (lines.empty()) throw ParseError("empty matrix text", 0);
    const auto header = detail::tokens(lines[0]);
    if (header.size() != 2) throw ParseError("matrix header must be 'rows cols'", lines[0].offset);
    const std::size_t rows = detail::to_count(header[0]);
    const std::size_t cols = detail::to_count(header[1]);
    if (rows == 0 || cols == 0) throw ParseError("matrix dimensions must be positive", lines[0].offset);
    if (lines.size() != rows + 1)
        throw ParseError("expected " + std::to_string(rows) + " matrix rows, found " +
                             std::to_string(lines.size() - 1),
                         lines.back().offset);
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& line = lines[r + 1];
        if (line.text.size() != cols)
            throw ParseError("row " + std::to_string(r + 1) + " has " + std::to_string(line.text.size()) +
                                 " characters, expected " + std::to_string(cols),
                             line.offset);
        for (std::size_t c = 0; c < cols; ++c) {
            const char ch = line.text[c];
            if (ch == '1')
                m.set(r, c);
            else if (ch != '0')
                throw ParseError("matrix cell must be '0' or '1'", line.offset + c);
        }
    }
    return m;
}

}  // namespace xorcode
