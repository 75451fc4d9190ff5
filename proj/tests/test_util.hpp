#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xorcode/gf2.hpp"
#include "xorcode/latin.hpp"

namespace xorcode::testing {

inline std::string fixture(const std::string& name) {
    std::ifstream in(std::string(XORCODE_DATA_DIR) + "/" + name, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline LatinRectangle square4() { return parse_rectangle(fixture("square4.txt")); }
inline LatinRectangle rect5x12() { return parse_rectangle(fixture("rect5x12.txt")); }

inline BitMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (rng() & 1U) m.set(r, c);
    return m;
}

inline BitVector random_vector(std::size_t n, std::mt19937_64& rng) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng() & 1U) v.set(i);
    return v;
}

// Support of row r as 1-based indexes.
inline std::vector<std::size_t> support1(const BitMatrix& m, std::size_t r) {
    auto s = m.row(r).support();
    for (auto& x : s) ++x;
    return s;
}

}  // namespace xorcode::testing
