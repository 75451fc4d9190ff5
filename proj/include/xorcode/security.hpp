#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "xorcode/codec.hpp"
#include "xorcode/latin.hpp"

namespace xorcode {

// Coded-packet indexes routed over each edge-disjoint path.
struct PathPartition {
    std::vector<std::vector<PacketIndex>> sets;

    [[nodiscard]] std::size_t paths() const noexcept { return sets.size(); }
    [[nodiscard]] std::size_t total() const noexcept;
};

// Throws InvalidArgument unless the sets are nonempty, pairwise disjoint,
// equally sized and cover 1..n exactly.
void check_partition(const PathPartition& part, std::size_t n);

// Every column's symbol set meets every path set.
bool check_condition(const LatinRectangle& l, const PathPartition& part);

struct TapResult {
    std::size_t min_paths = 0;
    std::vector<std::size_t> witness_paths;  // 1-based path numbers
    std::vector<std::size_t> exposed;        // 1-based source indexes the witness decodes
};

// Linear eavesdropper: taps whole paths, knows every header, and may combine
// tapped packets arbitrarily over GF(2). Subsets are tried by increasing size,
// lexicographically within a size; the first exposing subset is the witness.
// Subsets of one size are examined in parallel.
TapResult min_eavesdrop_paths(const CodingScheme& scheme, const PathPartition& part);

struct EavesdropReport {
    bool condition_holds = false;
    std::size_t maxflow = 0;
    TapResult tap;
    // Set when the scheme encodes with the inverse incidence matrix and the
    // column condition disagrees with (min_paths == maxflow).
    bool discrepancy = false;
};

EavesdropReport audit(const LatinRectangle& l, const CodingScheme& scheme, const PathPartition& part);

// Human summary line followed by
// "condition=<bool> min_paths=<k> witness_paths=<list> exposed=<list>".
std::string to_text(const EavesdropReport& report);

namespace reference {

TapResult min_eavesdrop_paths(const CodingScheme& scheme, const PathPartition& part);

}  // namespace reference

}  // namespace xorcode
