#include "xorcode/security.hpp"

#include <algorithm>
#include <limits>

#include "xorcode/error.hpp"

namespace xorcode {

std::size_t PathPartition::total() const noexcept {
    std::size_t t = 0;
    for (const auto& s : sets) t += s.size();
    return t;
}

void check_partition(const PathPartition& part, std::size_t n) {
    if (part.sets.empty()) throw InvalidArgument("partition has no paths");
    std::vector<char> seen(n + 1, 0);
    for (std::size_t i = 0; i < part.sets.size(); ++i) {
        const auto& set = part.sets[i];
        if (set.empty()) throw InvalidArgument("path " + std::to_string(i + 1) + " carries no packets");
        if (set.size() != part.sets.front().size())
            throw InvalidArgument("paths carry different numbers of packets");
        for (PacketIndex x : set) {
            if (x < 1 || x > n) throw InvalidArgument("packet index " + std::to_string(x) + " outside 1.." + std::to_string(n));
            if (seen[x]) throw InvalidArgument("packet " + std::to_string(x) + " appears on more than one path");
            seen[x] = 1;
        }
    }
    for (std::size_t x = 1; x <= n; ++x)
        if (!seen[x]) throw InvalidArgument("packet " + std::to_string(x) + " is not routed");
}

bool check_condition(const LatinRectangle& l, const PathPartition& part) {
    const std::size_t n = l.cols();
    check_partition(part, n);
    std::vector<std::size_t> path_of(n + 1);
    for (std::size_t i = 0; i < part.sets.size(); ++i)
        for (PacketIndex x : part.sets[i]) path_of[x] = i;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<char> hit(part.sets.size(), 0);
        for (std::size_t r = 0; r < l.rows(); ++r) hit[path_of[l.at(r, j)]] = 1;
        if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return false;
    }
    return true;
}

namespace {

// All r-subsets of {0..m-1} in lexicographic order.
std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t m, std::size_t r) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> pick(r);
    for (std::size_t i = 0; i < r; ++i) pick[i] = i;
    for (;;) {
        out.push_back(pick);
        std::size_t i = r;
        while (i > 0 && pick[i - 1] == m - r + i - 1) --i;
        if (i == 0) return out;
        ++pick[i - 1];
        for (std::size_t j = i; j < r; ++j) pick[j] = pick[j - 1] + 1;
    }
}

// Source indexes exposed by tapping the given paths.
std::vector<std::size_t> exposed_by(const CodingScheme& scheme, const PathPartition& part,
                                    const std::vector<std::size_t>& tapped) {
    EchelonBasis basis(scheme.n);
    for (std::size_t p : tapped)
        for (PacketIndex x : part.sets[p]) basis.insert(scheme.encode_matrix.row(x - 1U));
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < scheme.n; ++l)
        if (basis.contains(BitVector::unit(scheme.n, l))) out.push_back(l + 1);
    return out;
}

TapResult make_result(const std::vector<std::size_t>& subset, std::vector<std::size_t> exposed) {
    TapResult r;
    r.min_paths = subset.size();
    for (std::size_t p : subset) r.witness_paths.push_back(p + 1);
    r.exposed = std::move(exposed);
    return r;
}

}  // namespace

TapResult min_eavesdrop_paths(const CodingScheme& scheme, const PathPartition& part) {
    check_partition(part, scheme.n);
    const std::size_t m = part.paths();
    for (std::size_t size = 1; size <= m; ++size) {
        const auto subsets = subsets_of_size(m, size);
        const auto count = static_cast<std::ptrdiff_t>(subsets.size());
        // Lowest lexicographic rank among exposing subsets, so the witness
        // does not depend on the thread count.
        std::size_t best = std::numeric_limits<std::size_t>::max();
#pragma omp parallel for schedule(dynamic) reduction(min : best)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            if (idx < best && !exposed_by(scheme, part, subsets[idx]).empty()) best = std::min(best, idx);
        }
        if (best != std::numeric_limits<std::size_t>::max())
            return make_result(subsets[best], exposed_by(scheme, part, subsets[best]));
    }
    // Unreachable for a nonsingular scheme: all paths together carry every
    // coded packet.
    throw Error("min_eavesdrop_paths: even all paths together expose nothing; the scheme is singular");
}

namespace reference {

TapResult min_eavesdrop_paths(const CodingScheme& scheme, const PathPartition& part) {
    check_partition(part, scheme.n);
    const std::size_t m = part.paths();
    for (std::size_t size = 1; size <= m; ++size)
        for (const auto& subset : subsets_of_size(m, size)) {
            auto exposed = exposed_by(scheme, part, subset);
            if (!exposed.empty()) return make_result(subset, std::move(exposed));
        }
    throw Error("min_eavesdrop_paths: even all paths together expose nothing; the scheme is singular");
}

}  // namespace reference

EavesdropReport audit(const LatinRectangle& l, const CodingScheme& scheme, const PathPartition& part) {
    if (l.cols() != scheme.n) throw InvalidArgument("audit: rectangle and scheme disagree on n");
    EavesdropReport report;
    report.condition_holds = check_condition(l, part);
    report.maxflow = part.paths();
    report.tap = min_eavesdrop_paths(scheme, part);
    report.discrepancy =
        scheme.mode == Mode::balanced_decode && report.condition_holds != (report.tap.min_paths == report.maxflow);
    return report;
}

namespace {

std::string join(const std::vector<std::size_t>& xs) {
    std::string out;
    for (auto x : xs) out += (out.empty() ? "" : ",") + std::to_string(x);
    return out;
}

}  // namespace

std::string to_text(const EavesdropReport& report) {
    std::string out = "column condition " + std::string(report.condition_holds ? "holds" : "violated") +
                      "; an eavesdropper needs " + std::to_string(report.tap.min_paths) + " of " +
                      std::to_string(report.maxflow) + " paths (paths {" + join(report.tap.witness_paths) +
                      "} expose source packets {" + join(report.tap.exposed) + "})";
    if (report.discrepancy) out += "; DISCREPANCY: condition and brute-force bound disagree";
    out += "\n";
    out += std::string("condition=") + (report.condition_holds ? "true" : "false") +
           " min_paths=" + std::to_string(report.tap.min_paths) + " witness_paths=" + join(report.tap.witness_paths) +
           " exposed=" + join(report.tap.exposed) + "\n";
    return out;
}

}  // namespace xorcode
