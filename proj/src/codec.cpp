#include "xorcode/codec.hpp"

#include <algorithm>
#include <cstring>
#include <map>

#include "text_reader.hpp"
#include "xorcode/error.hpp"

namespace xorcode {

std::string_view to_string(Mode mode) { return mode == Mode::direct ? "direct" : "balanced_decode"; }

Mode parse_mode(std::string_view text) {
    if (text == "direct") return Mode::direct;
    if (text == "balanced_decode" || text == "balanced") return Mode::balanced_decode;
    throw InvalidArgument("unknown coding mode '" + std::string(text) + "' (expected direct or balanced_decode)");
}

CodingScheme make_scheme(const LatinRectangle& l, Mode mode) {
    auto balanced = block_incidence(l);
    if (!determinant(balanced)) {
        if (l.rows() % 2 == 0)
            throw SingularMatrixError("incidence matrix of the " + std::to_string(l.rows()) + "x" +
                                      std::to_string(l.cols()) +
                                      " rectangle is singular: k is even, and even-row rectangles never give a "
                                      "nonsingular GF(2) incidence matrix");
        throw SingularMatrixError("incidence matrix of the " + std::to_string(l.rows()) + "x" +
                                  std::to_string(l.cols()) + " rectangle is singular over GF(2)");
    }
    auto inverse = invert(balanced);
    if (mode == Mode::direct) return {l.cols(), l.rows(), std::move(balanced), std::move(inverse), mode};
    return {l.cols(), l.rows(), std::move(inverse), std::move(balanced), mode};
}

namespace {

void require_equal_lengths(std::span<const Bytes> inputs, const char* op) {
    for (const auto& in : inputs)
        if (in.size() != inputs.front().size())
            throw InvalidArgument(std::string(op) + ": packets differ in length");
}

void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t len) {
    std::size_t i = 0;
    for (; i + sizeof(Word) <= len; i += sizeof(Word)) {
        Word a, b;
        std::memcpy(&a, dst + i, sizeof(Word));
        std::memcpy(&b, src + i, sizeof(Word));
        a ^= b;
        std::memcpy(dst + i, &a, sizeof(Word));
    }
    for (; i < len; ++i) dst[i] ^= src[i];
}

std::vector<PacketIndex> one_based(const std::vector<std::size_t>& support) {
    std::vector<PacketIndex> out;
    out.reserve(support.size());
    for (std::size_t s : support) out.push_back(static_cast<PacketIndex>(s + 1));
    return out;
}

void check_header(const CodedPacket& p, std::size_t n) {
    if (p.header.empty()) throw InvalidArgument("coded packet " + std::to_string(p.index) + " has an empty header");
    for (std::size_t i = 0; i < p.header.size(); ++i) {
        if (p.header[i] < 1 || p.header[i] > n)
            throw InvalidArgument("coded packet " + std::to_string(p.index) + " references source index " +
                                  std::to_string(p.header[i]) + " outside 1.." + std::to_string(n));
        if (i > 0 && p.header[i] <= p.header[i - 1])
            throw InvalidArgument("coded packet " + std::to_string(p.index) + " header is not strictly increasing");
    }
}

}  // namespace

std::vector<Bytes> xor_combine(const BitMatrix& coefficients, std::span<const Bytes> inputs) {
    if (coefficients.cols() != inputs.size()) throw DimensionError("xor_combine: coefficient width differs from input count");
    require_equal_lengths(inputs, "xor_combine");
    const std::size_t len = inputs.empty() ? 0 : inputs.front().size();
    const auto rows = static_cast<std::ptrdiff_t>(coefficients.rows());
    std::vector<Bytes> out(coefficients.rows(), Bytes(len, 0));
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        auto& dst = out[static_cast<std::size_t>(r)];
        for (std::size_t j : coefficients.row(static_cast<std::size_t>(r)).support())
            xor_into(dst.data(), inputs[j].data(), len);
    }
    return out;
}

namespace reference {

std::vector<Bytes> xor_combine(const BitMatrix& coefficients, std::span<const Bytes> inputs) {
    if (coefficients.cols() != inputs.size()) throw DimensionError("xor_combine: coefficient width differs from input count");
    require_equal_lengths(inputs, "xor_combine");
    const std::size_t len = inputs.empty() ? 0 : inputs.front().size();
    std::vector<Bytes> out(coefficients.rows(), Bytes(len, 0));
    for (std::size_t r = 0; r < coefficients.rows(); ++r)
        for (std::size_t j = 0; j < coefficients.cols(); ++j)
            if (coefficients.get(r, j))
                for (std::size_t b = 0; b < len; ++b) out[r][b] ^= inputs[j][b];
    return out;
}

}  // namespace reference

std::vector<CodedPacket> encode(const CodingScheme& scheme, const SourceBlock& block) {
    if (block.packets.size() != scheme.n)
        throw DimensionError("encode: block has " + std::to_string(block.packets.size()) + " packets, scheme expects " +
                             std::to_string(scheme.n));
    for (const auto& p : block.packets)
        if (p.size() != block.packet_len) throw InvalidArgument("encode: source packets must all have packet_len bytes");
    auto payloads = xor_combine(scheme.encode_matrix, block.packets);
    std::vector<CodedPacket> out;
    out.reserve(scheme.n);
    for (std::size_t i = 0; i < scheme.n; ++i)
        out.push_back({static_cast<PacketIndex>(i + 1), one_based(scheme.encode_matrix.row(i).support()),
                       std::move(payloads[i])});
    return out;
}

BitVector coding_vector(const CodedPacket& packet, std::size_t n) {
    check_header(packet, n);
    BitVector v(n);
    for (PacketIndex s : packet.header) v.set(s - 1U);
    return v;
}

std::vector<std::size_t> decodable_indexes(std::span<const CodedPacket> packets, std::size_t n) {
    if (n == 0) return {};
    EchelonBasis basis(n);
    for (const auto& p : packets) basis.insert(coding_vector(p, n));
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < n; ++l)
        if (basis.contains(BitVector::unit(n, l))) out.push_back(l + 1);
    return out;
}

SourceBlock decode(std::span<const CodedPacket> packets, std::size_t n) {
    if (n == 0) throw InvalidArgument("decode: n must be at least 1");
    if (packets.empty()) throw PartialDecodeError("decode: no packets received", {});

    // Collapse exact duplicates; the same index with different content is a
    // corrupted or forged packet.
    std::map<PacketIndex, const CodedPacket*> by_index;
    for (const auto& p : packets) {
        auto [it, fresh] = by_index.emplace(p.index, &p);
        if (!fresh && !(*it->second == p))
            throw IntegrityError("decode: two different packets carry index " + std::to_string(p.index));
    }
    const std::size_t len = by_index.begin()->second->payload.size();
    for (const auto& [idx, p] : by_index)
        if (p->payload.size() != len) throw IntegrityError("decode: coded packets differ in payload length");

    EchelonBasis basis(n);
    std::vector<BitVector> chosen_vectors;
    std::vector<Bytes> chosen_payloads;
    std::vector<const CodedPacket*> dependent;
    for (const auto& [idx, p] : by_index) {
        auto v = coding_vector(*p, n);
        if (basis.insert(v)) {
            chosen_vectors.push_back(std::move(v));
            chosen_payloads.push_back(p->payload);
        } else {
            dependent.push_back(p);
        }
    }
    if (basis.rank() < n) {
        auto recoverable = decodable_indexes(packets, n);
        std::string list;
        for (std::size_t l : recoverable) list += (list.empty() ? "" : ",") + std::to_string(l);
        throw PartialDecodeError("decode: coding vectors have rank " + std::to_string(basis.rank()) + " < " +
                                     std::to_string(n) + "; recoverable source indexes: {" + list + "}",
                                 std::move(recoverable));
    }

    // The chosen coding vectors form an invertible A with c = A x.
    const auto inverse = invert(BitMatrix::from_rows(chosen_vectors));
    SourceBlock block;
    block.packets = xor_combine(inverse, chosen_payloads);
    block.packet_len = len;
    block.original_len = n * len;

    if (!dependent.empty()) {
        // Each surplus packet must equal the combination of the chosen ones
        // that spells its coding vector: w = d * A^-1.
        BitMatrix weights(dependent.size(), n);
        for (std::size_t i = 0; i < dependent.size(); ++i) {
            BitVector w(n);
            for (std::size_t l : coding_vector(*dependent[i], n).support()) w ^= inverse.row(l);
            for (std::size_t j : w.support()) weights.set(i, j);
        }
        const auto expected = xor_combine(weights, chosen_payloads);
        for (std::size_t i = 0; i < dependent.size(); ++i)
            if (expected[i] != dependent[i]->payload)
                throw IntegrityError("decode: packet " + std::to_string(dependent[i]->index) +
                                     " is inconsistent with the other received packets");
    }
    return block;
}

// Wire format

namespace {

void put_u16(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(Bytes& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

class Cursor {
public:
    explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint16_t u16(const char* field) {
        need(2, field);
        auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32(const char* field) {
        need(4, field);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    Bytes take(std::size_t len, const char* field) {
        need(len, field);
        Bytes out(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
        pos_ += len;
        return out;
    }
    [[nodiscard]] std::size_t pos() const noexcept { return pos_; }

private:
    void need(std::size_t len, const char* field) const {
        if (bytes_.size() - pos_ < len) throw ParseError(std::string("truncated packet while reading ") + field, pos_);
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

Bytes serialize(const CodedPacket& packet) {
    if (packet.header.empty() || packet.header.size() > 0xFFFF) throw InvalidArgument("serialize: bad header size");
    if (packet.payload.size() > 0xFFFFFFFFULL) throw InvalidArgument("serialize: payload too large");
    Bytes out;
    out.reserve(8 + 2 * packet.header.size() + packet.payload.size());
    put_u16(out, packet.index);
    put_u16(out, static_cast<std::uint16_t>(packet.header.size()));
    for (PacketIndex s : packet.header) put_u16(out, s);
    put_u32(out, static_cast<std::uint32_t>(packet.payload.size()));
    out.insert(out.end(), packet.payload.begin(), packet.payload.end());
    return out;
}

CodedPacket deserialize_prefix(std::span<const std::uint8_t> bytes, std::size_t& consumed) {
    Cursor in(bytes);
    CodedPacket p;
    p.index = in.u16("packet index");
    if (p.index == 0) throw ParseError("packet index must be at least 1", 0);
    const std::uint16_t count = in.u16("header count");
    if (count == 0) throw ParseError("header must list at least one source index", 2);
    p.header.reserve(count);
    for (std::uint16_t i = 0; i < count; ++i) {
        const std::size_t at = in.pos();
        const PacketIndex s = in.u16("header index");
        if (s == 0) throw ParseError("header source index must be at least 1", at);
        if (!p.header.empty() && s <= p.header.back())
            throw ParseError("header source indexes must be strictly increasing", at);
        p.header.push_back(s);
    }
    const std::uint32_t len = in.u32("payload length");
    p.payload = in.take(len, "payload");
    consumed = in.pos();
    return p;
}

CodedPacket deserialize(std::span<const std::uint8_t> bytes) {
    std::size_t consumed = 0;
    auto p = deserialize_prefix(bytes, consumed);
    if (consumed != bytes.size()) throw ParseError("trailing bytes after packet", consumed);
    return p;
}

SourceBlock split_payload(std::span<const std::uint8_t> data, std::size_t n) {
    if (n == 0) throw InvalidArgument("split_payload: n must be at least 1");
    if (data.empty()) throw InvalidArgument("split_payload: input is empty");
    SourceBlock block;
    block.original_len = data.size();
    block.packet_len = (data.size() + n - 1) / n;
    block.packets.assign(n, Bytes(block.packet_len, 0));
    for (std::size_t i = 0; i < data.size(); ++i) block.packets[i / block.packet_len][i % block.packet_len] = data[i];
    return block;
}

Bytes join_payload(const SourceBlock& block) {
    Bytes out;
    out.reserve(block.packets.size() * block.packet_len);
    for (const auto& p : block.packets) out.insert(out.end(), p.begin(), p.end());
    if (block.original_len > out.size()) throw InvalidArgument("join_payload: original_len exceeds block size");
    out.resize(block.original_len);
    return out;
}

// Manifest

std::string to_text(const Manifest& m) {
    return std::to_string(m.n) + " " + std::to_string(m.k) + " " + std::string(to_string(m.mode)) + " " +
           std::to_string(m.original_len) + "\n" + to_text(m.rectangle);
}

Manifest parse_manifest(std::string_view text) {
    const auto lines = detail::content_lines(text);
    if (lines.empty()) throw ParseError("empty manifest", 0);
    const auto toks = detail::tokens(lines[0]);
    if (toks.size() != 4) throw ParseError("manifest header must be 'n k mode original_len'", lines[0].offset);
    const std::size_t n = detail::to_count(toks[0]);
    const std::size_t k = detail::to_count(toks[1]);
    Mode mode;
    try {
        mode = parse_mode(toks[2].text);
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), toks[2].offset);
    }
    const std::size_t original_len = detail::to_count(toks[3]);
    const std::size_t rest = lines.size() > 1 ? lines[1].offset : text.size();
    auto rectangle = parse_rectangle(text.substr(rest));
    if (rectangle.rows() != k || rectangle.cols() != n)
        throw ParseError("manifest dimensions disagree with the embedded rectangle", lines[0].offset);
    return {n, k, mode, original_len, std::move(rectangle)};
}

}  // namespace xorcode
