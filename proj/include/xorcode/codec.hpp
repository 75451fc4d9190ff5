#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xorcode/gf2.hpp"
#include "xorcode/latin.hpp"

namespace xorcode {

using Bytes = std::vector<std::uint8_t>;
using PacketIndex = std::uint16_t;

// direct: encode with the balanced block incidence matrix B, decode with B^-1.
// balanced_decode: encode with B^-1 so every source packet is rebuilt from
// exactly k coded packets.
enum class Mode { direct, balanced_decode };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct CodingScheme {
    std::size_t n;
    std::size_t k;
    BitMatrix encode_matrix;
    BitMatrix decode_matrix;
    Mode mode;
};

CodingScheme make_scheme(const LatinRectangle& l, Mode mode);

struct SourceBlock {
    std::vector<Bytes> packets;
    std::size_t packet_len = 0;
    std::size_t original_len = 0;
};

// Coded packet as it travels on the wire. `header` is the 1-based support of
// the coding row, strictly increasing.
struct CodedPacket {
    PacketIndex index = 0;
    std::vector<PacketIndex> header;
    Bytes payload;

    friend bool operator==(const CodedPacket&, const CodedPacket&) = default;
};

// out[i] = XOR of inputs[j] over the set bits j of row i of `coefficients`.
// All inputs must have the same length. Parallel over output rows.
std::vector<Bytes> xor_combine(const BitMatrix& coefficients, std::span<const Bytes> inputs);

std::vector<CodedPacket> encode(const CodingScheme& scheme, const SourceBlock& block);

// Header-driven Gauss-Jordan decode. Throws PartialDecodeError when the
// coding vectors do not span GF(2)^n and IntegrityError when packets
// contradict each other. The returned block has original_len = n*packet_len;
// callers holding a manifest truncate it.
SourceBlock decode(std::span<const CodedPacket> packets, std::size_t n);

// 1-based source indexes l with e_l in the span of the packets' coding vectors.
std::vector<std::size_t> decodable_indexes(std::span<const CodedPacket> packets, std::size_t n);

// Coding vector (length n) spelled by a packet header.
BitVector coding_vector(const CodedPacket& packet, std::size_t n);

// Wire format, little-endian: u16 index, u16 h, h x u16 source index,
// u32 payload_len, payload.
Bytes serialize(const CodedPacket& packet);
CodedPacket deserialize(std::span<const std::uint8_t> bytes);
// Parses one packet from the front of `bytes`, storing the bytes consumed.
CodedPacket deserialize_prefix(std::span<const std::uint8_t> bytes, std::size_t& consumed);

SourceBlock split_payload(std::span<const std::uint8_t> data, std::size_t n);
Bytes join_payload(const SourceBlock& block);

// Block manifest: "n k mode original_len" followed by the Latin rectangle.
struct Manifest {
    std::size_t n;
    std::size_t k;
    Mode mode;
    std::size_t original_len;
    LatinRectangle rectangle;
};
std::string to_text(const Manifest& m);
Manifest parse_manifest(std::string_view text);

namespace reference {

// Byte-at-a-time loop over the coefficient bits, single-threaded.
std::vector<Bytes> xor_combine(const BitMatrix& coefficients, std::span<const Bytes> inputs);

}  // namespace reference

}  // namespace xorcode
