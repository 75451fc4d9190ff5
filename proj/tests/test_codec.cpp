#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "test_util.hpp"
#include "xorcode/codec.hpp"
#include "xorcode/error.hpp"

using namespace xorcode;
using namespace xorcode::testing;

namespace {

SourceBlock random_block(std::size_t n, std::size_t len, std::mt19937_64& rng) {
    SourceBlock b;
    b.packet_len = len;
    b.original_len = n * len;
    b.packets.assign(n, Bytes(len));
    for (auto& p : b.packets)
        for (auto& x : p) x = static_cast<std::uint8_t>(rng());
    return b;
}

Bytes xor_of(const SourceBlock& b, std::initializer_list<std::size_t> one_based) {
    Bytes acc(b.packet_len, 0);
    for (std::size_t i : one_based)
        for (std::size_t j = 0; j < b.packet_len; ++j) acc[j] ^= b.packets[i - 1][j];
    return acc;
}

Bytes xor_of(const std::vector<CodedPacket>& c, std::initializer_list<std::size_t> one_based) {
    Bytes acc(c.front().payload.size(), 0);
    for (std::size_t i : one_based)
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] ^= c[i - 1].payload[j];
    return acc;
}

CodingScheme square4_scheme() { return make_scheme(split_upper(square4(), 3), Mode::direct); }

}  // namespace

TEST_CASE("make_scheme") {
    SUBCASE("direct mode on the 3x4 rectangle encodes with M") {
        const auto s = square4_scheme();
        CHECK(s.encode_matrix == BitMatrix::from_strings({"1110", "0111", "1101", "1011"}));
        CHECK(mat_mul(s.encode_matrix, s.decode_matrix) == BitMatrix::identity(4));
        CHECK(s.k == 3);
        CHECK(s.n == 4);
    }
    SUBCASE("balanced_decode mode swaps the roles") {
        const auto s = make_scheme(rect5x12(), Mode::balanced_decode);
        CHECK(support1(s.decode_matrix, 0) == std::vector<std::size_t>{2, 3, 4, 6, 9});
        CHECK(support1(s.encode_matrix, 0) == std::vector<std::size_t>{2, 5, 10, 11, 12});
        CHECK(s.encode_matrix == invert(s.decode_matrix));
        CHECK(mat_mul(s.encode_matrix, s.decode_matrix) == BitMatrix::identity(12));
    }
    SUBCASE("1x1") {
        const auto l = LatinRectangle::from_rows({{1}});
        for (Mode m : {Mode::direct, Mode::balanced_decode}) {
            const auto s = make_scheme(l, m);
            CHECK(s.encode_matrix == BitMatrix::identity(1));
            CHECK(s.decode_matrix == BitMatrix::identity(1));
        }
    }
    SUBCASE("even k is reported as the cause") {
        try {
            make_scheme(split_upper(square4(), 2), Mode::direct);
            FAIL("expected SingularMatrixError");
        } catch (const SingularMatrixError& e) {
            CHECK(std::string(e.what()).find("even") != std::string::npos);
        }
    }
    CHECK(parse_mode("balanced") == Mode::balanced_decode);
    CHECK_THROWS_AS(parse_mode("fast"), InvalidArgument);
}

TEST_CASE("encode") {
    std::mt19937_64 rng(1);
    SUBCASE("4-packet example") {
        const auto block = random_block(4, 32, rng);
        const auto c = encode(square4_scheme(), block);
        REQUIRE(c.size() == 4);
        CHECK(c[0].payload == xor_of(block, {1, 2, 3}));
        CHECK(c[1].payload == xor_of(block, {2, 3, 4}));
        CHECK(c[2].payload == xor_of(block, {1, 2, 4}));
        CHECK(c[3].payload == xor_of(block, {1, 3, 4}));
        CHECK(c[0].header == std::vector<PacketIndex>{1, 2, 3});
        CHECK(c[1].header == std::vector<PacketIndex>{2, 3, 4});
        CHECK(c[2].header == std::vector<PacketIndex>{1, 2, 4});
        CHECK(c[3].header == std::vector<PacketIndex>{1, 3, 4});
        for (std::size_t i = 0; i < 4; ++i) CHECK(c[i].index == i + 1);
    }
    SUBCASE("zero block") {
        SourceBlock zero{std::vector<Bytes>(4, Bytes(5, 0)), 5, 20};
        for (const auto& p : encode(square4_scheme(), zero)) {
            CHECK(std::all_of(p.payload.begin(), p.payload.end(), [](auto b) { return b == 0; }));
            CHECK(p.header.size() == 3);
        }
    }
    SUBCASE("12-packet rectangle, direct") {
        const auto block = random_block(12, 9, rng);
        const auto c = encode(make_scheme(rect5x12(), Mode::direct), block);
        CHECK(c[0].payload == xor_of(block, {2, 3, 4, 6, 9}));
    }
    SUBCASE("header fidelity") {
        const auto s = make_scheme(rect5x12(), Mode::balanced_decode);
        const auto c = encode(s, random_block(12, 3, rng));
        for (std::size_t i = 0; i < 12; ++i) {
            std::vector<std::size_t> h(c[i].header.begin(), c[i].header.end());
            CHECK(h == support1(s.encode_matrix, i));
        }
    }
    SUBCASE("errors") {
        auto block = random_block(4, 4, rng);
        CHECK_THROWS_AS(encode(make_scheme(rect5x12(), Mode::direct), block), DimensionError);
        block.packets[2].push_back(0);
        CHECK_THROWS_AS(encode(square4_scheme(), block), InvalidArgument);
    }
}

TEST_CASE("xor_combine matches the reference kernel") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t rows = 1 + rng() % 20, cols = 1 + rng() % 20, len = rng() % 200;
        const auto coeff = random_matrix(rows, cols, rng);
        std::vector<Bytes> in(cols, Bytes(len));
        for (auto& p : in)
            for (auto& b : p) b = static_cast<std::uint8_t>(rng());
        CHECK(xor_combine(coeff, in) == reference::xor_combine(coeff, in));
    }
}

TEST_CASE("decode") {
    std::mt19937_64 rng(3);
    SUBCASE("4-packet round trip") {
        const auto block = random_block(4, 17, rng);
        const auto c = encode(square4_scheme(), block);
        const auto out = decode(c, 4);
        CHECK(out.packets == block.packets);
        CHECK(out.packet_len == 17);
    }
    SUBCASE("12-packet rectangle: decode rows follow the matrix used for decoding") {
        const auto block = random_block(12, 8, rng);
        const auto direct = encode(make_scheme(rect5x12(), Mode::direct), block);
        CHECK(xor_of(direct, {2, 5, 10, 11, 12}) == block.packets[0]);
        CHECK(decode(direct, 12).packets == block.packets);
        const auto balanced = encode(make_scheme(rect5x12(), Mode::balanced_decode), block);
        CHECK(xor_of(balanced, {2, 3, 4, 6, 9}) == block.packets[0]);
        CHECK(decode(balanced, 12).packets == block.packets);
    }
    SUBCASE("order of arrival does not matter") {
        const auto block = random_block(12, 8, rng);
        auto c = encode(make_scheme(rect5x12(), Mode::balanced_decode), block);
        std::shuffle(c.begin(), c.end(), rng);
        CHECK(decode(c, 12).packets == block.packets);
    }
    SUBCASE("missing packets give a partial-decode error") {
        const auto block = random_block(12, 8, rng);
        auto c = encode(make_scheme(rect5x12(), Mode::direct), block);
        c.erase(c.begin() + 4);
        try {
            decode(c, 12);
            FAIL("expected PartialDecodeError");
        } catch (const PartialDecodeError& e) {
            CHECK(e.recoverable() == decodable_indexes(c, 12));
            CHECK(e.recoverable().size() < 12);
        }
        CHECK_THROWS_AS(decode(std::vector<CodedPacket>{}, 4), PartialDecodeError);
    }
    SUBCASE("duplicates") {
        const auto block = random_block(4, 6, rng);
        auto c = encode(square4_scheme(), block);
        auto with_copy = c;
        with_copy.push_back(c[1]);
        CHECK(decode(with_copy, 4).packets == block.packets);

        auto forged = c;
        forged.push_back(c[1]);
        forged.back().payload[0] ^= 1;
        CHECK_THROWS_AS(decode(forged, 4), IntegrityError);

        // A surplus packet whose payload disagrees with its coding vector.
        auto surplus = c;
        CodedPacket extra{9, {1, 2, 3}, c[0].payload};
        extra.payload[2] ^= 0x80;
        surplus.push_back(extra);
        CHECK_THROWS_AS(decode(surplus, 4), IntegrityError);
        surplus.back().payload = c[0].payload;
        CHECK(decode(surplus, 4).packets == block.packets);
    }
    SUBCASE("round trip across n and both modes") {
        for (std::size_t n = 2; n <= 12; ++n)
            for (Mode mode : {Mode::direct, Mode::balanced_decode})
                for (std::uint64_t seed = 0; seed < 3; ++seed) {
                    const auto design = find_nonsingular_rectangle(n, std::nullopt, seed);
                    const auto s = make_scheme(design.rectangle, mode);
                    const auto block = random_block(n, 1 + rng() % 40, rng);
                    REQUIRE(decode(encode(s, block), n).packets == block.packets);
                }
    }
}

TEST_CASE("decode weights") {
    const auto l = rect5x12();
    SUBCASE("balanced_decode rebuilds each packet from k coded packets") {
        const auto s = make_scheme(l, Mode::balanced_decode);
        for (std::size_t r = 0; r < 12; ++r) CHECK(s.decode_matrix.row(r).count() == 5);
    }
    SUBCASE("direct mode decode weights are uneven") {
        const auto s = make_scheme(l, Mode::direct);
        CHECK(s.decode_matrix.row(4).count() == 3);  // x5
        CHECK(s.decode_matrix.row(3).count() == 9);  // x4
        CHECK_FALSE(is_balanced(s.decode_matrix, 5));
    }
}

TEST_CASE("decodable_indexes") {
    std::mt19937_64 rng(4);
    const auto block = random_block(12, 4, rng);
    const auto c = encode(make_scheme(rect5x12(), Mode::balanced_decode), block);
    std::vector<std::size_t> all(12);
    for (std::size_t i = 0; i < 12; ++i) all[i] = i + 1;
    CHECK(decodable_indexes(c, 12) == all);

    std::vector<CodedPacket> two_paths;
    for (std::size_t i : {3, 10, 7, 2, 8, 4, 11, 9}) two_paths.push_back(c[i - 1]);
    CHECK(decodable_indexes(two_paths, 12).empty());

    const std::vector<CodedPacket> plain{{1, {5}, Bytes{7}}};
    CHECK(decodable_indexes(plain, 12) == std::vector<std::size_t>{5});

    SUBCASE("monotone in the received set") {
        for (int trial = 0; trial < 50; ++trial) {
            auto shuffled = c;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            std::vector<CodedPacket> prefix;
            std::size_t last = 0;
            for (const auto& p : shuffled) {
                prefix.push_back(p);
                const auto now = decodable_indexes(prefix, 12);
                REQUIRE(now.size() >= last);
                last = now.size();
            }
            CHECK(last == 12);
        }
    }
}

TEST_CASE("wire format") {
    const CodedPacket c1{1, {1, 2, 3}, Bytes{'A', 'B'}};
    const Bytes expected{0x01, 0x00, 0x03, 0x00, 0x01, 0x00, 0x02, 0x00, 0x03,
                         0x00, 0x02, 0x00, 0x00, 0x00, 0x41, 0x42};
    CHECK(serialize(c1) == expected);
    CHECK(deserialize(expected) == c1);

    SUBCASE("round trip") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 500; ++trial) {
            CodedPacket p;
            p.index = static_cast<PacketIndex>(1 + rng() % 65535);
            std::set<PacketIndex> h;
            const std::size_t count = 1 + rng() % 30;
            while (h.size() < count) h.insert(static_cast<PacketIndex>(1 + rng() % 65535));
            p.header.assign(h.begin(), h.end());
            p.payload.resize(rng() % 300);
            for (auto& b : p.payload) b = static_cast<std::uint8_t>(rng());
            REQUIRE(deserialize(serialize(p)) == p);
        }
    }
    SUBCASE("malformed input") {
        for (std::size_t cut = 0; cut < expected.size(); ++cut)
            CHECK_THROWS_AS(deserialize(std::span(expected.data(), cut)), ParseError);
        auto trailing = expected;
        trailing.push_back(0);
        CHECK_THROWS_AS(deserialize(trailing), ParseError);
        auto unsorted = expected;
        unsorted[4] = 0x03;  // header 3, 2, 3
        CHECK_THROWS_AS(deserialize(unsorted), ParseError);
        auto empty_header = Bytes{0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00};
        CHECK_THROWS_AS(deserialize(empty_header), ParseError);
        try {
            deserialize(std::span(expected.data(), 12));
        } catch (const ParseError& e) {
            CHECK(e.offset() == 10);
        }
    }
    SUBCASE("prefix parsing reports consumed bytes") {
        auto two = expected;
        two.insert(two.end(), expected.begin(), expected.end());
        std::size_t used = 0;
        CHECK(deserialize_prefix(two, used) == c1);
        CHECK(used == expected.size());
    }
}

TEST_CASE("split and join") {
    Bytes twelve(12);
    for (std::size_t i = 0; i < 12; ++i) twelve[i] = static_cast<std::uint8_t>(i);
    auto b = split_payload(twelve, 4);
    CHECK(b.packets.size() == 4);
    CHECK(b.packet_len == 3);
    CHECK(b.packets[1] == Bytes{3, 4, 5});

    const Bytes ten(twelve.begin(), twelve.begin() + 10);
    b = split_payload(ten, 4);
    CHECK(b.packet_len == 3);
    CHECK(b.original_len == 10);
    CHECK(b.packets[3] == Bytes{9, 0, 0});
    CHECK(join_payload(b) == ten);

    CHECK_THROWS_AS(split_payload(Bytes{}, 4), InvalidArgument);
    CHECK_THROWS_AS(split_payload(ten, 0), InvalidArgument);

    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 1000; ++trial) {
        Bytes data(1 + rng() % 200);
        for (auto& x : data) x = static_cast<std::uint8_t>(rng());
        const std::size_t n = 1 + rng() % 16;
        REQUIRE(join_payload(split_payload(data, n)) == data);
    }
}

TEST_CASE("manifest") {
    const Manifest m{12, 5, Mode::balanced_decode, 1000, rect5x12()};
    const auto text = to_text(m);
    CHECK(text.starts_with("12 5 balanced_decode 1000\n5 12\n"));
    const auto back = parse_manifest(text);
    CHECK(back.n == 12);
    CHECK(back.k == 5);
    CHECK(back.mode == Mode::balanced_decode);
    CHECK(back.original_len == 1000);
    CHECK(back.rectangle == m.rectangle);
    CHECK_THROWS_AS(parse_manifest("4 3 direct\n"), ParseError);
    CHECK_THROWS_AS(parse_manifest("4 3 sideways 4\n3 4\n2 4 1 3\n1 3 2 4\n3 2 4 1\n"), ParseError);
    CHECK_THROWS_AS(parse_manifest("4 2 direct 4\n3 4\n2 4 1 3\n1 3 2 4\n3 2 4 1\n"), ParseError);
}
