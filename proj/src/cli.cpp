#include "xorcode/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "xorcode/codec.hpp"
#include "xorcode/error.hpp"
#include "xorcode/latin.hpp"
#include "xorcode/network.hpp"
#include "xorcode/security.hpp"

namespace xorcode::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Bytes read_bytes(const fs::path& path) {
    const auto s = read_file(path);
    return {s.begin(), s.end()};
}

void write_file(const fs::path& path, std::string_view data) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

void write_bytes(const fs::path& path, const Bytes& data) {
    write_file(path, std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
}

std::string packet_file_name(std::size_t index, std::size_t n) {
    std::size_t width = std::max<std::size_t>(3, std::to_string(n).size());
    std::ostringstream ss;
    ss << "packet_" << std::setw(static_cast<int>(width)) << std::setfill('0') << index << ".bin";
    return ss.str();
}

std::string join(const std::vector<std::size_t>& xs) {
    std::string out;
    for (auto x : xs) out += (out.empty() ? "" : ",") + std::to_string(x);
    return out;
}

// "3,10,7,2/8,4,11,9/1,6,5,12"
PathPartition parse_partition(const std::string& text) {
    PathPartition part;
    std::stringstream paths(text);
    std::string path;
    while (std::getline(paths, path, '/')) {
        std::vector<PacketIndex> set;
        std::stringstream items(path);
        std::string item;
        while (std::getline(items, item, ',')) {
            try {
                std::size_t used = 0;
                const unsigned long v = std::stoul(item, &used);
                if (used != item.size() || v == 0 || v > 0xFFFF) throw std::invalid_argument(item);
                set.push_back(static_cast<PacketIndex>(v));
            } catch (const std::logic_error&) {
                throw ParseError("bad packet index '" + item + "' in partition", 0);
            }
        }
        part.sets.push_back(std::move(set));
    }
    if (part.sets.empty()) throw ParseError("empty partition", 0);
    return part;
}

SourceBlock random_block(std::size_t n, std::size_t packet_len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SourceBlock block;
    block.packet_len = packet_len;
    block.original_len = n * packet_len;
    block.packets.assign(n, Bytes(packet_len));
    for (auto& p : block.packets)
        for (auto& b : p) b = static_cast<std::uint8_t>(rng() & 0xFF);
    return block;
}

struct GenOptions {
    std::size_t n = 0;
    std::optional<std::size_t> k;
    bool automatic = false;
    std::uint64_t seed = kDefaultSeed;
    std::size_t moves = 0;
    std::size_t retries = kDefaultMaxRetries;
    std::string out_dir = ".";
};

int cmd_gen(const GenOptions& o, std::ostream& out) {
    const auto k = o.automatic ? std::nullopt : o.k;
    out << "seed=" << o.seed << " n=" << o.n << " k=" << (k ? std::to_string(*k) : "auto") << "\n";
    const auto design = find_nonsingular_rectangle(o.n, k, o.seed, o.retries, o.moves);
    const auto inverse = invert(design.block_incidence);
    const fs::path dir(o.out_dir);
    write_file(dir / "rectangle.txt", to_text(design.rectangle));
    write_file(dir / "block_incidence.txt", to_text(design.block_incidence));
    write_file(dir / "inverse.txt", to_text(inverse));
    const auto rows = design.rectangle.rows();
    out << "rectangle " << rows << "x" << o.n << " found after " << design.attempts << " attempt(s)\n";
    out << "n=" << o.n << " k=" << rows << " attempts=" << design.attempts
        << " balanced=" << (is_balanced(design.block_incidence, rows) ? "true" : "false")
        << " nonsingular=true inverse_balanced=" << (is_balanced(inverse, rows) ? "true" : "false") << "\n";
    return 0;
}

struct EncodeOptions {
    std::string rectangle;
    std::string mode = "direct";
    std::string input;
    std::string out_dir = ".";
};

int cmd_encode(const EncodeOptions& o, std::ostream& out) {
    auto rect = parse_rectangle(read_file(o.rectangle));
    if (!validate(rect)) throw InvalidArgument("'" + o.rectangle + "' is not a valid Latin rectangle");
    const Mode mode = parse_mode(o.mode);
    const auto scheme = make_scheme(rect, mode);
    const auto data = read_bytes(o.input);
    const auto block = split_payload(data, scheme.n);
    const auto packets = encode(scheme, block);
    const fs::path dir(o.out_dir);
    for (const auto& p : packets) write_bytes(dir / packet_file_name(p.index, scheme.n), serialize(p));
    write_file(dir / "manifest.txt", to_text(Manifest{scheme.n, scheme.k, mode, block.original_len, rect}));
    out << "encoded " << data.size() << " bytes into " << packets.size() << " packets of " << block.packet_len
        << " bytes (mode " << to_string(mode) << ")\n";
    for (const auto& p : packets) {
        out << "C" << p.index << " = {";
        for (std::size_t i = 0; i < p.header.size(); ++i) out << (i ? "," : "") << p.header[i];
        out << "}\n";
    }
    return 0;
}

struct DecodeOptions {
    std::string manifest;
    std::vector<std::string> packets;
    std::string output;
};

int cmd_decode(const DecodeOptions& o, std::ostream& out, std::ostream& err) {
    const auto manifest = parse_manifest(read_file(o.manifest));
    std::vector<CodedPacket> packets;
    for (const auto& file : o.packets) {
        try {
            packets.push_back(deserialize(read_bytes(file)));
        } catch (const ParseError& e) {
            throw ParseError("'" + file + "': " + e.what(), e.offset());
        }
    }
    SourceBlock block;
    try {
        block = decode(packets, manifest.n);
    } catch (const PartialDecodeError& e) {
        err << "error: " << e.what() << "\n";
        out << "recoverable=" << join(e.recoverable()) << "\n";
        return 1;
    }
    block.original_len = manifest.original_len;
    const auto data = join_payload(block);
    write_bytes(o.output, data);
    out << "decoded " << data.size() << " bytes from " << packets.size() << " packets\n";
    return 0;
}

struct SimulateOptions {
    std::string network;
    std::size_t n = 0;
    std::uint64_t seed = kDefaultSeed;
    std::string mode = "direct";
    std::string rectangle;
    std::string schedule;
    std::size_t packet_len = 16;
    std::string out_dir;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
    const auto net = parse_network(read_file(o.network));
    const Mode mode = parse_mode(o.mode);
    out << "seed=" << o.seed << " mode=" << to_string(mode) << "\n";
    for (NodeId t : net.sinks()) {
        const auto f = max_flow(net, t);
        out << "maxflow(" << net.name(t) << ")=" << f << (f == 0 ? " warning: unreachable" : "") << "\n";
    }
    Schedule schedule = o.schedule.empty() ? build_schedule(net, o.n) : parse_schedule(net, read_file(o.schedule));
    if (!o.schedule.empty()) {
        if (auto problems = schedule_problems(net, schedule); !problems.empty()) {
            for (const auto& p : problems) out << "invalid: " << p << "\n";
            throw InfeasibleSchedule("schedule file failed validation");
        }
    }
    if (schedule.padding() > 0)
        out << "padding: n=" << schedule.requested_n << " raised to " << schedule.n << " (" << schedule.padding()
            << " zero dummy packets) so that max-flow " << schedule.maxflow << " divides it\n";

    const auto rect = o.rectangle.empty()
                          ? find_nonsingular_rectangle(schedule.n, std::nullopt, o.seed).rectangle
                          : parse_rectangle(read_file(o.rectangle));
    if (rect.cols() != schedule.n)
        throw InvalidArgument("rectangle has " + std::to_string(rect.cols()) + " columns but the schedule sends " +
                              std::to_string(schedule.n) + " packets");
    const auto scheme = make_scheme(rect, mode);
    auto block = random_block(schedule.n, o.packet_len, o.seed);
    for (std::size_t i = schedule.requested_n; i < schedule.n; ++i) std::fill(block.packets[i].begin(), block.packets[i].end(), 0);

    const auto report = simulate(net, schedule, scheme, block);
    const auto text = to_text(report);
    out << "schedule: n=" << schedule.n << " phases=" << schedule.phases << " maxflow=" << schedule.maxflow << "\n";
    out << text;
    if (!o.out_dir.empty()) {
        const fs::path dir(o.out_dir);
        write_file(dir / "schedule.txt", to_text(net, schedule));
        write_file(dir / "rectangle.txt", to_text(rect));
        write_file(dir / "report.txt", text);
    }
    return report.all_decoded() && report.conflicts.empty() ? 0 : 1;
}

struct AuditOptions {
    std::string rectangle;
    std::string mode = "balanced_decode";
    std::string network;
    std::string schedule;
    std::string partition;
};

int cmd_audit(const AuditOptions& o, std::ostream& out) {
    const auto rect = parse_rectangle(read_file(o.rectangle));
    if (!validate(rect)) throw InvalidArgument("'" + o.rectangle + "' is not a valid Latin rectangle");
    const auto scheme = make_scheme(rect, parse_mode(o.mode));

    std::vector<std::pair<std::string, PathPartition>> cases;
    if (!o.partition.empty()) {
        cases.emplace_back("partition", parse_partition(o.partition));
    } else {
        if (o.network.empty() || o.schedule.empty())
            throw ParseError("audit needs --partition, or --network together with --schedule", 0);
        const auto net = parse_network(read_file(o.network));
        const auto schedule = parse_schedule(net, read_file(o.schedule));
        for (std::size_t r = 0; r < schedule.routes.size(); ++r)
            cases.emplace_back("sink " + net.name(schedule.routes[r].sink), PathPartition{schedule.path_partition(r)});
    }
    for (const auto& [label, part] : cases) {
        out << "# " << label << "\n";
        out << to_text(audit(rect, scheme, part));
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Balanced XOR-ed coding over GF(2): designs, codec, multicast schedules, eavesdropper audit",
                 "xorcode"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a nonsingular Latin-rectangle design");
    gen_cmd->add_option("-n", gen.n, "Order (number of packets)")->required()->check(CLI::PositiveNumber);
    auto* k_opt = gen_cmd->add_option("-k", gen.k, "Rows of the rectangle (odd)")->check(CLI::PositiveNumber);
    gen_cmd->add_flag("--auto", gen.automatic, "k = n-1 for even n, n-2 for odd n")->excludes(k_opt);
    gen_cmd->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    gen_cmd->add_option("--moves", gen.moves, "Jacobson-Matthews moves per square (0 = n^3)");
    gen_cmd->add_option("--retries", gen.retries, "Maximum generation attempts")->capture_default_str();
    gen_cmd->add_option("-o,--out", gen.out_dir, "Output directory")->capture_default_str();

    EncodeOptions enc;
    auto* enc_cmd = app.add_subcommand("encode", "Encode a file into coded packets");
    enc_cmd->add_option("-r,--rectangle", enc.rectangle, "Latin rectangle file")->required();
    enc_cmd->add_option("-m,--mode", enc.mode, "direct or balanced_decode")->capture_default_str();
    enc_cmd->add_option("-i,--input", enc.input, "Input file")->required();
    enc_cmd->add_option("-o,--out", enc.out_dir, "Output directory")->capture_default_str();

    DecodeOptions dec;
    auto* dec_cmd = app.add_subcommand("decode", "Rebuild a file from coded packets");
    dec_cmd->add_option("--manifest", dec.manifest, "Block manifest")->required();
    dec_cmd->add_option("-o,--output", dec.output, "Output file")->required();
    dec_cmd->add_option("packets", dec.packets, "Coded packet files")->required();

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Build a phase schedule and replay delivery");
    sim_cmd->add_option("--network", sim.network, "Network file")->required();
    auto* n_opt = sim_cmd->add_option("-n", sim.n, "Number of source packets")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    sim_cmd->add_option("-m,--mode", sim.mode, "direct or balanced_decode")->capture_default_str();
    sim_cmd->add_option("-r,--rectangle", sim.rectangle, "Use this design instead of generating one");
    auto* sched_opt = sim_cmd->add_option("--schedule", sim.schedule, "Replay this schedule instead of building one");
    sim_cmd->add_option("--packet-len", sim.packet_len, "Payload bytes per packet")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("-o,--out", sim.out_dir, "Write schedule, rectangle and report here");
    n_opt->excludes(sched_opt);

    AuditOptions aud;
    auto* aud_cmd = app.add_subcommand("audit", "Eavesdropping analysis of a routing");
    aud_cmd->add_option("-r,--rectangle", aud.rectangle, "Latin rectangle file")->required();
    aud_cmd->add_option("-m,--mode", aud.mode, "direct or balanced_decode")->capture_default_str();
    aud_cmd->add_option("--network", aud.network, "Network file (with --schedule)");
    aud_cmd->add_option("--schedule", aud.schedule, "Schedule file");
    aud_cmd->add_option("--partition", aud.partition, "Path sets, e.g. 3,10,7,2/8,4,11,9/1,6,5,12");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen_cmd) return cmd_gen(gen, out);
        if (*enc_cmd) return cmd_encode(enc, out);
        if (*dec_cmd) return cmd_decode(dec, out, err);
        if (*sim_cmd) {
            if (sim.schedule.empty() && sim.n == 0) throw ParseError("simulate needs -n or --schedule", 0);
            return cmd_simulate(sim, out);
        }
        if (*aud_cmd) return cmd_audit(aud, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const SearchFailure& e) {
        err << "error: " << e.what() << " (retries=" << e.attempts() << ")\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace xorcode::cli
