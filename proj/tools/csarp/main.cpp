#include "frame_desc.hpp"

#include "csarp/crypto/frame_auth.hpp"
#include "csarp/scenarios/builtins.hpp"
#include "csarp/scenarios/runner.hpp"
#include "csarp/wire/dissect.hpp"
#include "csarp/wire/hex.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace {

using namespace csarp;
using nlohmann::json;

// Stable across versions.
enum Exit : int { kOk = 0, kExpectationFailed = 1, kUsage = 2, kDecodeError = 3 };

std::string slurp(std::istream& in) { return {std::istreambuf_iterator<char>(in), {}}; }

std::optional<std::string> read_file(const std::string& path) {
    if (path == "-") return slurp(std::cin);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    return slurp(in);
}

std::optional<scenarios::Mode> mode_option(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return scenarios::parse_mode(text);
}

// ---- list / show -----------------------------------------------------------

int cmd_list() {
    std::map<std::string, std::string> modes;
    std::vector<const scenarios::Scenario*> order;
    for (const auto& s : scenarios::builtin_scenarios()) {
        auto& m = modes[s.name];
        if (m.empty()) order.push_back(&s);
        m += (m.empty() ? "" : ",") + std::string(protocol::to_string(s.mode));
    }
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %-16s %7s  %s\n", "name", "modes", "repeat", "episodes");
    std::cout << line;
    for (const auto* s : order) {
        std::string episodes;
        for (const auto& l : scenarios::episode_labels(*s)) episodes += (episodes.empty() ? "" : " ") + l;
        std::snprintf(line, sizeof line, "%-24s %-16s %7u  ", s->name.c_str(), modes[s->name].c_str(), s->repeat);
        std::cout << line << episodes << '\n';
    }
    return kOk;
}

int cmd_show(const std::string& name, const std::string& mode_text) {
    const auto mode = mode_option(mode_text);
    if (!mode_text.empty() && !mode) {
        std::cerr << "error: --mode must be secure or baseline\n";
        return kUsage;
    }
    const auto s = scenarios::find_builtin(name, mode.value_or(scenarios::Mode::Secure));
    if (!s) {
        std::cerr << "error: no builtin scenario '" << name << "' in that mode (see 'csarp list')\n";
        return kUsage;
    }
    std::cout << scenarios::to_json(*s).dump(2) << '\n';
    return kOk;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
    std::string target;
    std::string mode;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::uint32_t repeat = 0;
    unsigned threads = 0;
    std::string out;
    std::string trace;
};

int cmd_run(const RunArgs& args) {
    const auto mode = mode_option(args.mode);
    if (!args.mode.empty() && !mode) {
        std::cerr << "error: --mode must be secure or baseline\n";
        return kUsage;
    }

    std::vector<scenarios::Scenario> todo;
    if (std::filesystem::is_regular_file(args.target)) {
        const auto text = read_file(args.target);
        try {
            if (!text) throw scenarios::ValidationError("cannot read " + args.target);
            todo.push_back(scenarios::scenario_from_json(json::parse(*text)));
        } catch (const json::exception& e) {
            std::cerr << "error: " << args.target << ": not valid JSON: " << e.what() << '\n';
            return kUsage;
        } catch (const scenarios::ValidationError& e) {
            std::cerr << "error: " << args.target << ": " << e.what() << '\n';
            return kUsage;
        }
        if (mode) todo.back().mode = *mode;
    } else if (scenarios::has_builtin(args.target)) {
        for (const auto m : {scenarios::Mode::Secure, scenarios::Mode::Baseline}) {
            if (mode && m != *mode) continue;
            if (auto s = scenarios::find_builtin(args.target, m)) todo.push_back(std::move(*s));
        }
        if (todo.empty()) {
            std::cerr << "error: scenario '" << args.target << "' has no " << args.mode << " variant\n";
            return kUsage;
        }
    } else {
        std::cerr << "error: unknown scenario '" << args.target << "' (not a file or builtin; see 'csarp list')\n";
        return kUsage;
    }

    std::vector<scenarios::Report> reports;
    for (auto& s : todo) {
        if (args.seed_given) s.seed = args.seed;
        if (args.repeat) s.repeat = args.repeat;
        try {
            reports.push_back(scenarios::run_scenario(s, {args.threads}));
        } catch (const scenarios::ValidationError& e) {
            std::cerr << "error: invalid scenario: " << e.what() << '\n';
            return kUsage;
        } catch (const simnet::SimError& e) {
            std::cerr << "error: " << s.name << " (" << protocol::to_string(s.mode) << "): " << e.what() << '\n';
            return kExpectationFailed;
        }
    }

    for (const auto& r : reports) {
        scenarios::write_table(std::cout, r);
        std::cout << '\n';
    }
    std::optional<std::vector<scenarios::ComparisonRow>> rows;
    if (reports.size() == 2) {
        rows = scenarios::compare(reports[0], reports[1]);
        std::cout << "comparison " << reports[0].family << '\n';
        scenarios::write_comparison(std::cout, *rows);
    }

    if (!args.out.empty()) {
        json j;
        if (reports.size() == 1) {
            j = scenarios::to_json(reports[0]);
        } else {
            j["reports"] = json::array();
            for (const auto& r : reports) j["reports"].push_back(scenarios::to_json(r));
            j["comparison"] = json::array();
            for (const auto& row : *rows) {
                j["comparison"].push_back(
                    {{"label", row.label}, {"secure", row.secure}, {"baseline", row.baseline}, {"delta", row.delta()}});
            }
        }
        std::ofstream out(args.out);
        if (!out) {
            std::cerr << "error: cannot write " << args.out << '\n';
            return kUsage;
        }
        out << j.dump(2) << '\n';
    }
    if (!args.trace.empty()) {
        std::ofstream out(args.trace);
        if (!out) {
            std::cerr << "error: cannot write " << args.trace << '\n';
            return kUsage;
        }
        for (const auto& r : reports) {
            out << "# " << r.scenario << ' ' << protocol::to_string(r.mode) << " seed " << r.seed << '\n';
            simnet::write_trace(out, r.trace, r.node_names);
        }
    }

    const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed(); });
    return ok ? kOk : kExpectationFailed;
}

// ---- decode / encode / sample ---------------------------------------------

void print_fields(const std::vector<wire::FieldView>& fields) {
    char line[128];
    std::snprintf(line, sizeof line, "  %6s %6s  %-20s %s\n", "offset", "width", "field", "value");
    std::cout << line;
    for (const auto& f : fields) {
        std::snprintf(line, sizeof line, "  %6zu %6zu  %-20s ", f.offset, f.width, f.name.c_str());
        std::cout << line << f.value << '\n';
    }
}

struct DecodeArgs {
    std::vector<std::string> hex;
    std::string file;
    bool verify_demo = false;
    std::uint64_t seed = 1;
};

int cmd_decode(const DecodeArgs& args) {
    std::string text;
    if (!args.hex.empty()) {
        for (const auto& h : args.hex) text += h + ' ';
    } else if (!args.file.empty()) {
        const auto contents = read_file(args.file);
        if (!contents) {
            std::cerr << "error: cannot read " << args.file << '\n';
            return kUsage;
        }
        text = *contents;
    } else {
        text = slurp(std::cin);
    }

    std::vector<std::uint8_t> bytes;
    try {
        bytes = wire::parse_hex(text);
    } catch (const wire::HexError& e) {
        std::cerr << (e.code() == wire::HexErrc::BadHexDigit ? "BadHexDigit" : "OddLength") << " at offset "
                  << e.position() << '\n';
        return kDecodeError;
    }

    try {
        if (bytes.size() >= wire::kMacHeaderLen && bytes[12] == (wire::kEtherTypeDhcpLite >> 8) &&
            bytes[13] == (wire::kEtherTypeDhcpLite & 0xFF)) {
            const auto frame = wire::decode_dhcp(bytes);
            std::cout << "frame " << wire::to_string(frame.msg.op) << ", " << bytes.size() << " bytes\n";
            print_fields(wire::dissect(frame));
            std::cout << "FCS=OK\nauth: none\n";
            return kOk;
        }
        const auto frame = wire::decode_frame(bytes);
        std::cout << "frame " << wire::peek_kind(bytes) << ", " << bytes.size() << " bytes\n";
        print_fields(wire::dissect(frame));
        std::cout << "FCS=OK\n";
        if (const auto* tag = std::get_if<wire::KeyedTag>(&frame.auth)) {
            std::cout << "auth: tag (" << tag->tag.size() << "-byte keyed SHA-256)\n";
        } else if (const auto* sig = std::get_if<wire::SignatureAuth>(&frame.auth)) {
            std::cout << "auth: signature (" << sig->signature.size() << "-byte Ed25519, " << sig->cert.size()
                      << "-byte certificate)\n";
        } else {
            std::cout << "auth: none\n";
        }
        if (args.verify_demo && !std::holds_alternative<wire::NoAuth>(frame.auth)) {
            const auto material = crypto::AuthMaterial::derive(args.seed);
            const bool ok = std::holds_alternative<wire::KeyedTag>(frame.auth)
                                ? crypto::check_tag(frame, material.dhcp_central_key)
                                : crypto::check_signature(frame, material.root);
            std::cout << "auth check against demo material (seed " << args.seed << "): "
                      << (ok ? "valid" : "INVALID") << '\n';
        }
    } catch (const wire::DecodeError& e) {
        std::cerr << wire::to_string(e.code()) << " at offset " << e.offset() << '\n';
        return kDecodeError;
    }
    return kOk;
}

int cmd_encode(const std::string& path, std::uint64_t seed) {
    const auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read " << path << '\n';
        return kUsage;
    }
    try {
        const auto frame = cli::frame_from_description(json::parse(*text), seed);
        std::cout << wire::to_hex(wire::encode_frame(frame)) << '\n';
    } catch (const json::exception& e) {
        std::cerr << "error: " << path << ": not valid JSON: " << e.what() << '\n';
        return kUsage;
    } catch (const cli::DescriptionError& e) {
        std::cerr << "error: " << path << ": " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << path << ": " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}

int cmd_sample(const std::string& type) {
    if (type.empty()) {
        for (const auto& t : cli::description_types()) std::cout << t << '\n';
        return kOk;
    }
    try {
        std::cout << cli::sample_description(type).dump(2) << '\n';
    } catch (const cli::DescriptionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Central Server secure ARP simulator: scenarios and frame tools"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    auto* seed_opt = app.add_option("--seed", seed, "Base seed (env CSARP_SEED)")->envname("CSARP_SEED");

    auto* list = app.add_subcommand("list", "List builtin scenarios");

    std::string show_name, show_mode;
    auto* show = app.add_subcommand("show", "Print a builtin scenario as JSON");
    show->add_option("name", show_name)->required();
    show->add_option("--mode", show_mode, "secure or baseline");

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a builtin scenario or a scenario file");
    run->add_option("scenario", run_args.target, "Builtin name or JSON file")->required();
    run->add_option("--mode", run_args.mode, "secure or baseline (default: every variant)");
    auto* run_seed = run->add_option("--seed", run_args.seed, "Seed override (env CSARP_SEED)")->envname("CSARP_SEED");
    run->add_option("--repeat", run_args.repeat, "Monte Carlo trials")->check(CLI::PositiveNumber);
    run->add_option("--threads", run_args.threads, "Worker threads for repeats (0: auto)");
    run->add_option("--out", run_args.out, "Write the report as JSON");
    run->add_option("--trace", run_args.trace, "Write the event trace");

    DecodeArgs decode_args;
    auto* decode = app.add_subcommand("decode", "Decode a frame from hex (argument, --file or stdin)");
    decode->add_option("hex", decode_args.hex, "Frame bytes in hex");
    decode->add_option("--file", decode_args.file, "Read hex from a file");
    decode->add_flag("--verify-demo", decode_args.verify_demo, "Check auth against the demo material for --seed");

    std::string encode_path;
    auto* encode = app.add_subcommand("encode", "Encode a JSON frame description to hex");
    encode->add_option("description", encode_path, "JSON file, or - for stdin")->required();

    std::string sample_type;
    auto* sample = app.add_subcommand("sample", "Print a sample frame description");
    sample->add_option("type", sample_type, "Frame type; omit to list types");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (*list) return cmd_list();
    if (*show) return cmd_show(show_name, show_mode);
    if (*run) {
        if (run_seed->count() == 0 && seed_opt->count() > 0) run_args.seed = seed;
        run_args.seed_given = run_seed->count() > 0 || seed_opt->count() > 0;
        return cmd_run(run_args);
    }
    if (*decode) {
        decode_args.seed = seed;
        return cmd_decode(decode_args);
    }
    if (*encode) return cmd_encode(encode_path, seed);
    if (*sample) return cmd_sample(sample_type);
    return kUsage;
}
