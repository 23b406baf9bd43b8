// Command-line frontend for the circuit-to-palindrome reduction pipeline.
//
// Exit codes: 0 success / yes; 1 clean no (or failed verification);
// 2 usage or input errors; 3 budget or limit exceeded.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "palinreduce/circuit.hpp"
#include "palinreduce/reduction.hpp"
#include "palinreduce/solver.hpp"
#include "palinreduce/symbols.hpp"
#include "palinreduce/transforms.hpp"
#include "palinreduce/verify.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw palin::error("cannot open: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw palin::error("cannot open for writing: " + path);
    f << content;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) std::cout << content;
    else write_file(out_path, content);
}

// A solve input is either a symstring file (text header or JSON) or raw
// character text, one string of letters.
struct SolveInput {
    bool symbolic = false;
    palin::SymString sym;
    std::string raw;

    std::vector<palin::SymId> ids() const {
        if (symbolic) return sym.seq;
        return palin::ids_of_chars(raw);
    }
    std::string render_factor(std::uint32_t b, std::uint32_t e) const {
        if (!symbolic) return raw.substr(b, e - b);
        std::string out;
        for (std::uint32_t i = b; i < e; ++i) {
            if (i > b) out += ' ';
            out += palin::token_of(sym.symbol_at(i));
        }
        return out;
    }
};

SolveInput load_solve_input(const std::string& path) {
    std::string text = read_file(path);
    SolveInput in;
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && (text[i] == '{' || text.compare(i, 21, "palinreduce-symstring") == 0)) {
        in.symbolic = true;
        in.sym = text[i] == '{' ? palin::symstring_from_json(text) : palin::parse_symstring(text);
        return in;
    }
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (!std::isalnum(static_cast<unsigned char>(c))) {
            throw palin::error(std::string("raw string contains invalid character: ") + c);
        }
        in.raw += c;
    }
    return in;
}

std::string factorization_text(const SolveInput& in, const palin::Factorization& f) {
    std::string out = "(";
    for (std::size_t i = 0; i < f.spans.size(); ++i) {
        if (i) out += " | ";
        out += in.render_factor(f.spans[i].first, f.spans[i].second);
    }
    out += ")";
    return out;
}

nlohmann::json factorization_json(const SolveInput& in, const palin::Factorization& f) {
    nlohmann::json spans = nlohmann::json::array();
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& [b, e] : f.spans) {
        spans.push_back({b, e});
        factors.push_back(in.render_factor(b, e));
    }
    return {{"spans", std::move(spans)}, {"factors", std::move(factors)}};
}

palin::Circuit load_circuit(const std::string& path) {
    return palin::desugar(palin::parse_circuit(read_file(path)));
}

int cmd_desugar(const std::string& in_path, const std::string& out_path) {
    palin::GateCircuit gc = palin::parse_circuit(read_file(in_path));
    palin::Circuit c = palin::desugar(gc);
    emit(out_path, palin::serialize_circuit(c));
    return kExitYes;
}

int cmd_build(const std::string& in_path, const std::string& out_path, std::uint32_t k,
              bool binary, const std::string& manifest_path, const std::string& format) {
    palin::Circuit c = load_circuit(in_path);
    palin::Reduction red = palin::reduce(c);
    palin::SymString str = k > 1 ? palin::k_expand(red.s, k) : red.s;

    nlohmann::json transform;
    transform["k"] = k;
    transform["binary"] = binary;

    if (binary) {
        palin::BinaryEncoding enc = palin::binary_reduce(str, k);
        transform["delta"] = nlohmann::json::parse(palin::delta_map_to_json(enc.map));
        transform["source_len"] = str.seq.size();
        emit(out_path, enc.image + "\n");
    } else if (format == "json") {
        emit(out_path, palin::symstring_to_json(str) + "\n");
    } else {
        emit(out_path, std::string(palin::kSymstringHeader) + "\n" + palin::serialize(str) + "\n");
    }

    if (!manifest_path.empty()) {
        nlohmann::json m = nlohmann::json::parse(palin::manifest_to_json(red.manifest));
        m["transform"] = std::move(transform);
        write_file(manifest_path, m.dump(2) + "\n");
    }
    return kExitYes;
}

int cmd_solve(const std::string& in_path, std::uint32_t k, const std::string& mode,
              std::uint64_t limit, std::uint64_t budget, const std::string& format,
              bool no_prepass, bool raw_runs) {
    SolveInput in = load_solve_input(in_path);
    auto ids = in.ids();

    palin::SolveOptions opts;
    opts.k = k;
    opts.budget = budget;
    opts.limit = limit;
    opts.forced_prepass = !no_prepass;
    if (mode == "decide") {
        opts.mode = palin::SolveMode::Decide;
        opts.canonical_runs = !raw_runs;
    } else if (mode == "witness") {
        opts.mode = palin::SolveMode::Witness;
        opts.canonical_runs = !raw_runs;
    } else if (mode == "count") {
        opts.mode = palin::SolveMode::Count;
        opts.canonical_runs = !raw_runs;  // counts stay exact via orbit weights
    } else if (mode == "enumerate") {
        opts.mode = palin::SolveMode::Enumerate;
        opts.canonical_runs = false;  // enumerate lists raw factorizations
    } else {
        std::cerr << "unknown mode: " << mode << "\n";
        return kExitUsage;
    }

    palin::SolveResult r = palin::solve(std::span<const palin::SymId>(ids), opts);
    if (r.status == palin::SolveStatus::BudgetExceeded) {
        std::cerr << "budget exceeded after " << r.nodes << " expansions\n";
        return kExitBudget;
    }

    bool json = format == "json";
    switch (opts.mode) {
        case palin::SolveMode::Decide:
            std::cout << (r.satisfiable ? "yes" : "no") << "\n";
            return r.satisfiable ? kExitYes : kExitNo;
        case palin::SolveMode::Witness:
            if (!r.satisfiable) {
                std::cout << (json ? "{\"witness\":null}" : "none") << "\n";
                return kExitNo;
            }
            if (json) std::cout << factorization_json(in, *r.witness).dump() << "\n";
            else std::cout << factorization_text(in, *r.witness) << "\n";
            return kExitYes;
        case palin::SolveMode::Count:
            std::cout << palin::count_to_string(r.count) << (r.count_overflow ? "+" : "") << "\n";
            return r.count > 0 ? kExitYes : kExitNo;
        case palin::SolveMode::Enumerate: {
            if (json) {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& f : r.factorizations) arr.push_back(factorization_json(in, f));
                std::cout << arr.dump() << "\n";
            } else {
                for (const auto& f : r.factorizations) {
                    std::cout << factorization_text(in, f) << "\n";
                }
            }
            if (r.status == palin::SolveStatus::LimitExceeded) {
                std::cerr << "enumeration limit reached; more factorizations exist\n";
                return kExitBudget;
            }
            return r.factorizations.empty() ? kExitNo : kExitYes;
        }
    }
    return kExitUsage;
}

int cmd_verify(const std::string& in_path, const std::string& fixtures, std::uint32_t k,
               bool binary, std::uint64_t budget, const std::string& format) {
    palin::VerifyLimits lim;
    lim.budget = budget;

    std::vector<std::pair<std::string, std::string>> files;  // (name, path)
    if (!fixtures.empty()) {
        for (const auto& e : std::filesystem::directory_iterator(fixtures)) {
            if (e.path().extension() == ".ckt") {
                files.emplace_back(e.path().stem().string(), e.path().string());
            }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw palin::error("no .ckt fixtures in " + fixtures);
    } else {
        files.emplace_back(std::filesystem::path(in_path).stem().string(), in_path);
    }

    bool all_pass = true;
    bool any_inconclusive = false;
    nlohmann::json results = nlohmann::json::array();
    for (const auto& [name, path] : files) {
        palin::Circuit c = load_circuit(path);
        palin::Verdict v = palin::end_to_end(c, k, binary, lim);
        all_pass = all_pass && v.pass();
        any_inconclusive = any_inconclusive || v.outcome == palin::Verdict::Outcome::Inconclusive;
        if (format == "json") {
            results.push_back(nlohmann::json::parse(palin::verdict_to_json(v, name)));
        } else {
            std::cout << (v.pass() ? "PASS" : "FAIL") << " " << name << " (k=" << k
                      << (binary ? ", binary" : "") << "): "
                      << (v.circuit_sat ? "satisfiable" : "unsatisfiable")
                      << (v.message.empty() ? "" : " — " + v.message) << "\n";
        }
    }
    if (format == "json") {
        std::cout << (results.size() == 1 ? results[0].dump(2) : results.dump(2)) << "\n";
    }
    if (any_inconclusive) return kExitBudget;
    return all_pass ? kExitYes : kExitNo;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"diverse palindromic factorization toolkit"};
    app.require_subcommand(1);

    std::string in_path, out_path, manifest_path, fixtures;
    std::string mode = "decide", format = "text";
    std::uint32_t k = 1;
    std::uint64_t limit = 1000, budget = 100'000'000, seed = 0;
    bool binary = false, no_prepass = false, raw_runs = false;

    auto* desugar = app.add_subcommand("desugar", "rewrite a circuit to NAND + splitters");
    desugar->add_option("circuit", in_path, "circuit DSL file")->required();
    desugar->add_option("-o,--output", out_path, "output file (default stdout)");

    auto* build = app.add_subcommand("build", "build the reduction string for a circuit");
    build->add_option("circuit", in_path, "circuit DSL file")->required();
    build->add_option("-o,--output", out_path, "output file (default stdout)");
    build->add_option("-k", k, "diversity bound")->check(CLI::PositiveNumber);
    build->add_flag("--binary", binary, "encode over the two-letter alphabet");
    build->add_option("--manifest", manifest_path, "write the side-car manifest JSON");
    build->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));

    auto* solve = app.add_subcommand("solve", "search for k-diverse palindromic factorizations");
    solve->add_option("string", in_path, "symstring file or raw text")->required();
    solve->add_option("-k", k, "diversity bound")->check(CLI::PositiveNumber);
    solve->add_option("--mode", mode, "decide|witness|count|enumerate");
    solve->add_option("--limit", limit, "enumerate result cap");
    solve->add_option("--budget", budget, "search node budget");
    solve->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));
    solve->add_flag("--no-prepass", no_prepass, "disable the forced-unit prepass");
    solve->add_flag("--raw-runs", raw_runs, "disable canonical run ordering");
    solve->add_option("--seed", seed, "reserved for the parallel solver");

    auto* verify = app.add_subcommand("verify", "check reduction/solver/oracle equivalence");
    verify->add_option("circuit", in_path, "circuit DSL file");
    verify->add_option("--fixtures", fixtures, "directory of .ckt fixtures");
    verify->add_option("-k", k, "diversity bound")->check(CLI::PositiveNumber);
    verify->add_flag("--binary", binary, "verify the binary-alphabet pipeline");
    verify->add_option("--budget", budget, "search node budget");
    verify->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (app.got_subcommand(desugar)) return cmd_desugar(in_path, out_path);
        if (app.got_subcommand(build)) {
            return cmd_build(in_path, out_path, k, binary, manifest_path, format);
        }
        if (app.got_subcommand(solve)) {
            return cmd_solve(in_path, k, mode, limit, budget, format, no_prepass, raw_runs);
        }
        if (app.got_subcommand(verify)) {
            if (in_path.empty() && fixtures.empty()) {
                std::cerr << "verify: need a circuit file or --fixtures\n";
                return kExitUsage;
            }
            return cmd_verify(in_path, fixtures, k, binary, budget, format);
        }
    } catch (const palin::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
