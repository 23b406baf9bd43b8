#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "palinreduce/circuit.hpp"
#include "palinreduce/reduction.hpp"
#include "palinreduce/solver.hpp"
#include "palinreduce/transforms.hpp"

namespace palin {

enum class WireStatus : std::uint8_t { True, False, Absent, Violation };
const char* wire_status_name(WireStatus s);

struct EncodingReport {
    // Status per output label of C_i, plus Absent checks for later labels.
    std::map<std::string, WireStatus> outputs;
    std::vector<std::string> violations;
    // Assignment decoded from the input wires' add-wire blocks.
    std::optional<Assignment> derived;
    bool ok() const { return violations.empty(); }
};

struct VerifyLimits {
    std::uint64_t max_factorizations = 1'000'000;  // enumeration cap
    std::uint64_t budget = 400'000'000;            // DFS expansions
};

// Definition-1 statuses of P against the subcircuit after `upto` steps of c.
EncodingReport encoded_assignment(std::span<const SymId> s, const Factorization& P,
                                  const Manifest& m, const Circuit& c, std::size_t upto);

struct RepresentReport {
    bool pass = false;
    bool inconclusive = false;  // cap or budget hit; never silently passes
    std::uint64_t classes = 0;  // canonical run classes enumerated
    BigCount total = 0;         // exact factorization count (orbit-weighted)
    // key: input assignment as 0/1 string in input-wire creation order
    std::map<std::string, BigCount> histogram;
    std::vector<std::string> inputs;  // input-wire order for the keys
    std::vector<std::string> problems;
};

// Definition-2 check on a string prefix: every enumerated diverse
// factorization encodes a consistent assignment (totality) and every input
// assignment is realized (surjectivity).
RepresentReport check_represents(std::span<const SymId> s, const Circuit& c, std::size_t upto,
                                 const Manifest& m, const VerifyLimits& lim = {});

struct InductionReport {
    bool pass = false;
    bool inconclusive = false;
    std::vector<std::string> problems;
    std::uint64_t checks = 0;
};

// check_represents after every build step; NAND steps are also checked just
// after their internal split (the paper's intermediate circuit).
InductionReport check_represents_all_steps(const Circuit& c, const VerifyLimits& lim = {});

struct SplitConformanceReport {
    bool pass = false;
    bool inconclusive = false;
    std::array<std::uint64_t, 6> tuple_counts{};
    std::uint64_t unmatched = 0;
    std::vector<std::string> problems;
};

// Matches every diverse factorization of the prefix ending at the split's
// S_i' boundary against the six-continuation catalogue, and checks the
// polarity classes against the prefix's encoded value of the split input.
SplitConformanceReport conformance_split(std::span<const SymId> s, const Circuit& c,
                                         std::size_t split_step, const Manifest& m,
                                         const VerifyLimits& lim = {});

struct NandConformanceReport {
    bool pass = false;
    bool inconclusive = false;
    std::uint64_t with_core_xcx = 0;  // factorizations containing x_{c'} c' x_{c'}
    std::uint64_t with_plain_cp = 0;  // factorizations containing bare c'
    std::vector<std::string> problems;
};

// S_i'' dichotomy for a NAND step: x_{c'} is always a complete factor, and
// x_{c'} c' x_{c'} appears exactly when the prefix makes both operands true.
// Also verifies that a1 is a complete factor in the S_{i-1}' part iff a2 is.
NandConformanceReport conformance_nand(std::span<const SymId> s, const Circuit& c,
                                       std::size_t nand_step, const Manifest& m,
                                       const VerifyLimits& lim = {});

struct Verdict {
    enum class Outcome : std::uint8_t { SatEquivalent, UnsatEquivalent, Mismatch, Inconclusive };
    Outcome outcome = Outcome::Inconclusive;
    bool circuit_sat = false;
    bool string_sat = false;
    std::optional<Assignment> decoded;  // witness assignment, when satisfiable
    bool witness_satisfies = false;
    std::uint32_t k = 1;
    bool binary = false;
    std::string message;

    bool pass() const {
        return outcome == Outcome::SatEquivalent || outcome == Outcome::UnsatEquivalent;
    }
};

std::string verdict_to_json(const Verdict& v, const std::string& name = "");

// Builds the reduction (optionally k-expanded and binary-encoded), decides
// it, compares against the brute-force oracle, and on satisfiable instances
// decodes the witness and confirms it satisfies the circuit.
Verdict end_to_end(const Circuit& c, std::uint32_t k, bool binary, const VerifyLimits& lim = {});

// Witness decoding helpers (exposed for tests and the CLI).
std::optional<Assignment> decode_witness_symbolic(std::span<const SymId> s, const Factorization& f,
                                                  const Manifest& m, const Circuit& c,
                                                  std::string* problem = nullptr);
// Maps a factorization of a delta image back to source spans; fails if any
// factor is not codeword-aligned (only Q_k-suffix factors may be skipped).
std::optional<Factorization> lift_binary_factorization(const Factorization& f,
                                                       std::size_t source_len,
                                                       const DeltaMap& dm,
                                                       std::span<const SymId> source,
                                                       std::string* problem = nullptr);

} // namespace palin
