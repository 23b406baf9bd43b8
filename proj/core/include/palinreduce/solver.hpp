#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "palinreduce/symbols.hpp"

namespace palin {

// Exact palindrome queries over an id sequence.  Manacher radii give O(1)
// is-palindrome; per-position candidate lists cover every palindromic
// substring starting there (maximal-run prefixes are kept implicit so that
// long runs cost no memory).
class PalindromeTable {
public:
    static PalindromeTable build(std::span<const SymId> s);

    std::size_t size() const { return n_; }
    bool is_palindrome(std::size_t begin, std::size_t end) const;

    // First index >= i whose symbol differs from s[i] (end of the maximal
    // run containing i).
    std::size_t run_end(std::size_t i) const { return run_end_[i]; }

    // Sorted lengths of palindromic prefixes at i that extend beyond the
    // run part (every entry exceeds run_end(i) - i).
    const std::vector<std::uint32_t>& long_candidates(std::size_t i) const {
        return longs_[i];
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint32_t> odd_, even_;   // max half-extents per center
    std::vector<std::uint32_t> run_end_;
    std::vector<std::vector<std::uint32_t>> longs_;
};

struct Factorization {
    // Half-open spans tiling [0, n).
    std::vector<std::pair<std::uint32_t, std::uint32_t>> spans;

    bool operator==(const Factorization&) const = default;
};

enum class SolveMode : std::uint8_t { Decide, Witness, Count, Enumerate };
enum class SolveStatus : std::uint8_t { Ok, BudgetExceeded, LimitExceeded };

using BigCount = unsigned __int128;
std::string count_to_string(BigCount v);

struct SolveOptions {
    std::uint32_t k = 1;
    SolveMode mode = SolveMode::Decide;
    std::uint64_t budget = 100'000'000;  // DFS expansions
    std::uint64_t limit = 1'000'000;     // enumerate cap
    bool forced_prepass = true;
    // Searches one representative per orbit of reorderings of consecutive
    // equal-symbol run factors; counts stay exact via orbit weights.
    bool canonical_runs = false;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Ok;
    bool satisfiable = false;
    std::optional<Factorization> witness;
    BigCount count = 0;
    bool count_overflow = false;
    std::vector<Factorization> factorizations;  // enumerate mode
    std::vector<BigCount> weights;              // parallel to factorizations
    std::uint64_t nodes = 0;
};

SolveResult solve(std::span<const SymId> s, const SolveOptions& opts);
SolveResult solve(const SymString& s, const SolveOptions& opts);
// Raw text: every character is its own symbol (covers the binary a/b format).
SolveResult solve_chars(std::string_view s, const SolveOptions& opts);

// Streaming enumeration; sink returns false to stop early.  Respects budget
// but not `limit` (the sink decides when to stop).
SolveStatus enumerate_stream(std::span<const SymId> s, const SolveOptions& opts,
                             const std::function<bool(const Factorization&, BigCount)>& sink);

// Positions that are single-symbol factors in every palindromic
// factorization: the symbol occurs exactly once and no palindromic substring
// of length >= 2 contains the position.
std::vector<std::size_t> forced_unit_prepass(std::span<const SymId> s);
std::vector<std::size_t> forced_unit_prepass(const SymString& s);

// Independent validator: tiling, palindromicity (two-pointer), k-diversity
// (exact multiset).  Used by tests against every solver output.
bool is_valid_factorization(std::span<const SymId> s, const Factorization& f, std::uint32_t k);

std::vector<SymId> ids_of_chars(std::string_view s);

} // namespace palin
