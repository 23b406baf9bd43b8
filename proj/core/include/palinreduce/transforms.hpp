#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "palinreduce/symbols.hpp"

namespace palin {

// Bijection from the source alphabet onto codewords b a^i b, exponents
// assigned in first-occurrence order.  standard: i in [1..|Sigma|];
// prime: i in [3..|Sigma|+2].
struct DeltaMap {
    bool prime = false;
    // (symbol, exponent), in first-occurrence order.
    std::vector<std::pair<Symbol, std::uint32_t>> codes;

    std::uint32_t exponent_of(const Symbol& s) const;
};

struct BinaryEncoding {
    std::string image;  // over {a, b}
    DeltaMap map;
};

BinaryEncoding delta_encode(const SymString& s, bool prime = false);

std::string delta_map_to_json(const DeltaMap& m);
DeltaMap delta_map_from_json(std::string_view text);

// First 20k characters of (abbaab)^*.
std::string qk_suffix(std::uint32_t k);

// k = 1: delta image; k > 1: prime-variant image with Q_k appended.
BinaryEncoding binary_reduce(const SymString& s, std::uint32_t k);

// The k-diverse expansion: appends a fresh separator pair and then, per
// distinct substring of s of form a / x / x a x, a block
// $1 #1 f $2 #2 f ... $_{k-1} #_{k-1} f $_k #_k with fresh separators.
SymString k_expand(const SymString& s, std::uint32_t k);

// Distinct palindromic substring contents of a raw character string,
// shortest first (test / report helper).
std::vector<std::string> distinct_palindromic_substrings(std::string_view s);

} // namespace palin
