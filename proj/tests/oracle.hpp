#pragma once

// Exhaustive factorization oracle for small strings.  Independent of the
// solver: boundary bitmasks, two-pointer palindrome checks, exact content
// multisets.  Exponential; keep n small.

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "palinreduce/symbols.hpp"

namespace testutil {

inline std::uint64_t naive_count(std::span<const palin::SymId> s, std::uint32_t k) {
    std::size_t n = s.size();
    if (n == 0) return 1;
    if (n > 24) throw std::runtime_error("naive_count: string too long");

    std::uint64_t total = 0;
    for (std::uint64_t mask = 0; mask < (1ull << (n - 1)); ++mask) {
        std::map<std::vector<palin::SymId>, std::uint32_t> counts;
        bool ok = true;
        std::size_t start = 0;
        for (std::size_t i = 0; ok && i < n; ++i) {
            bool boundary = (i == n - 1) || ((mask >> i) & 1);
            if (!boundary) continue;
            std::size_t b = start, e = i + 1;
            for (std::size_t p = b, q = e - 1; p < q; ++p, --q) {
                if (s[p] != s[q]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
            std::vector<palin::SymId> content(s.begin() + b, s.begin() + e);
            if (++counts[content] > k) ok = false;
            start = e;
        }
        if (ok) ++total;
    }
    return total;
}

inline std::uint64_t naive_count_chars(std::string_view s, std::uint32_t k) {
    std::vector<palin::SymId> ids;
    for (char c : s) ids.push_back(static_cast<unsigned char>(c));
    return naive_count(ids, k);
}

} // namespace testutil
