#include "palinreduce/solver.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace palin {

std::string count_to_string(BigCount v) {
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
        out += char('0' + int(v % 10));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

PalindromeTable PalindromeTable::build(std::span<const SymId> s) {
    PalindromeTable t;
    std::size_t n = s.size();
    t.n_ = n;
    t.odd_.assign(n, 0);
    t.even_.assign(n, 0);
    t.run_end_.assign(n, 0);
    t.longs_.assign(n, {});
    if (n == 0) return t;

    // Maximal runs.
    for (std::size_t i = n; i-- > 0;) {
        t.run_end_[i] = (i + 1 < n && s[i + 1] == s[i]) ? t.run_end_[i + 1] : i + 1;
    }
    std::vector<std::uint32_t> run_begin(n);
    for (std::size_t i = 0; i < n; ++i) {
        run_begin[i] = (i > 0 && s[i - 1] == s[i]) ? run_begin[i - 1] : static_cast<std::uint32_t>(i);
    }

    // Manacher, odd centers: odd_[c] = max h with s[c-h..c+h] a palindrome.
    {
        std::size_t l = 0;
        std::ptrdiff_t r = -1;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t k = 1;
            if (static_cast<std::ptrdiff_t>(i) <= r) {
                k = std::min<std::size_t>(t.odd_[l + r - i] + 1, r - i + 1);
            }
            while (i >= k && i + k < n && s[i - k] == s[i + k]) ++k;
            t.odd_[i] = static_cast<std::uint32_t>(k - 1);
            if (static_cast<std::ptrdiff_t>(i + k - 1) > r) {
                l = i - (k - 1);
                r = i + (k - 1);
            }
        }
    }
    // Even centers: even_[c] = max r with s[c-r..c+r-1] a palindrome.
    {
        std::size_t l = 0;
        std::ptrdiff_t r = -1;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t k = 0;
            if (static_cast<std::ptrdiff_t>(i) <= r) {
                k = std::min<std::size_t>(t.even_[l + r - i + 1], r - i + 1);
            }
            while (i >= k + 1 && i + k < n && s[i - k - 1] == s[i + k]) ++k;
            t.even_[i] = static_cast<std::uint32_t>(k);
            if (k > 0 && static_cast<std::ptrdiff_t>(i + k - 1) > r) {
                l = i - k;
                r = i + k - 1;
            }
        }
    }

    // Beyond-run palindromic prefixes, enumerated per center.  Palindromes
    // centered in a run and starting in the same run never leave it, so the
    // scan starts where the start position falls out of the center's run.
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t L = run_begin[c];
        for (std::size_t h = std::max<std::size_t>(1, c - L + 1); h <= t.odd_[c]; ++h) {
            std::size_t start = c - h;
            std::uint32_t len = static_cast<std::uint32_t>(2 * h + 1);
            if (len > t.run_end_[start] - start) t.longs_[start].push_back(len);
        }
    }
    for (std::size_t c = 1; c < n; ++c) {
        if (t.even_[c] == 0) continue;
        std::size_t L = run_begin[c];  // s[c-1] == s[c] here, both in run_begin[c]'s run
        for (std::size_t r = std::max<std::size_t>(1, c - L + 1); r <= t.even_[c]; ++r) {
            std::size_t start = c - r;
            std::uint32_t len = static_cast<std::uint32_t>(2 * r);
            if (len > t.run_end_[start] - start) t.longs_[start].push_back(len);
        }
    }
    for (auto& v : t.longs_) std::sort(v.begin(), v.end());
    return t;
}

bool PalindromeTable::is_palindrome(std::size_t begin, std::size_t end) const {
    if (begin > end || end > n_) return false;
    std::size_t len = end - begin;
    if (len <= 1) return true;
    std::size_t c = begin + len / 2;
    if (len % 2) return odd_[c] >= len / 2;
    return even_[c] >= len / 2;
}

std::vector<SymId> ids_of_chars(std::string_view s) {
    std::vector<SymId> ids;
    ids.reserve(s.size());
    for (char c : s) ids.push_back(static_cast<unsigned char>(c));
    return ids;
}

std::vector<std::size_t> forced_unit_prepass(std::span<const SymId> s) {
    std::size_t n = s.size();
    if (n == 0) return {};

    std::unordered_map<SymId, std::uint32_t> occ;
    for (SymId id : s) ++occ[id];

    // covered[i]: some palindromic substring of length >= 2 contains i.
    // Maximal palindromes per center suffice, since any palindrome of
    // length >= 2 sits inside one of them.
    std::vector<int> diff(n + 1, 0);
    auto mark = [&](std::size_t b, std::size_t e) {  // [b, e]
        ++diff[b];
        --diff[e + 1];
    };
    std::vector<std::size_t> odd(n, 0), even(n, 0);
    {
        std::size_t l = 0;
        std::ptrdiff_t r = -1;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t k = 1;
            if (static_cast<std::ptrdiff_t>(i) <= r) k = std::min<std::size_t>(odd[l + r - i] + 1, r - i + 1);
            while (i >= k && i + k < n && s[i - k] == s[i + k]) ++k;
            odd[i] = k - 1;
            if (static_cast<std::ptrdiff_t>(i + k - 1) > r) {
                l = i - (k - 1);
                r = i + (k - 1);
            }
        }
    }
    {
        std::size_t l = 0;
        std::ptrdiff_t r = -1;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t k = 0;
            if (static_cast<std::ptrdiff_t>(i) <= r) k = std::min<std::size_t>(even[l + r - i + 1], r - i + 1);
            while (i >= k + 1 && i + k < n && s[i - k - 1] == s[i + k]) ++k;
            even[i] = k;
            if (k > 0 && static_cast<std::ptrdiff_t>(i + k - 1) > r) {
                l = i - k;
                r = i + k - 1;
            }
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (odd[c] >= 1) mark(c - odd[c], c + odd[c]);
        if (even[c] >= 1) mark(c - even[c], c + even[c] - 1);
    }

    std::vector<std::size_t> forced;
    int cover = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cover += diff[i];
        if (cover == 0 && occ[s[i]] == 1) forced.push_back(i);
    }
    return forced;
}

std::vector<std::size_t> forced_unit_prepass(const SymString& s) {
    return forced_unit_prepass(std::span<const SymId>(s.seq));
}

namespace {

// Double 61-bit polynomial hashing realizes factor-content comparison
// without per-factor allocation.
constexpr std::uint64_t kMod1 = (1ull << 61) - 1;
constexpr std::uint64_t kMod2 = (1ull << 61) - 129;
constexpr std::uint64_t kBase1 = 0x1f3d5b79a2c4e681ull % kMod1;
constexpr std::uint64_t kBase2 = 0x2b4d6f8191a3c5e7ull % kMod2;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

struct ContentKey {
    std::uint64_t a = 0, b = 0;
    bool operator==(const ContentKey&) const = default;
};
struct ContentKeyHash {
    std::size_t operator()(const ContentKey& k) const {
        std::uint64_t x = k.a * 0x9e3779b97f4a7c15ull ^ (k.b + 0x7f4a7c159e3779b9ull);
        x ^= x >> 29;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 32;
        return static_cast<std::size_t>(x);
    }
};

constexpr BigCount kCountCap = ~BigCount(0) >> 1;

struct Searcher {
    std::span<const SymId> s;
    SolveOptions opts;
    PalindromeTable table;
    std::vector<std::uint64_t> h1, h2, pw1, pw2;
    std::vector<std::uint32_t> max_len;
    std::unordered_map<ContentKey, std::uint32_t, ContentKeyHash> used;

    struct Placed {
        std::uint32_t pos, len;
        ContentKey key;
        bool run_factor;
    };
    std::vector<Placed> path;

    std::uint64_t nodes = 0;
    SolveStatus status = SolveStatus::Ok;

    explicit Searcher(std::span<const SymId> str, const SolveOptions& o) : s(str), opts(o) {
        if (opts.k < 1) throw error("k must be >= 1");
        std::size_t n = s.size();
        table = PalindromeTable::build(s);
        h1.assign(n + 1, 0);
        h2.assign(n + 1, 0);
        pw1.assign(n + 1, 1);
        pw2.assign(n + 1, 1);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t v = s[i] + 1;
            h1[i + 1] = (mulmod(h1[i], kBase1, kMod1) + v) % kMod1;
            h2[i + 1] = (mulmod(h2[i], kBase2, kMod2) + v) % kMod2;
            pw1[i + 1] = mulmod(pw1[i], kBase1, kMod1);
            pw2[i + 1] = mulmod(pw2[i], kBase2, kMod2);
        }

        max_len.assign(n, 0);
        if (opts.forced_prepass) {
            auto forced = forced_unit_prepass(s);
            std::size_t fi = forced.size();
            std::size_t next = n;  // next forced position at or after i
            for (std::size_t i = n; i-- > 0;) {
                while (fi > 0 && forced[fi - 1] >= i) next = forced[--fi];
                if (next == i) max_len[i] = 1;
                else max_len[i] = static_cast<std::uint32_t>(std::min(next, n) - i);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) max_len[i] = static_cast<std::uint32_t>(n - i);
        }
    }

    ContentKey key_of(std::uint32_t b, std::uint32_t len) const {
        std::uint64_t x1 = (h1[b + len] + kMod1 - mulmod(h1[b], pw1[len], kMod1)) % kMod1;
        std::uint64_t x2 = (h2[b + len] + kMod2 - mulmod(h2[b], pw2[len], kMod2)) % kMod2;
        return ContentKey{x1 ^ (std::uint64_t(len) << 48), x2 + len};
    }

    Factorization snapshot() const {
        Factorization f;
        f.spans.reserve(path.size());
        for (const auto& p : path) f.spans.emplace_back(p.pos, p.pos + p.len);
        return f;
    }

    static BigCount factorial_capped(std::size_t m, bool* overflow) {
        BigCount w = 1;
        for (std::size_t i = 2; i <= m; ++i) {
            BigCount next = w * BigCount(i);
            if (next / BigCount(i) != w || next > kCountCap) {
                *overflow = true;
                return kCountCap;
            }
            w = next;
        }
        return w;
    }

    // Orbit size of the canonical representative: per maximal group of
    // consecutive same-symbol run factors, the number of distinct orderings
    // of its lengths (a multiset permutation count once k > 1 allows
    // repeated lengths).
    BigCount leaf_weight(bool* overflow) const {
        if (!opts.canonical_runs) return 1;
        BigCount w = 1;
        std::size_t i = 0;
        while (i < path.size()) {
            if (!path[i].run_factor) {
                ++i;
                continue;
            }
            SymId id = s[path[i].pos];
            std::size_t j = i + 1;
            while (j < path.size() && path[j].run_factor && s[path[j].pos] == id) ++j;
            std::size_t m = j - i;
            if (m > 1) {
                BigCount group = factorial_capped(m, overflow);
                for (std::size_t p = i; p < j;) {
                    std::size_t q = p + 1;
                    while (q < j && path[q].len == path[p].len) ++q;
                    group /= factorial_capped(q - p, overflow);  // lengths ascend, equals adjacent
                    p = q;
                }
                BigCount next = w * group;
                if (group != 0 && (next / group != w || next > kCountCap)) {
                    *overflow = true;
                    return kCountCap;
                }
                w = next;
            }
            i = j;
        }
        return w;
    }

    struct Frame {
        std::uint32_t pos;
        std::uint32_t next_run_len;  // next run candidate, 0 when exhausted
        std::uint32_t run_max;
        std::uint32_t long_idx;
        bool placed;
    };

    bool place(std::uint32_t pos, std::uint32_t len, bool run_factor) {
        ContentKey k = key_of(pos, len);
        auto& cnt = used[k];
        if (cnt >= opts.k) {
            if (cnt == 0) used.erase(k);
            return false;
        }
        ++cnt;
        path.push_back({pos, len, k, run_factor});
        return true;
    }

    void unplace() {
        const Placed& p = path.back();
        auto it = used.find(p.key);
        if (--it->second == 0) used.erase(it);
        path.pop_back();
    }

    // Runs the DFS; leaf() is called at each complete factorization and
    // returns false to stop the whole search.
    template <typename Leaf>
    void run(Leaf&& leaf) {
        std::size_t n = s.size();
        if (n == 0) {
            bool ov = false;
            leaf(BigCount(1), &ov);
            return;
        }

        std::vector<Frame> stack;
        stack.reserve(n + 1);
        auto make_frame = [&](std::uint32_t pos) {
            Frame f;
            f.pos = pos;
            f.run_max = std::min<std::uint32_t>(
                static_cast<std::uint32_t>(table.run_end(pos) - pos), max_len[pos]);
            f.next_run_len = 1;
            if (opts.canonical_runs && !path.empty()) {
                const Placed& prev = path.back();
                if (prev.run_factor && s[prev.pos] == s[pos]) {
                    // ascending order within a maximal run; equal lengths are
                    // impossible anyway under diversity
                    f.next_run_len = prev.len;
                }
            }
            if (f.next_run_len > f.run_max) f.next_run_len = 0;
            f.long_idx = 0;
            f.placed = false;
            return f;
        };
        stack.push_back(make_frame(0));

        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.placed) {
                unplace();
                f.placed = false;
            }

            // Next candidate at f.pos.
            std::uint32_t len = 0;
            bool run_factor = false;
            while (true) {
                if (f.next_run_len != 0) {
                    len = f.next_run_len;
                    run_factor = true;
                    f.next_run_len = (f.next_run_len < f.run_max) ? f.next_run_len + 1 : 0;
                } else {
                    const auto& longs = table.long_candidates(f.pos);
                    if (f.long_idx >= longs.size() || longs[f.long_idx] > max_len[f.pos]) {
                        len = 0;
                        break;
                    }
                    len = longs[f.long_idx++];
                    run_factor = false;
                }
                if (place(f.pos, len, run_factor)) break;
            }
            if (len == 0) {
                stack.pop_back();
                continue;
            }
            f.placed = true;

            if (++nodes > opts.budget) {
                status = SolveStatus::BudgetExceeded;
                break;
            }

            std::uint32_t next = f.pos + len;
            if (next == n) {
                bool ov = false;
                BigCount w = leaf_weight(&ov);
                if (!leaf(w, &ov)) break;
                // stay on this frame; placement undone on next iteration
            } else {
                stack.push_back(make_frame(next));
            }
        }

        while (!path.empty()) unplace();
    }
};

} // namespace

SolveResult solve(std::span<const SymId> s, const SolveOptions& opts) {
    SolveResult r;
    Searcher search(s, opts);
    std::uint64_t emitted = 0;
    bool limit_hit = false;

    switch (opts.mode) {
        case SolveMode::Decide:
            search.run([&](BigCount, bool*) {
                r.satisfiable = true;
                return false;
            });
            break;
        case SolveMode::Witness:
            search.run([&](BigCount, bool*) {
                r.satisfiable = true;
                r.witness = search.snapshot();
                return false;
            });
            break;
        case SolveMode::Count:
            search.run([&](BigCount w, bool* ov) {
                if (*ov) r.count_overflow = true;
                if (r.count > kCountCap - w) {
                    r.count_overflow = true;
                    r.count = kCountCap;
                } else {
                    r.count += w;
                }
                return true;
            });
            r.satisfiable = r.count > 0;
            break;
        case SolveMode::Enumerate:
            search.run([&](BigCount w, bool* ov) {
                if (*ov) r.count_overflow = true;
                if (emitted == opts.limit) {
                    limit_hit = true;
                    return false;
                }
                r.factorizations.push_back(search.snapshot());
                r.weights.push_back(w);
                ++emitted;
                return true;
            });
            r.satisfiable = !r.factorizations.empty();
            break;
    }

    r.nodes = search.nodes;
    if (search.status != SolveStatus::Ok) r.status = search.status;
    else if (limit_hit) r.status = SolveStatus::LimitExceeded;
    return r;
}

SolveResult solve(const SymString& s, const SolveOptions& opts) {
    return solve(std::span<const SymId>(s.seq), opts);
}

SolveResult solve_chars(std::string_view s, const SolveOptions& opts) {
    auto ids = ids_of_chars(s);
    return solve(std::span<const SymId>(ids), opts);
}

SolveStatus enumerate_stream(std::span<const SymId> s, const SolveOptions& opts,
                             const std::function<bool(const Factorization&, BigCount)>& sink) {
    Searcher search(s, opts);
    search.run([&](BigCount w, bool*) { return sink(search.snapshot(), w); });
    return search.status;
}

bool is_valid_factorization(std::span<const SymId> s, const Factorization& f, std::uint32_t k) {
    std::size_t at = 0;
    std::map<std::vector<SymId>, std::uint32_t> counts;
    for (const auto& [b, e] : f.spans) {
        if (b != at || e <= b || e > s.size()) return false;
        at = e;
        for (std::size_t i = b, j = e - 1; i < j; ++i, --j) {
            if (s[i] != s[j]) return false;
        }
        std::vector<SymId> content(s.begin() + b, s.begin() + e);
        if (++counts[content] > k) return false;
    }
    return at == s.size();
}

} // namespace palin
