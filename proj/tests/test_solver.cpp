#include <doctest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "palinreduce/solver.hpp"

using namespace palin;

namespace {

std::vector<SymId> rand_ids(std::mt19937& rng, std::size_t n, int alphabet) {
    std::uniform_int_distribution<SymId> d(0, alphabet - 1);
    std::vector<SymId> s(n);
    for (auto& c : s) c = d(rng);
    return s;
}

SolveResult count_of(std::string_view s, std::uint32_t k = 1, bool canonical = true) {
    SolveOptions o;
    o.k = k;
    o.mode = SolveMode::Count;
    o.canonical_runs = canonical;
    return solve_chars(s, o);
}

} // namespace

TEST_CASE("palindrome table agrees with the naive check") {
    std::mt19937 rng(42);
    for (int iter = 0; iter < 40; ++iter) {
        std::size_t n = 1 + rng() % 200;
        int alpha = 1 + int(rng() % 3);
        auto s = rand_ids(rng, n, alpha);
        PalindromeTable t = PalindromeTable::build(s);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j <= n; ++j) {
                bool naive = true;
                for (std::size_t p = i, q = j - 1; p < q; ++p, --q) {
                    if (s[p] != s[q]) {
                        naive = false;
                        break;
                    }
                }
                if (t.is_palindrome(i, j) != naive) {
                    CAPTURE(i);
                    CAPTURE(j);
                    REQUIRE(t.is_palindrome(i, j) == naive);
                }
            }
        }
    }
}

TEST_CASE("candidate lists cover exactly the palindromic prefixes") {
    std::mt19937 rng(43);
    for (int iter = 0; iter < 30; ++iter) {
        std::size_t n = 1 + rng() % 120;
        auto s = rand_ids(rng, n, 2 + int(rng() % 2));
        PalindromeTable t = PalindromeTable::build(s);
        for (std::size_t i = 0; i < n; ++i) {
            std::set<std::uint32_t> got;
            for (std::uint32_t l = 1; l <= t.run_end(i) - i; ++l) got.insert(l);
            for (auto l : t.long_candidates(i)) got.insert(l);
            std::set<std::uint32_t> want;
            for (std::size_t j = i + 1; j <= n; ++j) {
                if (t.is_palindrome(i, j)) want.insert(static_cast<std::uint32_t>(j - i));
            }
            REQUIRE(got == want);
        }
    }
}

TEST_CASE("the three worked single-letter examples") {
    SolveResult a = count_of("bgikkpps");
    CHECK(a.count == 1);
    SolveResult b = count_of("bgikpspk");
    CHECK(b.count == 1);
    SolveResult c = count_of("bgkpispk");
    CHECK(c.count == 0);

    SolveOptions wo;
    wo.mode = SolveMode::Witness;
    auto w = solve_chars("bgikkpps", wo);
    REQUIRE(w.witness.has_value());
    Factorization expect{{{0, 1}, {1, 2}, {2, 3}, {3, 5}, {5, 7}, {7, 8}}};
    CHECK(*w.witness == expect);

    auto w2 = solve_chars("bgikpspk", wo);
    REQUIRE(w2.witness.has_value());
    Factorization expect2{{{0, 1}, {1, 2}, {2, 3}, {3, 8}}};
    CHECK(*w2.witness == expect2);
}

TEST_CASE("degenerate strings") {
    CHECK(count_of("aa").count == 1);   // (a)(a) repeats; only (aa)
    CHECK(count_of("").count == 1);     // the empty factorization
    CHECK(count_of("a").count == 1);
    CHECK(count_of("ab").count == 1);
    CHECK(count_of("aba").count == 1);  // (a|b|a) repeats a
    CHECK(count_of("aba", 2).count == 2);
}

TEST_CASE("enumeration is lexicographic by span, limit is flagged") {
    SolveOptions o;
    o.mode = SolveMode::Enumerate;
    o.limit = 10;
    auto r = solve_chars("aaa", o);
    REQUIRE(r.factorizations.size() == 3);
    CHECK(r.factorizations[0] == Factorization{{{0, 1}, {1, 3}}});
    CHECK(r.factorizations[1] == Factorization{{{0, 2}, {2, 3}}});
    CHECK(r.factorizations[2] == Factorization{{{0, 3}}});
    CHECK(r.status == SolveStatus::Ok);

    o.limit = 2;
    auto r2 = solve_chars("aaa", o);
    CHECK(r2.factorizations.size() == 2);
    CHECK(r2.status == SolveStatus::LimitExceeded);
}

TEST_CASE("solver count equals the naive oracle on small exhaustive families") {
    SolveOptions o;
    o.mode = SolveMode::Count;

    // binary strings up to length 10 (acceptance sweeps to 14)
    for (std::size_t n = 0; n <= 10; ++n) {
        for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
            std::vector<SymId> s(n);
            for (std::size_t i = 0; i < n; ++i) s[i] = (bits >> i) & 1;
            for (std::uint32_t k : {1u, 2u}) {
                o.k = k;
                o.canonical_runs = (n % 2) == 0;  // alternate both engines
                auto r = solve(std::span<const SymId>(s), o);
                auto want = testutil::naive_count(s, k);
                if (BigCount(want) != r.count) {
                    CAPTURE(n);
                    CAPTURE(bits);
                    CAPTURE(k);
                    REQUIRE(BigCount(want) == r.count);
                }
            }
        }
    }

    // ternary strings up to length 7
    o.k = 1;
    for (std::size_t n = 0; n <= 7; ++n) {
        std::vector<SymId> s(n);
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= 3;
        for (std::uint64_t v = 0; v < total; ++v) {
            std::uint64_t x = v;
            for (std::size_t i = 0; i < n; ++i) {
                s[i] = x % 3;
                x /= 3;
            }
            o.canonical_runs = (v % 2) == 0;
            auto r = solve(std::span<const SymId>(s), o);
            auto want = testutil::naive_count(s, 1);
            if (BigCount(want) != r.count) {
                CAPTURE(n);
                CAPTURE(v);
                REQUIRE(BigCount(want) == r.count);
            }
        }
    }
}

TEST_CASE("count is monotone in k") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        auto s = rand_ids(rng, 1 + rng() % 11, 2 + int(rng() % 2));
        SolveOptions o;
        o.mode = SolveMode::Count;
        BigCount prev = 0;
        for (std::uint32_t k = 1; k <= 3; ++k) {
            o.k = k;
            auto r = solve(std::span<const SymId>(s), o);
            CHECK(r.count >= prev);
            prev = r.count;
        }
    }
}

TEST_CASE("every enumerated factorization passes the independent validator") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 60; ++iter) {
        auto s = rand_ids(rng, 1 + rng() % 12, 2 + int(rng() % 2));
        SolveOptions o;
        o.mode = SolveMode::Enumerate;
        o.limit = 100000;
        o.k = 1 + (iter % 3);
        auto r = solve(std::span<const SymId>(s), o);
        for (const auto& f : r.factorizations) {
            REQUIRE(is_valid_factorization(s, f, o.k));
        }
    }
}

TEST_CASE("canonical run classes reproduce raw counts with exact weights") {
    std::mt19937 rng(13);
    for (int iter = 0; iter < 40; ++iter) {
        auto s = rand_ids(rng, 1 + rng() % 14, 1 + int(rng() % 2));  // run-heavy
        SolveOptions raw, canon;
        raw.mode = canon.mode = SolveMode::Count;
        raw.k = canon.k = 1 + (iter % 2);
        raw.canonical_runs = false;
        canon.canonical_runs = true;
        auto a = solve(std::span<const SymId>(s), raw);
        auto b = solve(std::span<const SymId>(s), canon);
        CHECK(a.count == b.count);
        CHECK(b.nodes <= a.nodes);
    }
}

TEST_CASE("forced-unit prepass identifies exactly the provable singletons") {
    auto f1 = forced_unit_prepass(ids_of_chars("aba"));
    CHECK(f1.empty());  // b sits inside the palindrome aba

    auto f2 = forced_unit_prepass(ids_of_chars("ab"));
    CHECK(f2 == std::vector<std::size_t>{0, 1});

    auto f3 = forced_unit_prepass(ids_of_chars("abc"));
    CHECK(f3 == std::vector<std::size_t>{0, 1, 2});

    auto f4 = forced_unit_prepass(ids_of_chars("aabc"));
    CHECK(f4 == std::vector<std::size_t>{2, 3});  // aa covers positions 0-1
}

TEST_CASE("prepass and canonical modes never change decide/count") {
    std::mt19937 rng(17);
    for (int iter = 0; iter < 60; ++iter) {
        auto s = rand_ids(rng, 1 + rng() % 12, 2 + int(rng() % 4));
        BigCount counts[4];
        int i = 0;
        for (bool pre : {false, true}) {
            for (bool canon : {false, true}) {
                SolveOptions o;
                o.mode = SolveMode::Count;
                o.forced_prepass = pre;
                o.canonical_runs = canon;
                counts[i++] = solve(std::span<const SymId>(s), o).count;
            }
        }
        CHECK(counts[0] == counts[1]);
        CHECK(counts[0] == counts[2]);
        CHECK(counts[0] == counts[3]);
    }
}

TEST_CASE("budget exhaustion is reported distinctly") {
    std::vector<SymId> s(40, 0);  // a^40 has a huge factorization count
    SolveOptions o;
    o.mode = SolveMode::Count;
    o.budget = 50;
    auto r = solve(std::span<const SymId>(s), o);
    CHECK(r.status == SolveStatus::BudgetExceeded);
    CHECK(r.nodes > 0);

    o.budget = 100'000'000;
    o.mode = SolveMode::Decide;
    auto r2 = solve(std::span<const SymId>(s), o);
    CHECK(r2.status == SolveStatus::Ok);
    CHECK(r2.satisfiable);
}

TEST_CASE("k must be positive") {
    SolveOptions o;
    o.k = 0;
    CHECK_THROWS_AS(solve_chars("ab", o), error);
}
