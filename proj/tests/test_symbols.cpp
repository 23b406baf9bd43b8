#include <doctest.h>

#include <random>

#include "palinreduce/symbols.hpp"

using namespace palin;

TEST_CASE("first wire triple gets ids 0,1,2") {
    SymbolPool pool;
    auto t = pool.fresh_wire_symbols("a");
    CHECK(t.plain == 0);
    CHECK(t.bar == 1);
    CHECK(t.x == 2);
    CHECK(pool.at(t.plain) == Symbol{Role::Plain, "a", 0});
    CHECK(pool.at(t.bar) == Symbol{Role::Bar, "a", 0});
    CHECK(pool.at(t.x) == Symbol{Role::X, "a", 0});
}

TEST_CASE("duplicate tag registration fails") {
    SymbolPool pool;
    pool.fresh_wire_symbols("a");
    CHECK_THROWS_WITH_AS(pool.fresh_wire_symbols("a"), "duplicate tag: a", error);
    CHECK_THROWS_AS(pool.fresh_aux_symbols("a"), error);
}

TEST_CASE("distinct tags give disjoint triples") {
    SymbolPool pool;
    auto a = pool.fresh_wire_symbols("a");
    auto b = pool.fresh_wire_symbols("b");
    CHECK(a.plain != b.plain);
    CHECK(a.bar != b.bar);
    CHECK(a.x != b.x);
}

TEST_CASE("separator serials count up and stay distinct") {
    SymbolPool pool;
    auto p1 = pool.fresh_separator_pair();
    auto p2 = pool.fresh_separator_pair();
    CHECK(p1.serial == 1);
    CHECK(p2.serial == 2);
    CHECK(p1.dollar != p2.dollar);
    CHECK(p1.hash != p2.hash);
    CHECK(p1.dollar != p1.hash);

    SymbolPool big;
    std::vector<SymId> seen;
    for (int i = 0; i < 1000; ++i) {
        auto p = big.fresh_separator_pair();
        seen.push_back(p.dollar);
        seen.push_back(p.hash);
    }
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("primed tag escalates past registered names") {
    SymbolPool pool;
    CHECK(pool.fresh_primed_tag("b") == "b'");
    pool.fresh_aux_symbols("b'");
    CHECK(pool.fresh_primed_tag("b") == "b''");
}

TEST_CASE("token rendering of the add-wire block") {
    SymString s;
    auto t = s.pool.fresh_wire_symbols("a");
    s.seq = {t.x, t.plain, t.x, t.bar, t.x};
    CHECK(serialize(s) == "x.a a x.a ~a x.a");
}

TEST_CASE("separator pair parses by serial") {
    SymString s = parse_symstring("$1 #1");
    REQUIRE(s.size() == 2);
    CHECK(s.symbol_at(0) == Symbol{Role::Dollar, "", 1});
    CHECK(s.symbol_at(1) == Symbol{Role::Hash, "", 1});
}

TEST_CASE("malformed tokens are rejected") {
    CHECK_THROWS_AS(parse_symstring("x.a ^a"), error);
    CHECK_THROWS_AS(parse_symstring("$0"), error);
    CHECK_THROWS_AS(parse_symstring("$x"), error);
    CHECK_THROWS_AS(parse_symstring("x."), error);
    CHECK_THROWS_AS(parse_symstring("~"), error);
    CHECK_THROWS_AS(parse_symstring("1abc"), error);
}

TEST_CASE("header line is accepted and version-checked") {
    SymString s = parse_symstring("palinreduce-symstring v1\nx.a a");
    CHECK(s.size() == 2);
    CHECK_THROWS_AS(parse_symstring("palinreduce-symstring v9\nx.a"), error);
}

namespace {

SymString random_symstring(std::mt19937& rng) {
    SymString s;
    static const char* tags[] = {"a", "b", "c'", "a_1", "w_n1''", "d"};
    std::vector<SymId> ids;
    for (const char* t : tags) {
        auto w = s.pool.fresh_wire_symbols(t);
        ids.push_back(w.plain);
        ids.push_back(w.bar);
        ids.push_back(w.x);
    }
    for (int i = 0; i < 4; ++i) {
        auto p = s.pool.fresh_separator_pair();
        ids.push_back(p.dollar);
        ids.push_back(p.hash);
    }
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    std::uniform_int_distribution<int> len(0, 60);
    int n = len(rng);
    for (int i = 0; i < n; ++i) s.seq.push_back(ids[pick(rng)]);
    return s;
}

} // namespace

TEST_CASE("serialization round-trips (text and JSON)") {
    std::mt19937 rng(12345);
    for (int iter = 0; iter < 200; ++iter) {
        SymString s = random_symstring(rng);
        SymString s2 = parse_symstring(serialize(s));
        CHECK(symbols_equal(s, s2));
        SymString s3 = symstring_from_json(symstring_to_json(s));
        CHECK(symbols_equal(s, s3));
    }
}
