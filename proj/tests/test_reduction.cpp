#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "palinreduce/reduction.hpp"
#include "palinreduce/solver.hpp"

using namespace palin;

namespace {

Circuit not_circuit() {
    return desugar(parse_circuit("input a\nsplit a -> a1 a2\nnand a1 a2 -> g\noutput g"));
}

// Token-text builder mirroring the formulas, for byte-exact goldens.
struct Text {
    std::string s;
    Text& tok(const std::string& t) {
        if (!s.empty()) s += ' ';
        s += t;
        return *this;
    }
    Text& rep(const std::string& t, int n) {
        for (int i = 0; i < n; ++i) tok(t);
        return *this;
    }
    Text& sep(int serial) {
        tok("$" + std::to_string(serial));
        tok("#" + std::to_string(serial));
        return *this;
    }
};

} // namespace

TEST_CASE("first add-wire block is the bare 5-symbol string") {
    ReductionState st;
    st.emit_add_wire("a");
    CHECK(serialize(st.str()) == "x.a a x.a ~a x.a");
    CHECK(st.str().size() == 5);
}

TEST_CASE("later add-wire blocks are preceded by a fresh separator pair") {
    ReductionState st;
    st.emit_add_wire("a");
    st.emit_add_wire("b");
    CHECK(serialize(st.str()) == "x.a a x.a ~a x.a $1 #1 x.b b x.b ~b x.b");
}

TEST_CASE("the add-wire block has exactly the paper's two diverse factorizations") {
    ReductionState st;
    st.emit_add_wire("a");
    SolveOptions o;
    o.mode = SolveMode::Enumerate;
    auto r = solve(st.str(), o);
    REQUIRE(r.factorizations.size() == 2);
    // (x_a, a, x_a ~a x_a) and (x_a a x_a, ~a, x_a)
    CHECK(r.factorizations[0] == Factorization{{{0, 1}, {1, 2}, {2, 5}}});
    CHECK(r.factorizations[1] == Factorization{{{0, 3}, {3, 4}, {4, 5}}});
}

TEST_CASE("split gadget emits the four blocks byte-exactly") {
    ReductionState st;
    st.emit_add_wire("a");
    st.emit_split("a", "b", "c");

    Text want;
    want.tok("x.a").tok("a").tok("x.a").tok("~a").tok("x.a");
    want.sep(1)
        .rep("x.a", 3).tok("b'").tok("x.a").tok("a").tok("x.a").tok("c'").rep("x.a", 5);
    want.sep(2)
        .rep("x.a", 7).tok("~b'").tok("x.a").tok("~a").tok("x.a").tok("~c'").rep("x.a", 9);
    want.sep(3)
        .tok("x.b").tok("b").tok("x.b").tok("b'").tok("x.b").tok("~b'").tok("x.b").tok("~b").tok("x.b");
    want.sep(4)
        .tok("x.c").tok("c").tok("x.c").tok("c'").tok("x.c").tok("~c'").tok("x.c").tok("~c").tok("x.c");

    CHECK(serialize(st.str()) == want.s);
    // 5 for the wire block, then (2+13) + (2+21) + (2+9) + (2+9) = 60
    CHECK(st.str().size() == 65);
}

TEST_CASE("split records spans and auxiliary tags in the manifest") {
    ReductionState st;
    st.emit_add_wire("a");
    st.emit_split("a", "b", "c");
    const Manifest& m = st.manifest();
    REQUIRE(m.steps.size() == 2);
    const SplitSpans& sp = m.steps[1].split;
    CHECK(sp.begin == 5);
    CHECK(sp.b1_begin == 7);
    CHECK(sp.b1_end == 20);
    CHECK(sp.b2_begin == 22);
    CHECK(sp.b2_end == 43);
    CHECK(sp.bb_begin == 45);
    CHECK(sp.bb_end == 54);
    CHECK(sp.bc_begin == 56);
    CHECK(sp.bc_end == 65);
    CHECK(sp.aux1 == "b'");
    CHECK(sp.aux2 == "c'");
    CHECK(st.live() == std::set<std::string>{"b", "c"});
}

TEST_CASE("split preconditions are enforced") {
    ReductionState st;
    st.emit_add_wire("a");
    CHECK_THROWS_AS(st.emit_split("z", "b", "c"), error);   // not live
    st.emit_split("a", "b", "c");
    CHECK_THROWS_AS(st.emit_split("a", "d", "e"), error);   // consumed
    CHECK_THROWS_AS(st.emit_split("b", "c", "c2"), error);  // label collision
    CHECK_THROWS_AS(st.emit_add_wire("b"), error);          // duplicate wire
}

TEST_CASE("nand gadget runs carry the odd exponent ladder 3..25") {
    Circuit c = not_circuit();
    Reduction red = reduce(c);
    const NandSpans& nd = red.manifest.steps[2].nand;

    // maximal x_{c'} runs of length > 1 inside the gadget blocks, in order
    SymId x = nd.cp_x;
    std::vector<int> runs;
    const auto& seq = red.s.seq;
    for (std::uint32_t i = nd.inner.end; i < nd.end;) {
        if (seq[i] != x) {
            ++i;
            continue;
        }
        std::uint32_t j = i;
        while (j < nd.end && seq[j] == x) ++j;
        if (j - i > 1) runs.push_back(static_cast<int>(j - i));
        i = j;
    }
    CHECK(runs == std::vector<int>{3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25});
}

TEST_CASE("nand gadget emits the seven blocks byte-exactly") {
    ReductionState st;
    st.emit_add_wire("p");
    st.emit_add_wire("q");
    st.emit_nand("p", "q", "r");

    // internal split of p into p_n1, p_n2 (aux p_n1', p_n2'), then the
    // gadget over x.r' with aux p_n1'', p_n2'', q', r', r'', r_d
    Text want;
    want.tok("x.p").tok("p").tok("x.p").tok("~p").tok("x.p");
    want.sep(1).tok("x.q").tok("q").tok("x.q").tok("~q").tok("x.q");
    // split p -> p_n1 p_n2
    want.sep(2)
        .rep("x.p", 3).tok("p_n1'").tok("x.p").tok("p").tok("x.p").tok("p_n2'").rep("x.p", 5);
    want.sep(3)
        .rep("x.p", 7).tok("~p_n1'").tok("x.p").tok("~p").tok("x.p").tok("~p_n2'").rep("x.p", 9);
    want.sep(4)
        .tok("x.p_n1").tok("p_n1").tok("x.p_n1").tok("p_n1'").tok("x.p_n1").tok("~p_n1'")
        .tok("x.p_n1").tok("~p_n1").tok("x.p_n1");
    want.sep(5)
        .tok("x.p_n2").tok("p_n2").tok("x.p_n2").tok("p_n2'").tok("x.p_n2").tok("~p_n2'")
        .tok("x.p_n2").tok("~p_n2").tok("x.p_n2");
    // block A
    want.sep(6)
        .rep("x.r'", 3).tok("p_n1''").tok("x.r'").tok("p_n1").tok("x.r'").tok("~p_n1")
        .tok("x.r'").tok("~p_n1''").rep("x.r'", 5);
    // block B
    want.sep(7)
        .rep("x.r'", 7).tok("p_n2''").tok("x.r'").tok("p_n2").tok("x.r'").tok("~p_n2")
        .tok("x.r'").tok("~p_n2''").rep("x.r'", 9);
    // block C
    want.sep(8)
        .rep("x.r'", 11).tok("q'").tok("x.r'").tok("q").tok("x.r'").tok("~q")
        .tok("x.r'").tok("~q'").rep("x.r'", 13);
    // block D
    want.sep(9)
        .rep("x.r'", 15).tok("~p_n1''").tok("x.r'").tok("r'").tok("x.r'").tok("~q'")
        .rep("x.r'", 17);
    // block E
    want.sep(10)
        .rep("x.r'", 19).tok("~p_n2''").tok("x.r'").tok("r_d").tok("x.r'").tok("q'")
        .rep("x.r'", 21);
    // block F
    want.sep(11)
        .rep("x.r'", 23).tok("r''").tok("x.r'").tok("r'").tok("x.r'").tok("~r'")
        .tok("x.r'").tok("~r''").rep("x.r'", 25);
    // final wire block
    want.sep(12)
        .tok("x.r").tok("r").tok("x.r").tok("r''").tok("x.r").tok("~r''")
        .tok("x.r").tok("~r").tok("x.r");

    CHECK(serialize(st.str()) == want.s);
    CHECK(st.live() == std::set<std::string>{"r"});
}

TEST_CASE("nand preconditions are enforced") {
    ReductionState st;
    st.emit_add_wire("a");
    st.emit_add_wire("b");
    CHECK_THROWS_AS(st.emit_nand("a", "a", "g"), error);  // distinct operands required
    CHECK_THROWS_AS(st.emit_nand("a", "z", "g"), error);  // not live
    st.emit_nand("a", "b", "g");
    CHECK_THROWS_AS(st.emit_nand("a", "b", "h"), error);  // consumed
}

TEST_CASE("clamp appends a separator pair and x w x") {
    ReductionState st;
    st.emit_add_wire("a");
    const SymString& s = st.clamp_output("a");
    CHECK(serialize(s) == "x.a a x.a ~a x.a $1 #1 x.a a x.a");
    CHECK(s.size() == 10);

    // satisfiable: the wire can be true
    SolveOptions o;
    o.mode = SolveMode::Witness;
    auto r = solve(s, o);
    REQUIRE(r.satisfiable);
    CHECK(is_valid_factorization(std::span<const SymId>(s.seq), *r.witness, 1));
}

TEST_CASE("clamp requires exactly one live output") {
    ReductionState st;
    st.emit_add_wire("a");
    st.emit_add_wire("b");
    CHECK_THROWS_AS(st.clamp_output("a"), error);

    ReductionState st2;
    st2.emit_add_wire("a");
    st2.emit_split("a", "b", "c");
    CHECK_THROWS_AS(st2.clamp_output("b"), error);
}

TEST_CASE("reduce is deterministic and linear in the step count") {
    Circuit c = not_circuit();
    Reduction r1 = reduce(c);
    Reduction r2 = reduce(c);
    CHECK(serialize(r1.s) == serialize(r2.s));
    CHECK(manifest_to_json(r1.manifest) == manifest_to_json(r2.manifest));

    // measured gadget sizes: add <= 7, split 60, nand 289, clamp 5
    CHECK(r1.s.size() == 5 + 60 + 289 + 5);
    for (const char* src :
         {"input a\noutput a", "input a\ninput b\nand a b -> g\noutput g",
          "input a\nnot a -> na\nand a na -> g\noutput g"}) {
        Circuit ci = desugar(parse_circuit(src));
        Reduction red = reduce(ci);
        CHECK(red.s.size() <= 289 * ci.steps.size() + 5);
    }
}

TEST_CASE("separators appear exactly once, as adjacent pairs") {
    for (const char* src :
         {"input a\nsplit a -> a1 a2\nnand a1 a2 -> g\noutput g",
          "input a\ninput b\nand a b -> g\noutput g",
          "input a\nnot a -> na\nand a na -> g\noutput g"}) {
        Reduction red = reduce(desugar(parse_circuit(src)));
        const SymString& s = red.s;
        std::map<std::uint32_t, int> dollar_count, hash_count;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const Symbol& sym = s.symbol_at(i);
            if (sym.role == Role::Dollar) {
                ++dollar_count[sym.serial];
                REQUIRE(i + 1 < s.size());
                const Symbol& next = s.symbol_at(i + 1);
                CHECK(next.role == Role::Hash);
                CHECK(next.serial == sym.serial);
            } else if (sym.role == Role::Hash) {
                ++hash_count[sym.serial];
            }
        }
        for (const auto& [serial, n] : dollar_count) CHECK(n == 1);
        for (const auto& [serial, n] : hash_count) CHECK(n == 1);
        CHECK(dollar_count.size() == hash_count.size());
    }
}

TEST_CASE("every separator position in a reduction output is forced") {
    Reduction red = reduce(not_circuit());
    auto forced = forced_unit_prepass(red.s);
    std::set<std::size_t> forced_set(forced.begin(), forced.end());
    for (std::size_t i = 0; i < red.s.size(); ++i) {
        if (is_separator(red.s.symbol_at(i).role)) {
            CHECK(forced_set.count(i) == 1);
        }
    }
}

TEST_CASE("split string after one add-wire has exactly six diverse factorizations") {
    ReductionState st;
    st.emit_add_wire("a");
    st.emit_split("a", "b", "c");
    SolveOptions o;
    o.mode = SolveMode::Count;
    CHECK(solve(st.str(), o).count == 6);

    // and the S_i' prefix (through block 2) also has six
    const SplitSpans& sp = st.manifest().steps[1].split;
    std::span<const SymId> prefix(st.str().seq.data(), sp.b2_end);
    CHECK(solve(prefix, o).count == 6);
}

TEST_CASE("manifest JSON round-trips") {
    Reduction red = reduce(not_circuit());
    std::string j = manifest_to_json(red.manifest);
    Manifest m2 = manifest_from_json(j);
    CHECK(manifest_to_json(m2) == j);
}
