// Scratch measurements for sizing the verification strategy.  Not a test.
#include <chrono>
#include <iostream>

#include "palinreduce/circuit.hpp"
#include "palinreduce/reduction.hpp"
#include "palinreduce/solver.hpp"
#include "palinreduce/transforms.hpp"

using namespace palin;
using Clock = std::chrono::steady_clock;

static double secs(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

static void measure_count(const char* name, std::span<const SymId> s, std::uint32_t k,
                          bool canonical) {
    SolveOptions o;
    o.k = k;
    o.mode = SolveMode::Count;
    o.canonical_runs = canonical;
    o.budget = 2'000'000'000ull;
    auto t0 = Clock::now();
    auto r = solve(s, o);
    auto t1 = Clock::now();
    std::cout << name << ": n=" << s.size() << " count=" << count_to_string(r.count)
              << (r.count_overflow ? "+" : "") << " nodes=" << r.nodes
              << " status=" << int(r.status) << " time=" << secs(t0, t1) << "s\n";
    std::cout.flush();
}

static void measure_classes(const char* name, std::span<const SymId> s, std::uint32_t k) {
    SolveOptions o;
    o.k = k;
    o.mode = SolveMode::Count;
    o.canonical_runs = true;
    o.budget = 2'000'000'000ull;
    std::uint64_t classes = 0;
    auto t0 = Clock::now();
    auto st = enumerate_stream(s, o, [&](const Factorization&, BigCount) {
        ++classes;
        return true;
    });
    auto t1 = Clock::now();
    std::cout << name << ": n=" << s.size() << " classes=" << classes
              << " status=" << int(st) << " time=" << secs(t0, t1) << "s\n";
    std::cout.flush();
}

static void measure_decide(const char* name, std::span<const SymId> s, std::uint32_t k) {
    SolveOptions o;
    o.k = k;
    o.mode = SolveMode::Decide;
    o.canonical_runs = true;
    o.budget = 2'000'000'000ull;
    auto t0 = Clock::now();
    auto r = solve(s, o);
    auto t1 = Clock::now();
    std::cout << name << ": n=" << s.size() << " sat=" << r.satisfiable << " nodes=" << r.nodes
              << " status=" << int(r.status) << " time=" << secs(t0, t1) << "s\n";
    std::cout.flush();
}

int main() {
    Circuit nt = desugar(parse_circuit("input a\nsplit a -> a1 a2\nnand a1 a2 -> g\noutput g"));
    Circuit andc = desugar(parse_circuit("input a\ninput b\nand a b -> g\noutput g"));
    Circuit cf = desugar(parse_circuit("input a\nnot a -> na\nand a na -> g\noutput g"));
    Circuit xr = desugar(parse_circuit(
        "input a\ninput b\nsplit a -> c d\nsplit b -> e f\nnand d e -> g\nsplit g -> h i\n"
        "nand c h -> j\nnand i f -> k\nnand j k -> l\noutput l"));

    Reduction rnt = reduce(nt);
    Reduction rand_ = reduce(andc);
    Reduction rcf = reduce(cf);
    Reduction rxr = reduce(xr);

    std::cout << "sizes: not=" << rnt.s.size() << " and=" << rand_.s.size()
              << " cf=" << rcf.s.size() << " xor=" << rxr.s.size() << "\n";

    // NOT: S_i'' prefix of the nand step (acceptance 4)
    const NandSpans& nd = rnt.manifest.steps[2].nand;
    std::span<const SymId> full(rnt.s.seq);
    measure_classes("NOT S_i'' classes", full.first(nd.d2_end), 1);
    measure_count("NOT S_i'' raw count", full.first(nd.d2_end), 1, true);

    // NOT: full pre-clamp (acceptance 5 last step)
    measure_classes("NOT pre-clamp classes", full.first(rnt.manifest.pre_clamp_len), 1);
    measure_decide("NOT clamped decide", full, 1);

    // AND pre-clamp
    std::span<const SymId> af(rand_.s.seq);
    measure_classes("AND pre-clamp classes", af.first(rand_.manifest.pre_clamp_len), 1);

    // const-false: UNSAT exhaustion
    measure_decide("CF clamped decide (unsat)", std::span<const SymId>(rcf.s.seq), 1);

    // XOR: last-step pre-clamp classes (acceptance 5 worst case)
    std::span<const SymId> xf(rxr.s.seq);
    measure_classes("XOR pre-clamp classes", xf.first(rxr.manifest.pre_clamp_len), 1);
    measure_decide("XOR clamped decide", xf, 1);

    // k = 2 expansion
    SymString nt2 = k_expand(rnt.s, 2);
    measure_decide("NOT k=2 decide", std::span<const SymId>(nt2.seq), 2);
    SymString cf2 = k_expand(rcf.s, 2);
    measure_decide("CF k=2 decide (unsat)", std::span<const SymId>(cf2.seq), 2);

    // binary
    BinaryEncoding bnt = binary_reduce(rnt.s, 1);
    auto bnt_ids = ids_of_chars(bnt.image);
    measure_decide("NOT binary k=1 decide", std::span<const SymId>(bnt_ids), 1);

    BinaryEncoding bcf = binary_reduce(rcf.s, 1);
    auto bcf_ids = ids_of_chars(bcf.image);
    measure_decide("CF binary k=1 decide (unsat)", std::span<const SymId>(bcf_ids), 1);

    BinaryEncoding bnt2 = binary_reduce(nt2, 2);
    auto bnt2_ids = ids_of_chars(bnt2.image);
    measure_decide("NOT binary k=2 decide", std::span<const SymId>(bnt2_ids), 2);

    BinaryEncoding bcf2 = binary_reduce(cf2, 2);
    auto bcf2_ids = ids_of_chars(bcf2.image);
    measure_decide("CF binary k=2 decide (unsat)", std::span<const SymId>(bcf2_ids), 2);
    return 0;
}
