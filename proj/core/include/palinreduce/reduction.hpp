#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "palinreduce/circuit.hpp"
#include "palinreduce/symbols.hpp"

namespace palin {

// Side-car map from wires and build steps to symbol ids and spans of the
// emitted string.  Spans are half-open over the symbol sequence; gadget
// segment spans exclude their leading separator pair.
struct WireSymsEntry {
    SymId plain, bar, x;
};

struct AddSpans {
    std::uint32_t begin = 0, end = 0;
    std::uint32_t block = 0;  // start of the 5-symbol block
};

struct SplitSpans {
    std::uint32_t begin = 0, end = 0;
    std::uint32_t b1_begin = 0, b1_end = 0;  // x^3 b' xax c' x^5
    std::uint32_t b2_begin = 0, b2_end = 0;  // x^7 ~b' x~ax ~c' x^9
    std::uint32_t bb_begin = 0, bb_end = 0;  // closing block for first output
    std::uint32_t bc_begin = 0, bc_end = 0;  // closing block for second output
    std::string in, out1, out2;
    std::string aux1, aux2;  // primed tags paired with out1/out2
    SymId aux1_plain = 0, aux1_bar = 0, aux2_plain = 0, aux2_bar = 0;
};

struct NandSpans {
    std::uint32_t begin = 0, end = 0;
    SplitSpans inner;                        // split of the first operand
    std::uint32_t a1_begin = 0, a1_end = 0;  // x^3 .. x^5 block
    std::uint32_t a2_begin = 0, a2_end = 0;  // x^7 .. x^9
    std::uint32_t b_begin = 0, b_end = 0;    // x^11 .. x^13
    std::uint32_t d1_begin = 0, d1_end = 0;  // x^15 .. x^17
    std::uint32_t d2_begin = 0, d2_end = 0;  // x^19 .. x^21
    std::uint32_t f_begin = 0, f_end = 0;    // x^23 .. x^25
    std::uint32_t g_begin = 0, g_end = 0;    // output wire block
    std::string in1, in2, out;
    std::string a1, a2;                      // internal split labels
    std::string aux_a1, aux_a2, aux_b;       // primed tags of blocks A/B/C
    std::string cp, cpp, d;                  // c' (carries the x run symbol), c'', d
    SymId a1p_plain = 0, a1p_bar = 0;
    SymId a2p_plain = 0, a2p_bar = 0;
    SymId bp_plain = 0, bp_bar = 0;
    SymId cp_plain = 0, cp_bar = 0, cp_x = 0;
    SymId cpp_plain = 0, cpp_bar = 0;
    SymId d_plain = 0;
};

struct StepRecord {
    BuildStep step;
    AddSpans add;
    SplitSpans split;
    NandSpans nand;

    std::uint32_t span_begin() const;
    std::uint32_t span_end() const;
};

struct Manifest {
    std::map<std::string, WireSymsEntry> wires;  // circuit wires + internal nand splits
    std::vector<StepRecord> steps;
    std::string output;
    std::uint32_t pre_clamp_len = 0;
    bool clamped = false;
};

std::string manifest_to_json(const Manifest& m);
Manifest manifest_from_json(std::string_view text);
void write_manifest_file(const std::string& path, const Manifest& m);
Manifest read_manifest_file(const std::string& path);

// Replays build steps into the gadget string S_0 .. S_t.  One state per run;
// not reusable after clamp_output.
class ReductionState {
public:
    void emit_add_wire(const std::string& w);
    void emit_split(const std::string& a, const std::string& b, const std::string& c);
    void emit_nand(const std::string& a, const std::string& b, const std::string& c);
    // Appends the final $ # x_w w x_w block; requires exactly one live output.
    const SymString& clamp_output(const std::string& w);

    const SymString& str() const { return s_; }
    const Manifest& manifest() const { return manifest_; }
    const std::set<std::string>& live() const { return live_; }

private:
    SplitSpans emit_split_core(const std::string& a, const std::string& b, const std::string& c);
    void append_sep_pair();
    void append_n(SymId id, int count);

    SymString s_;
    Manifest manifest_;
    std::set<std::string> live_;
    bool clamped_ = false;
};

struct Reduction {
    SymString s;
    Manifest manifest;
};

// The whole pipeline: replay every step, then clamp the designated output.
Reduction reduce(const Circuit& c);

} // namespace palin
