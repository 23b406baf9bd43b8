#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "palinreduce/symbols.hpp"

namespace palin {

// Gate-level circuit as written in the DSL.  Fan-out is implicit: a node may
// feed any number of later references.  Split appears here as a pair of
// sibling nodes sharing one input.
enum class GateKind : std::uint8_t { Input, Not, And, Or, Nand, Split };

struct GateNode {
    std::string label;
    GateKind kind = GateKind::Input;
    std::vector<std::string> inputs;
    int line = 0;
};

struct GateCircuit {
    std::vector<GateNode> nodes;
    std::string output;

    const GateNode* find(std::string_view label) const;
    std::vector<std::string> input_labels() const;
};

// Line-based DSL:
//   input <w> | not <x> -> <w> | and <x> <y> -> <w> | or <x> <y> -> <w>
//   nand <x> <y> -> <w> | split <x> -> <u> <v> | output <w>
// `#` starts a comment.  Throws error with line numbers.
GateCircuit parse_circuit(std::string_view text);

// Build-step circuit: only wires, splitters and NAND gates, one step at a
// time.  Replaying the steps yields the subcircuits C_0 .. C_t.
struct BuildStep {
    enum class Kind : std::uint8_t { AddWire, Split, Nand };
    Kind kind;
    std::string a;  // AddWire: wire; Split: input; Nand: first input
    std::string b;  // Split: first output; Nand: second input
    std::string c;  // Split: second output; Nand: output
};

struct Circuit {
    std::vector<BuildStep> steps;
    std::string output;
};

// Checks the step discipline: labels created once, operands live when
// consumed, output live at the end.  Throws on violation.
void validate_circuit(const Circuit& c);

// Outputs (live wires) of the subcircuit after the first `upto` steps.
std::vector<std::string> live_outputs(const Circuit& c, std::size_t upto);
// Input wires (AddWire steps) within the first `upto` steps, creation order.
std::vector<std::string> input_wires(const Circuit& c, std::size_t upto);
inline std::vector<std::string> input_wires(const Circuit& c) {
    return input_wires(c, c.steps.size());
}

// Rewrites NOT/AND/OR into NAND + splitters and expands fan-out into split
// chains.  Deterministic: fresh labels depend only on the input.
Circuit desugar(const GateCircuit& gc);

// DSL text restricted to input/split/nand/output lines.
std::string serialize_circuit(const Circuit& c);

using Assignment = std::map<std::string, bool>;

// NAND semantics on gates, copy semantics on splits; returns every wire's
// value.  Throws if the assignment does not cover exactly the input wires.
std::map<std::string, bool> eval_circuit(const Circuit& c, const Assignment& tau);
std::map<std::string, bool> eval_circuit_prefix(const Circuit& c, std::size_t upto,
                                                const Assignment& tau);

// Gate-level evaluation, for desugaring equivalence checks.
std::map<std::string, bool> eval_gate_circuit(const GateCircuit& gc, const Assignment& tau);

struct SatResult {
    std::vector<Assignment> satisfying;  // all of them, input-order bit order
    bool satisfiable() const { return !satisfying.empty(); }
};

// Enumerates all 2^n assignments over the input wires.
SatResult sat_bruteforce(const Circuit& c, std::size_t max_inputs = 20);

} // namespace palin
