#include "palinreduce/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace palin {

namespace {

bool valid_ident(std::string_view s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw error("line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokenize_line(std::string_view line) {
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size() || line[i] == '#') break;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
        toks.emplace_back(line.substr(start, i - start));
    }
    return toks;
}

} // namespace

const GateNode* GateCircuit::find(std::string_view label) const {
    for (const auto& n : nodes) {
        if (n.label == label) return &n;
    }
    return nullptr;
}

std::vector<std::string> GateCircuit::input_labels() const {
    std::vector<std::string> out;
    for (const auto& n : nodes) {
        if (n.kind == GateKind::Input) out.push_back(n.label);
    }
    return out;
}

GateCircuit parse_circuit(std::string_view text) {
    GateCircuit gc;
    std::unordered_set<std::string> defined;
    int output_lines = 0;
    int line_no = 0;

    auto require_defined = [&](const std::string& ref, int line) {
        if (!defined.count(ref)) fail(line, "undefined node reference: " + ref);
    };
    auto define = [&](const std::string& label, int line) {
        if (!valid_ident(label)) fail(line, "invalid identifier: " + label);
        if (!defined.insert(label).second) fail(line, "duplicate node-id: " + label);
    };

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, (nl == std::string_view::npos ? text.size() : nl) - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        auto toks = tokenize_line(line);
        if (toks.empty()) continue;
        const std::string& op = toks[0];

        if (op == "input") {
            if (toks.size() != 2) fail(line_no, "expected: input <w>");
            define(toks[1], line_no);
            gc.nodes.push_back({toks[1], GateKind::Input, {}, line_no});
        } else if (op == "not") {
            if (toks.size() != 4 || toks[2] != "->") fail(line_no, "expected: not <x> -> <w>");
            require_defined(toks[1], line_no);
            define(toks[3], line_no);
            gc.nodes.push_back({toks[3], GateKind::Not, {toks[1]}, line_no});
        } else if (op == "and" || op == "or" || op == "nand") {
            if (toks.size() != 5 || toks[3] != "->") fail(line_no, "expected: " + op + " <x> <y> -> <w>");
            require_defined(toks[1], line_no);
            require_defined(toks[2], line_no);
            define(toks[4], line_no);
            GateKind k = op == "and" ? GateKind::And : op == "or" ? GateKind::Or : GateKind::Nand;
            gc.nodes.push_back({toks[4], k, {toks[1], toks[2]}, line_no});
        } else if (op == "split") {
            if (toks.size() != 5 || toks[2] != "->") fail(line_no, "expected: split <x> -> <u> <v>");
            require_defined(toks[1], line_no);
            define(toks[3], line_no);
            define(toks[4], line_no);
            gc.nodes.push_back({toks[3], GateKind::Split, {toks[1]}, line_no});
            gc.nodes.push_back({toks[4], GateKind::Split, {toks[1]}, line_no});
        } else if (op == "output") {
            if (toks.size() != 2) fail(line_no, "expected: output <w>");
            require_defined(toks[1], line_no);
            if (++output_lines > 1) fail(line_no, "multiple output lines");
            gc.output = toks[1];
        } else {
            fail(line_no, "unknown directive: " + op);
        }
    }
    if (output_lines == 0) throw error("missing output line");
    return gc;
}

void validate_circuit(const Circuit& c) {
    std::unordered_set<std::string> created;
    std::unordered_set<std::string> live;
    auto create = [&](const std::string& w) {
        if (!created.insert(w).second) throw error("wire created twice: " + w);
        live.insert(w);
    };
    auto consume = [&](const std::string& w) {
        if (!live.erase(w)) throw error("wire not live when consumed: " + w);
    };
    for (const auto& s : c.steps) {
        switch (s.kind) {
            case BuildStep::Kind::AddWire:
                create(s.a);
                break;
            case BuildStep::Kind::Split:
                consume(s.a);
                create(s.b);
                create(s.c);
                break;
            case BuildStep::Kind::Nand:
                if (s.a == s.b) throw error("nand operands must be distinct: " + s.a);
                consume(s.a);
                consume(s.b);
                create(s.c);
                break;
        }
    }
    if (c.output.empty()) throw error("circuit has no designated output");
    if (!live.count(c.output)) throw error("designated output is not live: " + c.output);
}

std::vector<std::string> live_outputs(const Circuit& c, std::size_t upto) {
    std::vector<std::string> live;
    auto kill = [&](const std::string& w) {
        live.erase(std::remove(live.begin(), live.end(), w), live.end());
    };
    for (std::size_t i = 0; i < upto && i < c.steps.size(); ++i) {
        const auto& s = c.steps[i];
        switch (s.kind) {
            case BuildStep::Kind::AddWire: live.push_back(s.a); break;
            case BuildStep::Kind::Split: kill(s.a); live.push_back(s.b); live.push_back(s.c); break;
            case BuildStep::Kind::Nand: kill(s.a); kill(s.b); live.push_back(s.c); break;
        }
    }
    return live;
}

std::vector<std::string> input_wires(const Circuit& c, std::size_t upto) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < upto && i < c.steps.size(); ++i) {
        if (c.steps[i].kind == BuildStep::Kind::AddWire) out.push_back(c.steps[i].a);
    }
    return out;
}

namespace {

// Desugaring context.  Fresh wires: split-chain leaves of wire w are named
// w_s1, w_s2, ...; gate-internal wires of a gate producing w are w_i1, ...
struct Desugarer {
    const GateCircuit& gc;
    Circuit out;
    std::unordered_map<std::string, int> fanout;          // references per label
    std::unordered_map<std::string, std::vector<std::string>> leaves;
    std::unordered_map<std::string, std::size_t> next_leaf;
    std::unordered_set<std::string> labels;               // every label in `out`

    explicit Desugarer(const GateCircuit& g) : gc(g) {}

    std::string claim(const std::string& label) {
        if (!labels.insert(label).second) {
            throw error("label collision while desugaring: " + label);
        }
        return label;
    }

    // Emits the split chain for `w` if it has more than one consumer.  The
    // chain leans left: each split's right output feeds the next consumer in
    // line order and the spine continues on the left output, so the deepest
    // left wire feeds the last consumer (matching the usual drawn layout).
    void plan_fanout(const std::string& w) {
        int f = fanout[w];
        if (f <= 1) {
            leaves[w] = {w};
            return;
        }
        std::vector<std::string> rights;
        std::string cur = w;
        int counter = 0;
        for (int i = 0; i < f - 1; ++i) {
            std::string left = w + "_s" + std::to_string(++counter);
            std::string right = w + "_s" + std::to_string(++counter);
            out.steps.push_back({BuildStep::Kind::Split, cur, claim(left), claim(right)});
            rights.push_back(right);
            cur = left;
        }
        rights.push_back(cur);
        leaves[w] = std::move(rights);
    }

    std::string take_leaf(const std::string& w) {
        auto& ls = leaves.at(w);
        std::size_t& i = next_leaf[w];
        if (i >= ls.size()) throw error("internal: leaf exhausted for " + w);
        return ls[i++];
    }

    void add_wire(const std::string& w) {
        out.steps.push_back({BuildStep::Kind::AddWire, claim(w), "", ""});
    }
    void split(const std::string& a, const std::string& b, const std::string& c) {
        out.steps.push_back({BuildStep::Kind::Split, a, claim(b), claim(c)});
    }
    void nand(const std::string& a, const std::string& b, const std::string& c) {
        out.steps.push_back({BuildStep::Kind::Nand, a, b, claim(c)});
    }

    void run() {
        for (std::size_t i = 0; i < gc.nodes.size(); ++i) {
            const GateNode& n = gc.nodes[i];
            for (const auto& in : n.inputs) ++fanout[in];
            if (n.kind == GateKind::Split) ++i;  // sibling shares the one consumption
        }
        if (!gc.output.empty()) ++fanout[gc.output];  // the clamp is a consumer

        std::size_t i = 0;
        while (i < gc.nodes.size()) {
            const GateNode& n = gc.nodes[i];
            int gi = 0;
            auto fresh = [&] { return n.label + "_i" + std::to_string(++gi); };
            switch (n.kind) {
                case GateKind::Input: {
                    add_wire(n.label);
                    plan_fanout(n.label);
                    ++i;
                    break;
                }
                case GateKind::Not: {
                    std::string x = take_leaf(n.inputs[0]);
                    std::string u = fresh(), v = fresh();
                    split(x, u, v);
                    nand(u, v, n.label);
                    plan_fanout(n.label);
                    ++i;
                    break;
                }
                case GateKind::And: {
                    std::string x = take_leaf(n.inputs[0]);
                    std::string y = take_leaf(n.inputs[1]);
                    std::string g = fresh(), g1 = fresh(), g2 = fresh();
                    nand(x, y, g);
                    split(g, g1, g2);
                    nand(g1, g2, n.label);
                    plan_fanout(n.label);
                    ++i;
                    break;
                }
                case GateKind::Or: {
                    std::string x = take_leaf(n.inputs[0]);
                    std::string y = take_leaf(n.inputs[1]);
                    std::string x1 = fresh(), x2 = fresh(), p = fresh();
                    std::string y1 = fresh(), y2 = fresh(), q = fresh();
                    split(x, x1, x2);
                    nand(x1, x2, p);
                    split(y, y1, y2);
                    nand(y1, y2, q);
                    nand(p, q, n.label);
                    plan_fanout(n.label);
                    ++i;
                    break;
                }
                case GateKind::Nand: {
                    std::string x = take_leaf(n.inputs[0]);
                    std::string y = take_leaf(n.inputs[1]);
                    nand(x, y, n.label);
                    plan_fanout(n.label);
                    ++i;
                    break;
                }
                case GateKind::Split: {
                    // Sibling pair in consecutive nodes.
                    const GateNode& m = gc.nodes.at(i + 1);
                    std::string x = take_leaf(n.inputs[0]);
                    split(x, n.label, m.label);
                    plan_fanout(n.label);
                    plan_fanout(m.label);
                    i += 2;
                    break;
                }
            }
        }
        out.output = take_leaf(gc.output);
    }
};

} // namespace

Circuit desugar(const GateCircuit& gc) {
    if (gc.output.empty()) throw error("circuit has no output");
    Desugarer d(gc);
    d.run();
    validate_circuit(d.out);
    return d.out;
}

std::string serialize_circuit(const Circuit& c) {
    std::ostringstream os;
    for (const auto& s : c.steps) {
        switch (s.kind) {
            case BuildStep::Kind::AddWire: os << "input " << s.a << '\n'; break;
            case BuildStep::Kind::Split: os << "split " << s.a << " -> " << s.b << ' ' << s.c << '\n'; break;
            case BuildStep::Kind::Nand: os << "nand " << s.a << ' ' << s.b << " -> " << s.c << '\n'; break;
        }
    }
    os << "output " << c.output << '\n';
    return os.str();
}

std::map<std::string, bool> eval_circuit_prefix(const Circuit& c, std::size_t upto,
                                                const Assignment& tau) {
    auto inputs = input_wires(c, upto);
    if (tau.size() != inputs.size()) throw error("assignment does not match input wires");
    for (const auto& w : inputs) {
        if (!tau.count(w)) throw error("assignment missing input wire: " + w);
    }
    std::map<std::string, bool> val;
    for (std::size_t i = 0; i < upto && i < c.steps.size(); ++i) {
        const auto& s = c.steps[i];
        switch (s.kind) {
            case BuildStep::Kind::AddWire:
                val[s.a] = tau.at(s.a);
                break;
            case BuildStep::Kind::Split:
                val[s.b] = val.at(s.a);
                val[s.c] = val.at(s.a);
                break;
            case BuildStep::Kind::Nand:
                val[s.c] = !(val.at(s.a) && val.at(s.b));
                break;
        }
    }
    return val;
}

std::map<std::string, bool> eval_circuit(const Circuit& c, const Assignment& tau) {
    return eval_circuit_prefix(c, c.steps.size(), tau);
}

std::map<std::string, bool> eval_gate_circuit(const GateCircuit& gc, const Assignment& tau) {
    std::map<std::string, bool> val;
    for (const auto& n : gc.nodes) {
        switch (n.kind) {
            case GateKind::Input: {
                auto it = tau.find(n.label);
                if (it == tau.end()) throw error("assignment missing input: " + n.label);
                val[n.label] = it->second;
                break;
            }
            case GateKind::Not: val[n.label] = !val.at(n.inputs[0]); break;
            case GateKind::And: val[n.label] = val.at(n.inputs[0]) && val.at(n.inputs[1]); break;
            case GateKind::Or: val[n.label] = val.at(n.inputs[0]) || val.at(n.inputs[1]); break;
            case GateKind::Nand: val[n.label] = !(val.at(n.inputs[0]) && val.at(n.inputs[1])); break;
            case GateKind::Split: val[n.label] = val.at(n.inputs[0]); break;
        }
    }
    return val;
}

SatResult sat_bruteforce(const Circuit& c, std::size_t max_inputs) {
    auto inputs = input_wires(c, c.steps.size());
    if (inputs.size() > max_inputs) {
        throw error("too many inputs for brute force: " + std::to_string(inputs.size()));
    }
    SatResult r;
    for (std::uint64_t bits = 0; bits < (1ull << inputs.size()); ++bits) {
        Assignment tau;
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            tau[inputs[i]] = (bits >> i) & 1;
        }
        auto val = eval_circuit(c, tau);
        if (val.at(c.output)) r.satisfying.push_back(std::move(tau));
    }
    return r;
}

} // namespace palin
