#include "palinreduce/reduction.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace palin {

std::uint32_t StepRecord::span_begin() const {
    switch (step.kind) {
        case BuildStep::Kind::AddWire: return add.begin;
        case BuildStep::Kind::Split: return split.begin;
        case BuildStep::Kind::Nand: return nand.begin;
    }
    return 0;
}

std::uint32_t StepRecord::span_end() const {
    switch (step.kind) {
        case BuildStep::Kind::AddWire: return add.end;
        case BuildStep::Kind::Split: return split.end;
        case BuildStep::Kind::Nand: return nand.end;
    }
    return 0;
}

void ReductionState::append_sep_pair() {
    auto p = s_.pool.fresh_separator_pair();
    s_.seq.push_back(p.dollar);
    s_.seq.push_back(p.hash);
}

void ReductionState::append_n(SymId id, int count) {
    for (int i = 0; i < count; ++i) s_.seq.push_back(id);
}

void ReductionState::emit_add_wire(const std::string& w) {
    if (clamped_) throw error("reduction already clamped");
    auto t = s_.pool.fresh_wire_symbols(w);

    StepRecord rec;
    rec.step = {BuildStep::Kind::AddWire, w, "", ""};
    rec.add.begin = static_cast<std::uint32_t>(s_.seq.size());
    if (!s_.seq.empty()) append_sep_pair();
    rec.add.block = static_cast<std::uint32_t>(s_.seq.size());

    s_.seq.push_back(t.x);
    s_.seq.push_back(t.plain);
    s_.seq.push_back(t.x);
    s_.seq.push_back(t.bar);
    s_.seq.push_back(t.x);

    rec.add.end = static_cast<std::uint32_t>(s_.seq.size());
    manifest_.wires[w] = {t.plain, t.bar, t.x};
    manifest_.steps.push_back(std::move(rec));
    live_.insert(w);
}

SplitSpans ReductionState::emit_split_core(const std::string& a, const std::string& b,
                                           const std::string& c) {
    if (!live_.count(a)) throw error("split input not live: " + a);
    const WireSymsEntry A = manifest_.wires.at(a);

    SplitSpans sp;
    sp.in = a;
    sp.out1 = b;
    sp.out2 = c;
    sp.begin = static_cast<std::uint32_t>(s_.seq.size());

    sp.aux1 = s_.pool.fresh_primed_tag(b);
    sp.aux2 = s_.pool.fresh_primed_tag(c);
    auto bp = s_.pool.fresh_aux_symbols(sp.aux1);
    auto cp = s_.pool.fresh_aux_symbols(sp.aux2);
    sp.aux1_plain = bp.plain;
    sp.aux1_bar = bp.bar;
    sp.aux2_plain = cp.plain;
    sp.aux2_bar = cp.bar;

    append_sep_pair();
    sp.b1_begin = static_cast<std::uint32_t>(s_.seq.size());
    append_n(A.x, 3);
    s_.seq.push_back(bp.plain);
    s_.seq.push_back(A.x);
    s_.seq.push_back(A.plain);
    s_.seq.push_back(A.x);
    s_.seq.push_back(cp.plain);
    append_n(A.x, 5);
    sp.b1_end = static_cast<std::uint32_t>(s_.seq.size());

    append_sep_pair();
    sp.b2_begin = static_cast<std::uint32_t>(s_.seq.size());
    append_n(A.x, 7);
    s_.seq.push_back(bp.bar);
    s_.seq.push_back(A.x);
    s_.seq.push_back(A.bar);
    s_.seq.push_back(A.x);
    s_.seq.push_back(cp.bar);
    append_n(A.x, 9);
    sp.b2_end = static_cast<std::uint32_t>(s_.seq.size());

    auto B = s_.pool.fresh_wire_symbols(b);
    append_sep_pair();
    sp.bb_begin = static_cast<std::uint32_t>(s_.seq.size());
    s_.seq.push_back(B.x);
    s_.seq.push_back(B.plain);
    s_.seq.push_back(B.x);
    s_.seq.push_back(bp.plain);
    s_.seq.push_back(B.x);
    s_.seq.push_back(bp.bar);
    s_.seq.push_back(B.x);
    s_.seq.push_back(B.bar);
    s_.seq.push_back(B.x);
    sp.bb_end = static_cast<std::uint32_t>(s_.seq.size());

    auto C = s_.pool.fresh_wire_symbols(c);
    append_sep_pair();
    sp.bc_begin = static_cast<std::uint32_t>(s_.seq.size());
    s_.seq.push_back(C.x);
    s_.seq.push_back(C.plain);
    s_.seq.push_back(C.x);
    s_.seq.push_back(cp.plain);
    s_.seq.push_back(C.x);
    s_.seq.push_back(cp.bar);
    s_.seq.push_back(C.x);
    s_.seq.push_back(C.bar);
    s_.seq.push_back(C.x);
    sp.bc_end = static_cast<std::uint32_t>(s_.seq.size());
    sp.end = sp.bc_end;

    manifest_.wires[b] = {B.plain, B.bar, B.x};
    manifest_.wires[c] = {C.plain, C.bar, C.x};
    live_.erase(a);
    live_.insert(b);
    live_.insert(c);
    return sp;
}

void ReductionState::emit_split(const std::string& a, const std::string& b,
                                const std::string& c) {
    if (clamped_) throw error("reduction already clamped");
    StepRecord rec;
    rec.step = {BuildStep::Kind::Split, a, b, c};
    rec.split = emit_split_core(a, b, c);
    manifest_.steps.push_back(std::move(rec));
}

void ReductionState::emit_nand(const std::string& a, const std::string& b,
                               const std::string& c) {
    if (clamped_) throw error("reduction already clamped");
    if (a == b) throw error("nand operands must be distinct: " + a);
    if (!live_.count(a)) throw error("nand operand not live: " + a);
    if (!live_.count(b)) throw error("nand operand not live: " + b);

    StepRecord rec;
    rec.step = {BuildStep::Kind::Nand, a, b, c};
    NandSpans& nd = rec.nand;
    nd.in1 = a;
    nd.in2 = b;
    nd.out = c;
    nd.a1 = a + "_n1";
    nd.a2 = a + "_n2";
    nd.begin = static_cast<std::uint32_t>(s_.seq.size());
    nd.inner = emit_split_core(a, nd.a1, nd.a2);

    // All gadget letters ride on the x symbol of the c' tag.
    nd.cp = s_.pool.fresh_primed_tag(c);
    auto CP = s_.pool.fresh_wire_symbols(nd.cp);
    nd.aux_a1 = s_.pool.fresh_primed_tag(nd.a1);
    nd.aux_a2 = s_.pool.fresh_primed_tag(nd.a2);
    nd.aux_b = s_.pool.fresh_primed_tag(b);
    auto A1P = s_.pool.fresh_aux_symbols(nd.aux_a1);
    auto A2P = s_.pool.fresh_aux_symbols(nd.aux_a2);
    auto BP = s_.pool.fresh_aux_symbols(nd.aux_b);
    nd.cpp = s_.pool.fresh_primed_tag(c);
    auto CPP = s_.pool.fresh_aux_symbols(nd.cpp);
    nd.d = c + "_d";
    auto D = s_.pool.fresh_aux_symbols(nd.d);
    nd.a1p_plain = A1P.plain;
    nd.a1p_bar = A1P.bar;
    nd.a2p_plain = A2P.plain;
    nd.a2p_bar = A2P.bar;
    nd.bp_plain = BP.plain;
    nd.bp_bar = BP.bar;
    nd.cp_plain = CP.plain;
    nd.cp_bar = CP.bar;
    nd.cp_x = CP.x;
    nd.cpp_plain = CPP.plain;
    nd.cpp_bar = CPP.bar;
    nd.d_plain = D.plain;

    const WireSymsEntry W1 = manifest_.wires.at(nd.a1);
    const WireSymsEntry W2 = manifest_.wires.at(nd.a2);
    const WireSymsEntry WB = manifest_.wires.at(b);
    const SymId X = CP.x;

    auto letter_block = [&](std::uint32_t& bb, std::uint32_t& be, int lead, SymId s1, SymId s2,
                            SymId s3, SymId s4, int trail) {
        append_sep_pair();
        bb = static_cast<std::uint32_t>(s_.seq.size());
        append_n(X, lead);
        s_.seq.push_back(s1);
        s_.seq.push_back(X);
        s_.seq.push_back(s2);
        s_.seq.push_back(X);
        s_.seq.push_back(s3);
        s_.seq.push_back(X);
        s_.seq.push_back(s4);
        append_n(X, trail);
        be = static_cast<std::uint32_t>(s_.seq.size());
    };

    letter_block(nd.a1_begin, nd.a1_end, 3, A1P.plain, W1.plain, W1.bar, A1P.bar, 5);
    letter_block(nd.a2_begin, nd.a2_end, 7, A2P.plain, W2.plain, W2.bar, A2P.bar, 9);
    letter_block(nd.b_begin, nd.b_end, 11, BP.plain, WB.plain, WB.bar, BP.bar, 13);

    append_sep_pair();
    nd.d1_begin = static_cast<std::uint32_t>(s_.seq.size());
    append_n(X, 15);
    s_.seq.push_back(A1P.bar);
    s_.seq.push_back(X);
    s_.seq.push_back(CP.plain);
    s_.seq.push_back(X);
    s_.seq.push_back(BP.bar);
    append_n(X, 17);
    nd.d1_end = static_cast<std::uint32_t>(s_.seq.size());

    append_sep_pair();
    nd.d2_begin = static_cast<std::uint32_t>(s_.seq.size());
    append_n(X, 19);
    s_.seq.push_back(A2P.bar);
    s_.seq.push_back(X);
    s_.seq.push_back(D.plain);
    s_.seq.push_back(X);
    s_.seq.push_back(BP.plain);
    append_n(X, 21);
    nd.d2_end = static_cast<std::uint32_t>(s_.seq.size());

    append_sep_pair();
    nd.f_begin = static_cast<std::uint32_t>(s_.seq.size());
    append_n(X, 23);
    s_.seq.push_back(CPP.plain);
    s_.seq.push_back(X);
    s_.seq.push_back(CP.plain);
    s_.seq.push_back(X);
    s_.seq.push_back(CP.bar);
    s_.seq.push_back(X);
    s_.seq.push_back(CPP.bar);
    append_n(X, 25);
    nd.f_end = static_cast<std::uint32_t>(s_.seq.size());

    auto C3 = s_.pool.fresh_wire_symbols(c);
    append_sep_pair();
    nd.g_begin = static_cast<std::uint32_t>(s_.seq.size());
    s_.seq.push_back(C3.x);
    s_.seq.push_back(C3.plain);
    s_.seq.push_back(C3.x);
    s_.seq.push_back(CPP.plain);
    s_.seq.push_back(C3.x);
    s_.seq.push_back(CPP.bar);
    s_.seq.push_back(C3.x);
    s_.seq.push_back(C3.bar);
    s_.seq.push_back(C3.x);
    nd.g_end = static_cast<std::uint32_t>(s_.seq.size());
    nd.end = nd.g_end;

    manifest_.wires[c] = {C3.plain, C3.bar, C3.x};
    live_.erase(nd.a1);
    live_.erase(nd.a2);
    live_.erase(b);
    live_.insert(c);
    manifest_.steps.push_back(std::move(rec));
}

const SymString& ReductionState::clamp_output(const std::string& w) {
    if (clamped_) throw error("reduction already clamped");
    if (live_.size() != 1 || !live_.count(w)) {
        throw error("clamp requires exactly one live output (" + std::to_string(live_.size()) +
                    " live)");
    }
    const WireSymsEntry W = manifest_.wires.at(w);
    manifest_.pre_clamp_len = static_cast<std::uint32_t>(s_.seq.size());
    append_sep_pair();
    s_.seq.push_back(W.x);
    s_.seq.push_back(W.plain);
    s_.seq.push_back(W.x);
    manifest_.output = w;
    manifest_.clamped = true;
    clamped_ = true;
    return s_;
}

Reduction reduce(const Circuit& c) {
    validate_circuit(c);
    ReductionState state;
    for (const auto& st : c.steps) {
        switch (st.kind) {
            case BuildStep::Kind::AddWire: state.emit_add_wire(st.a); break;
            case BuildStep::Kind::Split: state.emit_split(st.a, st.b, st.c); break;
            case BuildStep::Kind::Nand: state.emit_nand(st.a, st.b, st.c); break;
        }
    }
    state.clamp_output(c.output);
    return Reduction{state.str(), state.manifest()};
}

namespace {

nlohmann::json span_json(std::uint32_t b, std::uint32_t e) {
    return nlohmann::json::array({b, e});
}

nlohmann::json split_json(const SplitSpans& sp) {
    nlohmann::json j;
    j["span"] = span_json(sp.begin, sp.end);
    j["b1"] = span_json(sp.b1_begin, sp.b1_end);
    j["b2"] = span_json(sp.b2_begin, sp.b2_end);
    j["bb"] = span_json(sp.bb_begin, sp.bb_end);
    j["bc"] = span_json(sp.bc_begin, sp.bc_end);
    j["in"] = sp.in;
    j["out"] = nlohmann::json::array({sp.out1, sp.out2});
    j["aux"] = nlohmann::json::array({sp.aux1, sp.aux2});
    j["aux_ids"] = nlohmann::json::array({sp.aux1_plain, sp.aux1_bar, sp.aux2_plain, sp.aux2_bar});
    return j;
}

void read_span(const nlohmann::json& j, std::uint32_t& b, std::uint32_t& e) {
    b = j.at(0).get<std::uint32_t>();
    e = j.at(1).get<std::uint32_t>();
}

SplitSpans split_from_json(const nlohmann::json& j) {
    SplitSpans sp;
    read_span(j.at("span"), sp.begin, sp.end);
    read_span(j.at("b1"), sp.b1_begin, sp.b1_end);
    read_span(j.at("b2"), sp.b2_begin, sp.b2_end);
    read_span(j.at("bb"), sp.bb_begin, sp.bb_end);
    read_span(j.at("bc"), sp.bc_begin, sp.bc_end);
    sp.in = j.at("in").get<std::string>();
    sp.out1 = j.at("out").at(0).get<std::string>();
    sp.out2 = j.at("out").at(1).get<std::string>();
    sp.aux1 = j.at("aux").at(0).get<std::string>();
    sp.aux2 = j.at("aux").at(1).get<std::string>();
    const auto& ids = j.at("aux_ids");
    sp.aux1_plain = ids.at(0).get<SymId>();
    sp.aux1_bar = ids.at(1).get<SymId>();
    sp.aux2_plain = ids.at(2).get<SymId>();
    sp.aux2_bar = ids.at(3).get<SymId>();
    return sp;
}

} // namespace

std::string manifest_to_json(const Manifest& m) {
    nlohmann::json j;
    j["format"] = "palinreduce-manifest";
    j["version"] = 1;
    nlohmann::json wires;
    for (const auto& [label, w] : m.wires) {
        wires[label] = nlohmann::json::array({w.plain, w.bar, w.x});
    }
    j["wires"] = std::move(wires);

    nlohmann::json steps = nlohmann::json::array();
    for (const auto& rec : m.steps) {
        nlohmann::json e;
        switch (rec.step.kind) {
            case BuildStep::Kind::AddWire:
                e["op"] = "add";
                e["wire"] = rec.step.a;
                e["span"] = span_json(rec.add.begin, rec.add.end);
                e["block"] = rec.add.block;
                break;
            case BuildStep::Kind::Split:
                e["op"] = "split";
                e["split"] = split_json(rec.split);
                break;
            case BuildStep::Kind::Nand: {
                e["op"] = "nand";
                const NandSpans& nd = rec.nand;
                e["span"] = span_json(nd.begin, nd.end);
                e["in"] = nlohmann::json::array({nd.in1, nd.in2});
                e["out"] = nd.out;
                e["inner_split"] = split_json(nd.inner);
                e["a1_block"] = span_json(nd.a1_begin, nd.a1_end);
                e["a2_block"] = span_json(nd.a2_begin, nd.a2_end);
                e["b_block"] = span_json(nd.b_begin, nd.b_end);
                e["d1_block"] = span_json(nd.d1_begin, nd.d1_end);
                e["d2_block"] = span_json(nd.d2_begin, nd.d2_end);
                e["f_block"] = span_json(nd.f_begin, nd.f_end);
                e["g_block"] = span_json(nd.g_begin, nd.g_end);
                e["internal"] = nlohmann::json::array({nd.a1, nd.a2});
                e["aux"] = {{"a1", nd.aux_a1}, {"a2", nd.aux_a2}, {"b", nd.aux_b},
                            {"cp", nd.cp},    {"cpp", nd.cpp},   {"d", nd.d}};
                e["aux_ids"] = nlohmann::json::array(
                    {nd.a1p_plain, nd.a1p_bar, nd.a2p_plain, nd.a2p_bar, nd.bp_plain, nd.bp_bar,
                     nd.cp_plain, nd.cp_bar, nd.cp_x, nd.cpp_plain, nd.cpp_bar, nd.d_plain});
                break;
            }
        }
        steps.push_back(std::move(e));
    }
    j["steps"] = std::move(steps);
    j["output"] = m.output;
    j["pre_clamp_len"] = m.pre_clamp_len;
    j["clamped"] = m.clamped;
    return j.dump(2);
}

Manifest manifest_from_json(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "palinreduce-manifest" || j.value("version", 0) != 1) {
        throw error("not a palinreduce-manifest v1 document");
    }
    Manifest m;
    for (const auto& [label, arr] : j.at("wires").items()) {
        m.wires[label] = {arr.at(0).get<SymId>(), arr.at(1).get<SymId>(), arr.at(2).get<SymId>()};
    }
    for (const auto& e : j.at("steps")) {
        StepRecord rec;
        std::string op = e.at("op").get<std::string>();
        if (op == "add") {
            rec.step.kind = BuildStep::Kind::AddWire;
            rec.step.a = e.at("wire").get<std::string>();
            read_span(e.at("span"), rec.add.begin, rec.add.end);
            rec.add.block = e.at("block").get<std::uint32_t>();
        } else if (op == "split") {
            rec.step.kind = BuildStep::Kind::Split;
            rec.split = split_from_json(e.at("split"));
            rec.step.a = rec.split.in;
            rec.step.b = rec.split.out1;
            rec.step.c = rec.split.out2;
        } else if (op == "nand") {
            rec.step.kind = BuildStep::Kind::Nand;
            NandSpans& nd = rec.nand;
            read_span(e.at("span"), nd.begin, nd.end);
            nd.in1 = e.at("in").at(0).get<std::string>();
            nd.in2 = e.at("in").at(1).get<std::string>();
            nd.out = e.at("out").get<std::string>();
            nd.inner = split_from_json(e.at("inner_split"));
            read_span(e.at("a1_block"), nd.a1_begin, nd.a1_end);
            read_span(e.at("a2_block"), nd.a2_begin, nd.a2_end);
            read_span(e.at("b_block"), nd.b_begin, nd.b_end);
            read_span(e.at("d1_block"), nd.d1_begin, nd.d1_end);
            read_span(e.at("d2_block"), nd.d2_begin, nd.d2_end);
            read_span(e.at("f_block"), nd.f_begin, nd.f_end);
            read_span(e.at("g_block"), nd.g_begin, nd.g_end);
            nd.a1 = e.at("internal").at(0).get<std::string>();
            nd.a2 = e.at("internal").at(1).get<std::string>();
            nd.aux_a1 = e.at("aux").at("a1").get<std::string>();
            nd.aux_a2 = e.at("aux").at("a2").get<std::string>();
            nd.aux_b = e.at("aux").at("b").get<std::string>();
            nd.cp = e.at("aux").at("cp").get<std::string>();
            nd.cpp = e.at("aux").at("cpp").get<std::string>();
            nd.d = e.at("aux").at("d").get<std::string>();
            const auto& ids = e.at("aux_ids");
            nd.a1p_plain = ids.at(0).get<SymId>();
            nd.a1p_bar = ids.at(1).get<SymId>();
            nd.a2p_plain = ids.at(2).get<SymId>();
            nd.a2p_bar = ids.at(3).get<SymId>();
            nd.bp_plain = ids.at(4).get<SymId>();
            nd.bp_bar = ids.at(5).get<SymId>();
            nd.cp_plain = ids.at(6).get<SymId>();
            nd.cp_bar = ids.at(7).get<SymId>();
            nd.cp_x = ids.at(8).get<SymId>();
            nd.cpp_plain = ids.at(9).get<SymId>();
            nd.cpp_bar = ids.at(10).get<SymId>();
            nd.d_plain = ids.at(11).get<SymId>();
            rec.step.a = nd.in1;
            rec.step.b = nd.in2;
            rec.step.c = nd.out;
        } else {
            throw error("unknown manifest step op: " + op);
        }
        m.steps.push_back(std::move(rec));
    }
    m.output = j.at("output").get<std::string>();
    m.pre_clamp_len = j.at("pre_clamp_len").get<std::uint32_t>();
    m.clamped = j.at("clamped").get<bool>();
    return m;
}

void write_manifest_file(const std::string& path, const Manifest& m) {
    std::ofstream f(path);
    if (!f) throw error("cannot open for writing: " + path);
    f << manifest_to_json(m) << '\n';
}

Manifest read_manifest_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw error("cannot open: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return manifest_from_json(ss.str());
}

} // namespace palin
