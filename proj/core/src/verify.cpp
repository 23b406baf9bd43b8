#include "palinreduce/verify.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace palin {

const char* wire_status_name(WireStatus s) {
    switch (s) {
        case WireStatus::True: return "true";
        case WireStatus::False: return "false";
        case WireStatus::Absent: return "absent";
        case WireStatus::Violation: return "violation";
    }
    return "?";
}

namespace {

std::vector<std::uint32_t> run_end_table(std::span<const SymId> s) {
    std::vector<std::uint32_t> re(s.size());
    for (std::size_t i = s.size(); i-- > 0;) {
        re[i] = (i + 1 < s.size() && s[i + 1] == s[i]) ? re[i + 1]
                                                       : static_cast<std::uint32_t>(i + 1);
    }
    return re;
}

std::uint64_t xmx_key(SymId x, SymId mid) {
    return (std::uint64_t(x) << 32) | mid;
}

// Complete-factor presence sets of one factorization.
struct Presence {
    std::unordered_set<SymId> singles;
    std::unordered_set<std::uint64_t> triples;  // [u, v, u] keyed by (u, v)
    std::unordered_set<SymId> runs;             // u with a factor u^j, j > 1

    void collect(std::span<const SymId> s, const std::vector<std::uint32_t>& re,
                 const Factorization& f) {
        singles.clear();
        triples.clear();
        runs.clear();
        for (const auto& [b, e] : f.spans) {
            std::uint32_t len = e - b;
            if (len == 1) {
                singles.insert(s[b]);
            } else if (e <= re[b]) {
                runs.insert(s[b]);
            } else if (len == 3 && s[b] == s[b + 2]) {
                triples.insert(xmx_key(s[b], s[b + 1]));
            }
        }
    }

    WireStatus output_status(const WireSymsEntry& w) const {
        bool p = singles.count(w.plain) > 0;
        bool q = singles.count(w.bar) > 0;
        bool x1 = singles.count(w.x) > 0;
        bool xpx = triples.count(xmx_key(w.x, w.plain)) > 0;
        bool xqx = triples.count(xmx_key(w.x, w.bar)) > 0;
        bool xr = runs.count(w.x) > 0;
        if (p && x1 && xqx && !q && !xpx && !xr) return WireStatus::True;
        if (q && x1 && xpx && !p && !xqx && !xr) return WireStatus::False;
        return WireStatus::Violation;
    }

    bool all_absent(const WireSymsEntry& w) const {
        return !singles.count(w.plain) && !singles.count(w.bar) && !singles.count(w.x) &&
               !triples.count(xmx_key(w.x, w.plain)) && !triples.count(xmx_key(w.x, w.bar)) &&
               !runs.count(w.x);
    }
};

// Span lookup by start position (spans are emitted in order).
int span_at(const Factorization& f, std::uint32_t pos) {
    auto it = std::lower_bound(f.spans.begin(), f.spans.end(), pos,
                               [](const auto& sp, std::uint32_t p) { return sp.first < p; });
    if (it == f.spans.end() || it->first != pos) return -1;
    return static_cast<int>(it - f.spans.begin());
}

// Reads a wire's value from the tiling of its add block x w x ~w x:
// (x)(w)(x ~w x) encodes true, (x w x)(~w)(x) encodes false.
std::optional<bool> decode_add_block(const Factorization& f, std::uint32_t blk) {
    int i = span_at(f, blk);
    if (i < 0) return std::nullopt;
    std::uint32_t e0 = f.spans[i].second;
    if (e0 == blk + 1) {
        int j = span_at(f, blk + 1);
        int k = span_at(f, blk + 2);
        if (j >= 0 && f.spans[j].second == blk + 2 && k >= 0 && f.spans[k].second == blk + 5) {
            return true;
        }
        return std::nullopt;
    }
    if (e0 == blk + 3) {
        int j = span_at(f, blk + 3);
        int k = span_at(f, blk + 4);
        if (j >= 0 && f.spans[j].second == blk + 4 && k >= 0 && f.spans[k].second == blk + 5) {
            return false;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

std::uint32_t wire_creation_pos(const Manifest& m, const std::string& label) {
    for (const auto& rec : m.steps) {
        switch (rec.step.kind) {
            case BuildStep::Kind::AddWire:
                if (rec.step.a == label) return rec.add.begin;
                break;
            case BuildStep::Kind::Split:
                if (rec.split.out1 == label || rec.split.out2 == label) return rec.split.begin;
                break;
            case BuildStep::Kind::Nand:
                if (rec.nand.a1 == label || rec.nand.a2 == label) return rec.nand.inner.begin;
                if (rec.nand.out == label) return rec.nand.begin;
                break;
        }
    }
    throw error("wire not found in manifest: " + label);
}

const StepRecord& add_record_of(const Manifest& m, const std::string& wire) {
    for (const auto& rec : m.steps) {
        if (rec.step.kind == BuildStep::Kind::AddWire && rec.step.a == wire) return rec;
    }
    throw error("no add-wire record for: " + wire);
}

// Precomputed context for checking many factorizations of one prefix.
struct PrefixContext {
    std::span<const SymId> s;
    std::vector<std::uint32_t> re;
    std::vector<std::pair<std::string, WireSymsEntry>> outputs;
    std::vector<std::pair<std::string, WireSymsEntry>> absent;  // created after the prefix
    std::vector<std::pair<std::string, std::uint32_t>> input_blocks;
    // dense evaluation of the subcircuit
    std::vector<std::array<int, 4>> ops;  // kind, a, b, c as wire indices
    std::vector<int> input_idx;
    std::vector<int> output_idx;  // parallel to `outputs`
    std::size_t wire_count = 0;

    PrefixContext(std::span<const SymId> str, const Circuit& c, std::size_t upto,
                  const Manifest& m)
        : s(str), re(run_end_table(str)) {
        auto outs = live_outputs(c, upto);
        for (const auto& w : outs) outputs.emplace_back(w, m.wires.at(w));

        for (const auto& [label, syms] : m.wires) {
            if (wire_creation_pos(m, label) >= str.size()) absent.emplace_back(label, syms);
        }

        auto ins = input_wires(c, upto);
        std::unordered_map<std::string, int> idx;
        auto wire_index = [&](const std::string& w) {
            auto it = idx.find(w);
            if (it != idx.end()) return it->second;
            int i = static_cast<int>(idx.size());
            idx.emplace(w, i);
            return i;
        };
        for (std::size_t i = 0; i < upto && i < c.steps.size(); ++i) {
            const auto& st = c.steps[i];
            switch (st.kind) {
                case BuildStep::Kind::AddWire:
                    ops.push_back({0, wire_index(st.a), -1, -1});
                    break;
                case BuildStep::Kind::Split:
                    ops.push_back({1, wire_index(st.a), wire_index(st.b), wire_index(st.c)});
                    break;
                case BuildStep::Kind::Nand:
                    ops.push_back({2, wire_index(st.a), wire_index(st.b), wire_index(st.c)});
                    break;
            }
        }
        for (const auto& w : ins) {
            input_idx.push_back(wire_index(w));
            input_blocks.emplace_back(w, add_record_of(m, w).add.block);
        }
        for (const auto& [w, syms] : outputs) output_idx.push_back(wire_index(w));
        wire_count = idx.size();
    }

    // Evaluates the subcircuit under input bits (input-wire creation order).
    void eval(std::uint64_t bits, std::vector<char>& vals) const {
        vals.assign(wire_count, 0);
        std::size_t next_input = 0;
        for (const auto& op : ops) {
            switch (op[0]) {
                case 0:
                    vals[op[1]] = (bits >> next_input) & 1;
                    ++next_input;
                    break;
                case 1:
                    vals[op[2]] = vals[op[1]];
                    vals[op[3]] = vals[op[1]];
                    break;
                case 2:
                    vals[op[3]] = !(vals[op[1]] && vals[op[2]]);
                    break;
            }
        }
    }
};

std::string bits_key(std::uint64_t bits, std::size_t n) {
    std::string key(n, '0');
    for (std::size_t i = 0; i < n; ++i) {
        if ((bits >> i) & 1) key[i] = '1';
    }
    return key;
}

} // namespace

EncodingReport encoded_assignment(std::span<const SymId> s, const Factorization& P,
                                  const Manifest& m, const Circuit& c, std::size_t upto) {
    EncodingReport rep;
    PrefixContext ctx(s, c, upto, m);
    Presence pres;
    pres.collect(s, ctx.re, P);

    for (const auto& [label, syms] : ctx.outputs) {
        WireStatus st = pres.output_status(syms);
        rep.outputs[label] = st;
        if (st == WireStatus::Violation) {
            rep.violations.push_back("output " + label + ": mixed or missing encoding factors");
        }
    }
    for (const auto& [label, syms] : ctx.absent) {
        if (pres.all_absent(syms)) {
            rep.outputs[label] = WireStatus::Absent;
        } else {
            rep.outputs[label] = WireStatus::Violation;
            rep.violations.push_back("label " + label + ": factors present before creation");
        }
    }

    Assignment tau;
    bool decodable = true;
    for (const auto& [w, blk] : ctx.input_blocks) {
        auto v = decode_add_block(P, blk);
        if (!v) {
            rep.violations.push_back("input " + w + ": add block not tiled canonically");
            decodable = false;
        } else {
            tau[w] = *v;
        }
    }
    if (decodable) rep.derived = std::move(tau);
    return rep;
}

RepresentReport check_represents(std::span<const SymId> s, const Circuit& c, std::size_t upto,
                                 const Manifest& m, const VerifyLimits& lim) {
    RepresentReport rep;
    PrefixContext ctx(s, c, upto, m);
    for (const auto& [w, blk] : ctx.input_blocks) rep.inputs.push_back(w);
    std::size_t n_inputs = ctx.input_blocks.size();
    if (n_inputs > 24) {
        rep.problems.push_back("too many inputs for surjectivity enumeration");
        return rep;
    }

    Presence pres;
    std::vector<char> vals;
    std::unordered_map<std::uint64_t, BigCount> hist;
    bool capped = false;

    SolveOptions opts;
    opts.k = 1;
    opts.mode = SolveMode::Enumerate;
    opts.budget = lim.budget;
    opts.canonical_runs = true;
    SolveStatus status = enumerate_stream(s, opts, [&](const Factorization& f, BigCount w) {
        if (rep.classes == lim.max_factorizations) {
            capped = true;
            return false;
        }
        ++rep.classes;
        rep.total += w;

        pres.collect(s, ctx.re, f);

        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < ctx.input_blocks.size(); ++i) {
            auto v = decode_add_block(f, ctx.input_blocks[i].second);
            if (!v) {
                if (rep.problems.size() < 8) {
                    rep.problems.push_back("input " + ctx.input_blocks[i].first +
                                           ": add block not tiled canonically");
                }
                return true;
            }
            if (*v) bits |= 1ull << i;
        }

        ctx.eval(bits, vals);
        for (std::size_t i = 0; i < ctx.outputs.size(); ++i) {
            WireStatus st = pres.output_status(ctx.outputs[i].second);
            WireStatus want = vals[ctx.output_idx[i]] ? WireStatus::True : WireStatus::False;
            if (st != want) {
                if (rep.problems.size() < 8) {
                    rep.problems.push_back("output " + ctx.outputs[i].first + ": encoded " +
                                           wire_status_name(st) + " but assignment implies " +
                                           wire_status_name(want));
                }
                return true;
            }
        }
        for (const auto& [label, syms] : ctx.absent) {
            if (!pres.all_absent(syms)) {
                if (rep.problems.size() < 8) {
                    rep.problems.push_back("label " + label + ": factors present before creation");
                }
                return true;
            }
        }
        hist[bits] += w;
        return true;
    });

    if (status == SolveStatus::BudgetExceeded || capped) {
        rep.inconclusive = true;
        rep.problems.push_back(capped ? "enumeration cap reached" : "search budget exceeded");
        return rep;
    }

    for (std::uint64_t bits = 0; bits < (1ull << n_inputs); ++bits) {
        auto it = hist.find(bits);
        if (it == hist.end()) {
            rep.problems.push_back("assignment " + bits_key(bits, n_inputs) +
                                   " not encoded by any factorization");
        }
    }
    for (const auto& [bits, count] : hist) {
        rep.histogram[bits_key(bits, n_inputs)] = count;
    }
    rep.pass = rep.problems.empty();
    return rep;
}

InductionReport check_represents_all_steps(const Circuit& c, const VerifyLimits& lim) {
    InductionReport rep;
    Reduction red = reduce(c);
    std::span<const SymId> full(red.s.seq);

    auto run_check = [&](std::span<const SymId> prefix, const Circuit& sub, std::size_t upto,
                         const std::string& what) {
        RepresentReport r = check_represents(prefix, sub, upto, red.manifest, lim);
        ++rep.checks;
        if (r.inconclusive) {
            rep.inconclusive = true;
            rep.problems.push_back(what + ": inconclusive (" +
                                   (r.problems.empty() ? "?" : r.problems.front()) + ")");
        } else if (!r.pass) {
            for (const auto& p : r.problems) rep.problems.push_back(what + ": " + p);
        }
    };

    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        const StepRecord& rec = red.manifest.steps[i];
        if (rec.step.kind == BuildStep::Kind::Nand) {
            // Intermediate circuit: prefix steps plus the internal split.
            Circuit inter;
            inter.steps.assign(c.steps.begin(), c.steps.begin() + i);
            inter.steps.push_back({BuildStep::Kind::Split, rec.nand.in1, rec.nand.a1, rec.nand.a2});
            run_check(full.first(rec.nand.inner.end), inter, inter.steps.size(),
                      "step " + std::to_string(i) + " (inner split)");
        }
        run_check(full.first(rec.span_end()), c, i + 1, "step " + std::to_string(i));
        if (rep.inconclusive) break;
    }
    rep.pass = !rep.inconclusive && rep.problems.empty();
    return rep;
}

namespace {

using Content = std::vector<SymId>;

std::vector<Content> factor_contents(std::span<const SymId> s, const Factorization& f,
                                     std::uint32_t from_pos) {
    std::vector<Content> out;
    for (const auto& [b, e] : f.spans) {
        if (b < from_pos) continue;
        out.emplace_back(s.begin() + b, s.begin() + e);
    }
    return out;
}

Content rep_n(SymId id, int n) { return Content(static_cast<std::size_t>(n), id); }

} // namespace

SplitConformanceReport conformance_split(std::span<const SymId> s, const Circuit& c,
                                         std::size_t split_step, const Manifest& m,
                                         const VerifyLimits& lim) {
    SplitConformanceReport rep;
    const StepRecord& rec = m.steps.at(split_step);
    const SplitSpans& sp = rec.step.kind == BuildStep::Kind::Split ? rec.split : rec.nand.inner;
    if (rec.step.kind != BuildStep::Kind::Split && rec.step.kind != BuildStep::Kind::Nand) {
        throw error("step is not a split");
    }
    std::span<const SymId> prefix = s.first(sp.b2_end);

    const WireSymsEntry A = m.wires.at(sp.in);
    SymId x = A.x, a = A.plain, abar = A.bar;
    SymId bp = sp.aux1_plain, bpb = sp.aux1_bar;
    SymId cp = sp.aux2_plain, cpb = sp.aux2_bar;
    // Separator pairs read off the string itself.
    Content d1{s[sp.begin]}, h1{s[sp.begin + 1]};
    Content d2{s[sp.b1_end]}, h2{s[sp.b1_end + 1]};

    auto make_true_head = [&] {
        std::vector<Content> t{d1,        h1,           rep_n(x, 3), Content{bp},
                               {x, a, x}, Content{cp},  rep_n(x, 5), d2,
                               h2};
        return t;
    };
    auto make_false_head = [&] {
        std::vector<Content> t{d1,          h1, rep_n(x, 2),  {x, bp, x}, Content{a},
                               {x, cp, x},  rep_n(x, 4),  d2, h2};
        return t;
    };
    std::vector<std::vector<Content>> tuples;
    {
        auto t1 = make_true_head();
        t1.insert(t1.end(), {rep_n(x, 2), rep_n(x, 4), {x, bpb, x}, Content{abar}, {x, cpb, x}, rep_n(x, 8)});
        auto t2 = make_true_head();
        t2.insert(t2.end(), {rep_n(x, 4), rep_n(x, 2), {x, bpb, x}, Content{abar}, {x, cpb, x}, rep_n(x, 8)});
        auto t3 = make_true_head();
        t3.insert(t3.end(), {rep_n(x, 6), {x, bpb, x}, Content{abar}, {x, cpb, x}, rep_n(x, 8)});
        auto t4 = make_false_head();
        t4.insert(t4.end(), {rep_n(x, 7), Content{bpb}, {x, abar, x}, Content{cpb}, rep_n(x, 3), rep_n(x, 6)});
        auto t5 = make_false_head();
        t5.insert(t5.end(), {rep_n(x, 7), Content{bpb}, {x, abar, x}, Content{cpb}, rep_n(x, 6), rep_n(x, 3)});
        auto t6 = make_false_head();
        t6.insert(t6.end(), {rep_n(x, 7), Content{bpb}, {x, abar, x}, Content{cpb}, rep_n(x, 9)});
        tuples = {t1, t2, t3, t4, t5, t6};
    }

    // Inputs created before the gadget decide the expected polarity.
    std::size_t circuit_upto = 0;
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        const auto& st = c.steps[i];
        const StepRecord& r2 = m.steps[i];
        (void)st;
        if (r2.span_begin() >= sp.begin) break;
        circuit_upto = i + 1;
    }
    // For a NAND's inner split the consuming circuit prefix excludes the nand
    // step itself.
    if (rec.step.kind == BuildStep::Kind::Nand) circuit_upto = split_step;

    Circuit sub;
    sub.steps.assign(c.steps.begin(), c.steps.begin() + circuit_upto);
    if (rec.step.kind == BuildStep::Kind::Nand) {
        sub.steps.push_back({BuildStep::Kind::Split, sp.in, sp.out1, sp.out2});
    }
    PrefixContext ctx(prefix, sub, sub.steps.size(), m);

    // Wire index of the split input for polarity evaluation.
    int in_idx = -1;
    {
        // reuse ctx op indices: find via evaluating with a marker is clumsy;
        // recompute by replaying labels
        std::unordered_map<std::string, int> idx;
        auto wire_index = [&](const std::string& w) {
            auto it = idx.find(w);
            if (it != idx.end()) return it->second;
            int i = static_cast<int>(idx.size());
            idx.emplace(w, i);
            return i;
        };
        for (const auto& st : sub.steps) {
            switch (st.kind) {
                case BuildStep::Kind::AddWire: wire_index(st.a); break;
                case BuildStep::Kind::Split:
                    wire_index(st.a);
                    wire_index(st.b);
                    wire_index(st.c);
                    break;
                case BuildStep::Kind::Nand:
                    wire_index(st.a);
                    wire_index(st.b);
                    wire_index(st.c);
                    break;
            }
        }
        in_idx = idx.at(sp.in);
    }

    SolveOptions opts;
    opts.k = 1;
    opts.mode = SolveMode::Enumerate;
    opts.budget = lim.budget;
    opts.canonical_runs = false;  // tuple order matters
    std::uint64_t seen = 0;
    bool capped = false;
    std::vector<char> vals;
    SolveStatus status = enumerate_stream(prefix, opts, [&](const Factorization& f, BigCount) {
        if (seen == lim.max_factorizations) {
            capped = true;
            return false;
        }
        ++seen;
        auto suffix = factor_contents(prefix, f, sp.begin);
        int match = -1;
        for (std::size_t t = 0; t < tuples.size(); ++t) {
            if (suffix == tuples[t]) {
                match = static_cast<int>(t);
                break;
            }
        }
        if (match < 0) {
            ++rep.unmatched;
            if (rep.problems.size() < 4) {
                std::string desc = "unmatched gadget suffix:";
                for (const auto& f2 : suffix) desc += " [" + std::to_string(f2.size()) + "]";
                rep.problems.push_back(desc);
            }
            return true;
        }
        ++rep.tuple_counts[match];

        // Polarity class check.
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < ctx.input_blocks.size(); ++i) {
            auto v = decode_add_block(f, ctx.input_blocks[i].second);
            if (!v) {
                rep.problems.push_back("input block undecodable");
                return true;
            }
            if (*v) bits |= 1ull << i;
        }
        ctx.eval(bits, vals);
        bool a_true = vals[in_idx];
        bool tuple_is_true_class = match < 3;
        if (a_true != tuple_is_true_class) {
            rep.problems.push_back("tuple " + std::to_string(match + 1) +
                                   " under prefix polarity " + (a_true ? "true" : "false"));
        }
        return true;
    });

    if (status == SolveStatus::BudgetExceeded || capped) {
        rep.inconclusive = true;
        rep.problems.push_back("enumeration incomplete");
        return rep;
    }
    bool true_class = rep.tuple_counts[0] + rep.tuple_counts[1] + rep.tuple_counts[2] > 0;
    bool false_class = rep.tuple_counts[3] + rep.tuple_counts[4] + rep.tuple_counts[5] > 0;
    if (!true_class || !false_class) {
        rep.problems.push_back("not both polarity classes realized");
    }
    rep.pass = rep.problems.empty() && rep.unmatched == 0;
    return rep;
}

NandConformanceReport conformance_nand(std::span<const SymId> s, const Circuit& c,
                                       std::size_t nand_step, const Manifest& m,
                                       const VerifyLimits& lim) {
    NandConformanceReport rep;
    const StepRecord& rec = m.steps.at(nand_step);
    if (rec.step.kind != BuildStep::Kind::Nand) throw error("step is not a nand");
    const NandSpans& nd = rec.nand;
    std::span<const SymId> prefix = s.first(nd.d2_end);  // S_i''

    const WireSymsEntry A1 = m.wires.at(nd.a1);
    const WireSymsEntry A2 = m.wires.at(nd.a2);

    Circuit sub;
    sub.steps.assign(c.steps.begin(), c.steps.begin() + nand_step);
    sub.steps.push_back({BuildStep::Kind::Split, nd.in1, nd.a1, nd.a2});
    PrefixContext ctx(prefix, sub, sub.steps.size(), m);

    // Indices of the nand operands within the evaluation order.
    int a_idx = -1, b_idx = -1;
    {
        std::unordered_map<std::string, int> idx;
        auto wire_index = [&](const std::string& w) {
            auto it = idx.find(w);
            if (it != idx.end()) return it->second;
            int i = static_cast<int>(idx.size());
            idx.emplace(w, i);
            return i;
        };
        for (const auto& st : sub.steps) {
            wire_index(st.a);
            if (st.kind != BuildStep::Kind::AddWire) {
                wire_index(st.b);
                wire_index(st.c);
            }
        }
        a_idx = idx.at(nd.in1);
        b_idx = idx.at(nd.in2);
    }

    SolveOptions opts;
    opts.k = 1;
    opts.mode = SolveMode::Enumerate;
    opts.budget = lim.budget;
    opts.canonical_runs = true;  // dichotomy checks are content-based
    std::uint64_t seen = 0;
    bool capped = false;
    Presence pres;
    std::vector<char> vals;
    SolveStatus status = enumerate_stream(prefix, opts, [&](const Factorization& f, BigCount) {
        if (seen == lim.max_factorizations) {
            capped = true;
            return false;
        }
        ++seen;
        pres.collect(prefix, ctx.re, f);

        if (!pres.singles.count(nd.cp_x)) {
            if (rep.problems.size() < 4) {
                rep.problems.push_back("factorization without x_{c'} as a complete factor");
            }
            return true;
        }
        bool has_core = pres.triples.count(xmx_key(nd.cp_x, nd.cp_plain)) > 0;
        bool has_plain = pres.singles.count(nd.cp_plain) > 0;
        if (has_core == has_plain) {
            if (rep.problems.size() < 4) {
                rep.problems.push_back("c' appears neither or both as bare and x-framed factor");
            }
            return true;
        }
        if (has_core) ++rep.with_core_xcx;
        else ++rep.with_plain_cp;

        // a1 complete factor in the S_{i-1}' part iff a2 is.
        bool a1_single = false, a2_single = false, a1_bar = false, a2_bar = false;
        for (const auto& [fb, fe] : f.spans) {
            if (fb >= nd.inner.end) break;
            if (fe - fb != 1) continue;
            SymId id = prefix[fb];
            if (id == A1.plain) a1_single = true;
            else if (id == A2.plain) a2_single = true;
            else if (id == A1.bar) a1_bar = true;
            else if (id == A2.bar) a2_bar = true;
        }
        if (a1_single != a2_single || a1_bar != a2_bar) {
            rep.problems.push_back("a1/a2 complete-factor asymmetry in S_{i-1}' part");
            return true;
        }

        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < ctx.input_blocks.size(); ++i) {
            auto v = decode_add_block(f, ctx.input_blocks[i].second);
            if (!v) {
                rep.problems.push_back("input block undecodable");
                return true;
            }
            if (*v) bits |= 1ull << i;
        }
        ctx.eval(bits, vals);
        bool both_true = vals[a_idx] && vals[b_idx];
        if (has_core != both_true) {
            if (rep.problems.size() < 4) {
                rep.problems.push_back(std::string("x_{c'} c' x_{c'} ") +
                                       (has_core ? "present" : "absent") + " but operands " +
                                       (both_true ? "both true" : "not both true"));
            }
        }
        return true;
    });

    if (status == SolveStatus::BudgetExceeded || capped) {
        rep.inconclusive = true;
        rep.problems.push_back("enumeration incomplete");
        return rep;
    }
    rep.pass = rep.problems.empty();
    return rep;
}

std::optional<Assignment> decode_witness_symbolic(std::span<const SymId> s, const Factorization& f,
                                                  const Manifest& m, const Circuit& c,
                                                  std::string* problem) {
    (void)s;
    Assignment tau;
    for (const auto& w : input_wires(c)) {
        const StepRecord& rec = add_record_of(m, w);
        auto v = decode_add_block(f, rec.add.block);
        if (!v) {
            if (problem) *problem = "input " + w + ": add block not tiled canonically";
            return std::nullopt;
        }
        tau[w] = *v;
    }
    return tau;
}

std::optional<Factorization> lift_binary_factorization(const Factorization& f,
                                                       std::size_t source_len,
                                                       const DeltaMap& dm,
                                                       std::span<const SymId> source,
                                                       std::string* problem) {
    // Image offset of each source position.
    std::unordered_map<SymId, std::uint32_t> expo;
    std::vector<std::uint64_t> offsets(source_len + 1, 0);
    {
        std::size_t i = 0;
        for (; i < source_len; ++i) {
            SymId id = source[i];
            if (!expo.count(id)) {
                // first occurrence order matches the map's order
                std::size_t k = expo.size();
                if (k >= dm.codes.size()) {
                    if (problem) *problem = "delta map smaller than source alphabet";
                    return std::nullopt;
                }
                expo[id] = dm.codes[k].second;
            }
            offsets[i + 1] = offsets[i] + expo[id] + 2;
        }
    }
    std::uint64_t delta_len = offsets[source_len];

    Factorization lifted;
    for (const auto& [b, e] : f.spans) {
        if (b >= delta_len) continue;  // Q_k suffix
        if (e > delta_len) {
            if (problem) *problem = "factor crosses the delta/Q_k boundary";
            return std::nullopt;
        }
        auto lb = std::lower_bound(offsets.begin(), offsets.end(), std::uint64_t(b));
        auto le = std::lower_bound(offsets.begin(), offsets.end(), std::uint64_t(e));
        if (lb == offsets.end() || *lb != b || le == offsets.end() || *le != e) {
            if (problem) *problem = "factor not aligned to codeword boundaries";
            return std::nullopt;
        }
        lifted.spans.emplace_back(static_cast<std::uint32_t>(lb - offsets.begin()),
                                  static_cast<std::uint32_t>(le - offsets.begin()));
    }
    return lifted;
}

Verdict end_to_end(const Circuit& c, std::uint32_t k, bool binary, const VerifyLimits& lim) {
    Verdict v;
    v.k = k;
    v.binary = binary;

    Reduction red = reduce(c);
    SatResult sat = sat_bruteforce(c);
    v.circuit_sat = sat.satisfiable();

    SymString str = k > 1 ? k_expand(red.s, k) : red.s;

    SolveOptions opts;
    opts.k = k;
    opts.mode = SolveMode::Witness;
    opts.budget = lim.budget;
    opts.canonical_runs = true;

    SolveResult res;
    DeltaMap dm;
    std::vector<SymId> image_ids;
    if (binary) {
        BinaryEncoding enc = binary_reduce(str, k);
        dm = enc.map;
        image_ids = ids_of_chars(enc.image);
        res = solve(std::span<const SymId>(image_ids), opts);
    } else {
        res = solve(str, opts);
    }

    if (res.status == SolveStatus::BudgetExceeded) {
        v.outcome = Verdict::Outcome::Inconclusive;
        v.message = "solver budget exceeded";
        return v;
    }
    v.string_sat = res.satisfiable;

    if (v.string_sat != v.circuit_sat) {
        v.outcome = Verdict::Outcome::Mismatch;
        v.message = "solver and oracle disagree";
        return v;
    }
    if (!v.circuit_sat) {
        v.outcome = Verdict::Outcome::UnsatEquivalent;
        return v;
    }

    // Decode the witness and check it satisfies the circuit.
    Factorization wit = *res.witness;
    std::string problem;
    if (binary) {
        auto lifted = lift_binary_factorization(wit, str.seq.size(), dm,
                                                std::span<const SymId>(str.seq), &problem);
        if (!lifted) {
            v.outcome = Verdict::Outcome::Mismatch;
            v.message = "witness lift failed: " + problem;
            return v;
        }
        wit = *lifted;
    }
    auto tau = decode_witness_symbolic(std::span<const SymId>(str.seq), wit, red.manifest, c,
                                       &problem);
    if (!tau) {
        v.outcome = Verdict::Outcome::Mismatch;
        v.message = "witness decode failed: " + problem;
        return v;
    }
    v.decoded = tau;
    auto vals = eval_circuit(c, *tau);
    v.witness_satisfies = vals.at(c.output);
    if (!v.witness_satisfies) {
        v.outcome = Verdict::Outcome::Mismatch;
        v.message = "decoded witness does not satisfy the circuit";
        return v;
    }
    v.outcome = Verdict::Outcome::SatEquivalent;
    return v;
}

std::string verdict_to_json(const Verdict& v, const std::string& name) {
    nlohmann::json j;
    if (!name.empty()) j["name"] = name;
    switch (v.outcome) {
        case Verdict::Outcome::SatEquivalent: j["outcome"] = "sat-equivalent"; break;
        case Verdict::Outcome::UnsatEquivalent: j["outcome"] = "unsat-equivalent"; break;
        case Verdict::Outcome::Mismatch: j["outcome"] = "mismatch"; break;
        case Verdict::Outcome::Inconclusive: j["outcome"] = "inconclusive"; break;
    }
    j["pass"] = v.pass();
    j["circuit_sat"] = v.circuit_sat;
    j["string_sat"] = v.string_sat;
    j["k"] = v.k;
    j["binary"] = v.binary;
    if (v.decoded) {
        nlohmann::json tau;
        for (const auto& [w, b] : *v.decoded) tau[w] = b;
        j["witness_assignment"] = std::move(tau);
        j["witness_satisfies"] = v.witness_satisfies;
    }
    if (!v.message.empty()) j["message"] = v.message;
    return j.dump(2);
}

} // namespace palin
