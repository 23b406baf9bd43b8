#include "palinreduce/transforms.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "palinreduce/solver.hpp"

namespace palin {

std::uint32_t DeltaMap::exponent_of(const Symbol& s) const {
    for (const auto& [sym, e] : codes) {
        if (sym == s) return e;
    }
    throw error("symbol not in delta map: " + token_of(s));
}

BinaryEncoding delta_encode(const SymString& s, bool prime) {
    BinaryEncoding enc;
    enc.map.prime = prime;
    std::unordered_map<SymId, std::uint32_t> expo;
    std::uint32_t next = prime ? 3 : 1;
    std::vector<std::pair<SymId, std::uint32_t>> order;
    for (SymId id : s.seq) {
        if (expo.emplace(id, next).second) {
            order.emplace_back(id, next);
            ++next;
        }
    }
    for (const auto& [id, e] : order) enc.map.codes.emplace_back(s.pool.at(id), e);
    for (SymId id : s.seq) {
        enc.image += 'b';
        enc.image.append(expo[id], 'a');
        enc.image += 'b';
    }
    return enc;
}

std::string delta_map_to_json(const DeltaMap& m) {
    nlohmann::json j;
    j["format"] = "palinreduce-delta";
    j["version"] = 1;
    j["variant"] = m.prime ? "prime" : "standard";
    nlohmann::json codes = nlohmann::json::array();
    for (const auto& [sym, e] : m.codes) {
        codes.push_back({{"token", token_of(sym)}, {"exponent", e}});
    }
    j["codes"] = std::move(codes);
    return j.dump(2);
}

DeltaMap delta_map_from_json(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "palinreduce-delta" || j.value("version", 0) != 1) {
        throw error("not a palinreduce-delta v1 document");
    }
    DeltaMap m;
    m.prime = j.at("variant").get<std::string>() == "prime";
    for (const auto& e : j.at("codes")) {
        m.codes.emplace_back(symbol_from_token(e.at("token").get<std::string>()),
                             e.at("exponent").get<std::uint32_t>());
    }
    return m;
}

std::string qk_suffix(std::uint32_t k) {
    if (k < 1) throw error("k must be >= 1");
    static const std::string period = "abbaab";
    std::string out;
    out.reserve(20 * k);
    for (std::uint32_t i = 0; i < 20 * k; ++i) out += period[i % 6];
    return out;
}

BinaryEncoding binary_reduce(const SymString& s, std::uint32_t k) {
    if (k < 1) throw error("k must be >= 1");
    if (k == 1) return delta_encode(s, false);
    BinaryEncoding enc = delta_encode(s, true);
    enc.image += qk_suffix(k);
    return enc;
}

SymString k_expand(const SymString& s, std::uint32_t k) {
    if (k < 1) throw error("k must be >= 1");

    // Distinct form-substrings in first-occurrence order: single non-x
    // letters, single x letters, and contiguous x t x with matching tag.
    std::vector<SymId> a_forms, x_forms;
    std::vector<std::array<SymId, 3>> xax_forms;
    std::set<SymId> seen_a, seen_x;
    std::set<std::array<SymId, 3>> seen_xax;
    for (std::size_t i = 0; i < s.seq.size(); ++i) {
        const Symbol& sym = s.symbol_at(i);
        if (sym.role == Role::Plain || sym.role == Role::Bar) {
            if (seen_a.insert(s.seq[i]).second) a_forms.push_back(s.seq[i]);
        } else if (sym.role == Role::X) {
            if (seen_x.insert(s.seq[i]).second) x_forms.push_back(s.seq[i]);
        }
    }
    for (std::size_t i = 0; i + 2 < s.seq.size(); ++i) {
        if (s.seq[i] != s.seq[i + 2]) continue;
        if (s.symbol_at(i).role != Role::X) continue;
        Role mid = s.symbol_at(i + 1).role;
        if (mid != Role::Plain && mid != Role::Bar) continue;
        std::array<SymId, 3> form{s.seq[i], s.seq[i + 1], s.seq[i + 2]};
        if (seen_xax.insert(form).second) xax_forms.push_back(form);
    }

    SymString out = s;
    auto sep = [&] {
        auto p = out.pool.fresh_separator_pair();
        out.seq.push_back(p.dollar);
        out.seq.push_back(p.hash);
    };
    auto block = [&](const std::vector<SymId>& content) {
        sep();
        for (std::uint32_t copy = 1; copy < k; ++copy) {
            for (SymId id : content) out.seq.push_back(id);
            sep();
        }
    };

    sep();  // joins s and T
    for (SymId id : a_forms) block({id});
    for (SymId id : x_forms) block({id});
    for (const auto& f : xax_forms) block({f[0], f[1], f[2]});
    return out;
}

std::vector<std::string> distinct_palindromic_substrings(std::string_view s) {
    auto ids = ids_of_chars(s);
    PalindromeTable t = PalindromeTable::build(ids);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j <= s.size(); ++j) {
            if (t.is_palindrome(i, j)) seen.insert(std::string(s.substr(i, j - i)));
        }
    }
    std::vector<std::string> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

} // namespace palin
