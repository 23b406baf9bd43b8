#include "palinreduce/symbols.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace palin {

bool is_separator(Role r) {
    return r == Role::Dollar || r == Role::Hash;
}

std::size_t SymbolHash::operator()(const Symbol& s) const {
    std::size_t h = std::hash<std::string>()(s.tag);
    h ^= (std::size_t(s.role) + 0x9e3779b97f4a7c15ull) + (h << 6) + (h >> 2);
    h ^= (std::size_t(s.serial) + 0x9e3779b97f4a7c15ull) + (h << 6) + (h >> 2);
    return h;
}

namespace {

bool valid_tag(std::string_view tag) {
    if (tag.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(tag[0])) || tag[0] == '_')) return false;
    for (char c : tag) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    }
    return true;
}

std::uint32_t parse_serial(std::string_view text, std::string_view token) {
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
        throw error("malformed token: " + std::string(token));
    }
    return value;
}

} // namespace

std::string token_of(const Symbol& s) {
    switch (s.role) {
        case Role::Plain:  return s.tag;
        case Role::Bar:    return "~" + s.tag;
        case Role::X:      return "x." + s.tag;
        case Role::Dollar: return "$" + std::to_string(s.serial);
        case Role::Hash:   return "#" + std::to_string(s.serial);
    }
    throw error("unreachable symbol role");
}

Symbol symbol_from_token(std::string_view token) {
    if (token.empty()) throw error("malformed token: <empty>");
    if (token[0] == '$') return Symbol{Role::Dollar, "", parse_serial(token.substr(1), token)};
    if (token[0] == '#') return Symbol{Role::Hash, "", parse_serial(token.substr(1), token)};
    if (token[0] == '~') {
        std::string tag(token.substr(1));
        if (!valid_tag(tag)) throw error("malformed token: " + std::string(token));
        return Symbol{Role::Bar, tag, 0};
    }
    if (token.size() > 2 && token.substr(0, 2) == "x.") {
        std::string tag(token.substr(2));
        if (!valid_tag(tag)) throw error("malformed token: " + std::string(token));
        return Symbol{Role::X, tag, 0};
    }
    std::string tag(token);
    if (!valid_tag(tag)) throw error("malformed token: " + std::string(token));
    return Symbol{Role::Plain, tag, 0};
}

SymId SymbolPool::intern(const Symbol& s) {
    auto it = ids_.find(s);
    if (it != ids_.end()) return it->second;
    SymId id = static_cast<SymId>(symbols_.size());
    symbols_.push_back(s);
    ids_.emplace(s, id);
    return id;
}

std::optional<SymId> SymbolPool::find(const Symbol& s) const {
    auto it = ids_.find(s);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const Symbol& SymbolPool::at(SymId id) const {
    if (id >= symbols_.size()) throw error("symbol id out of range");
    return symbols_[id];
}

SymbolPool::WireSyms SymbolPool::fresh_wire_symbols(std::string_view tag) {
    std::string t(tag);
    if (!valid_tag(t)) throw error("invalid tag: " + t);
    if (!tags_.insert(t).second) throw error("duplicate tag: " + t);
    WireSyms w;
    w.plain = intern(Symbol{Role::Plain, t, 0});
    w.bar = intern(Symbol{Role::Bar, t, 0});
    w.x = intern(Symbol{Role::X, t, 0});
    return w;
}

SymbolPool::AuxSyms SymbolPool::fresh_aux_symbols(std::string_view tag) {
    std::string t(tag);
    if (!valid_tag(t)) throw error("invalid tag: " + t);
    if (!tags_.insert(t).second) throw error("duplicate tag: " + t);
    AuxSyms a;
    a.plain = intern(Symbol{Role::Plain, t, 0});
    a.bar = intern(Symbol{Role::Bar, t, 0});
    return a;
}

SymbolPool::SepPair SymbolPool::fresh_separator_pair() {
    SepPair p;
    p.serial = ++sep_serial_;
    p.dollar = intern(Symbol{Role::Dollar, "", p.serial});
    p.hash = intern(Symbol{Role::Hash, "", p.serial});
    return p;
}

bool SymbolPool::tag_registered(std::string_view tag) const {
    return tags_.count(std::string(tag)) > 0;
}

std::string SymbolPool::fresh_primed_tag(std::string_view base) const {
    std::string t(base);
    do {
        t += '\'';
    } while (tags_.count(t) > 0);
    return t;
}

bool symbols_equal(const SymString& a, const SymString& b) {
    if (a.seq.size() != b.seq.size()) return false;
    for (std::size_t i = 0; i < a.seq.size(); ++i) {
        if (!(a.symbol_at(i) == b.symbol_at(i))) return false;
    }
    return true;
}

std::string serialize(const SymString& s) {
    std::string out;
    for (std::size_t i = 0; i < s.seq.size(); ++i) {
        if (i) out += ' ';
        out += token_of(s.symbol_at(i));
    }
    return out;
}

SymString parse_symstring(std::string_view text) {
    std::string_view rest = text;
    // Optional header line.
    auto nl = rest.find('\n');
    std::string_view first = rest.substr(0, nl == std::string_view::npos ? rest.size() : nl);
    auto trimmed = first;
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' ')) trimmed.remove_suffix(1);
    if (trimmed.rfind("palinreduce-symstring", 0) == 0) {
        if (trimmed != kSymstringHeader) {
            throw error("unsupported symstring version: " + std::string(trimmed));
        }
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    }

    SymString out;
    std::size_t i = 0;
    while (i < rest.size()) {
        while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
        std::size_t start = i;
        while (i < rest.size() && !std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
        if (start == i) break;
        Symbol sym = symbol_from_token(rest.substr(start, i - start));
        out.seq.push_back(out.pool.intern(sym));
    }
    return out;
}

namespace {

const char* role_name(Role r) {
    switch (r) {
        case Role::Plain: return "plain";
        case Role::Bar: return "bar";
        case Role::X: return "x";
        case Role::Dollar: return "dollar";
        case Role::Hash: return "hash";
    }
    return "?";
}

Role role_from_name(const std::string& n) {
    if (n == "plain") return Role::Plain;
    if (n == "bar") return Role::Bar;
    if (n == "x") return Role::X;
    if (n == "dollar") return Role::Dollar;
    if (n == "hash") return Role::Hash;
    throw error("unknown symbol role: " + n);
}

} // namespace

std::string symstring_to_json(const SymString& s) {
    nlohmann::json j;
    j["format"] = "palinreduce-symstring";
    j["version"] = 1;
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < s.seq.size(); ++i) {
        const Symbol& sym = s.symbol_at(i);
        nlohmann::json e;
        e["role"] = role_name(sym.role);
        if (is_separator(sym.role)) e["serial"] = sym.serial;
        else e["tag"] = sym.tag;
        arr.push_back(std::move(e));
    }
    j["symbols"] = std::move(arr);
    return j.dump();
}

SymString symstring_from_json(std::string_view json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    if (j.value("format", "") != "palinreduce-symstring" || j.value("version", 0) != 1) {
        throw error("not a palinreduce-symstring v1 JSON document");
    }
    SymString out;
    for (const auto& e : j.at("symbols")) {
        Symbol sym;
        sym.role = role_from_name(e.at("role").get<std::string>());
        if (is_separator(sym.role)) sym.serial = e.at("serial").get<std::uint32_t>();
        else sym.tag = e.at("tag").get<std::string>();
        out.seq.push_back(out.pool.intern(sym));
    }
    return out;
}

void write_symstring_file(const std::string& path, const SymString& s, bool json) {
    std::ofstream f(path);
    if (!f) throw error("cannot open for writing: " + path);
    if (json) {
        f << symstring_to_json(s) << '\n';
    } else {
        f << kSymstringHeader << '\n' << serialize(s) << '\n';
    }
}

SymString read_symstring_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw error("cannot open: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string text = ss.str();
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '{') return symstring_from_json(text);
    return parse_symstring(text);
}

} // namespace palin
