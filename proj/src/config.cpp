#include "zoll/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zoll/errors.hpp"
#include "zoll/region.hpp"

namespace zoll {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    }
    return true;
}

}  // namespace

Config Config::parse(std::string_view text, std::string source) {
    Config cfg;
    cfg.source_ = std::move(source);
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        std::string line = trim(raw);
        const auto where = [&] { return cfg.source_ + ":" + std::to_string(line_no); };
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(where() + ": unterminated section header", line);
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!valid_name(section)) throw ParseError(where() + ": bad section name", line);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(where() + ": expected 'key = value'", line);
        const std::string name = trim(std::string_view(line).substr(0, eq));
        if (!valid_name(name)) throw ParseError(where() + ": bad key name", name);
        std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto close = value.size() > 1 && value.front() == '"' ? value.find('"', 1) : std::string::npos;
        if (close != std::string::npos) {
            const std::string rest = trim(std::string_view(value).substr(close + 1));
            if (!rest.empty() && rest.front() != '#') throw ParseError(where() + ": text after closing quote", name);
            value = value.substr(1, close - 1);
        } else if (const auto c = value.find(" #"); c != std::string::npos) {
            value = trim(std::string_view(value).substr(0, c));
        }
        const std::string key = section.empty() ? name : section + "." + name;
        if (cfg.entries_.count(key)) throw ParseError(where() + ": duplicate key", key);
        cfg.entries_[key] = {value, line_no};
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

void Config::fail(const std::string& key, const std::string& msg) const {
    const int line = line_of(key);
    std::string where = source_;
    if (line > 0) where += ":" + std::to_string(line);
    throw ParseError(where + ": " + msg, key);
}

const Config::Entry& Config::entry(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) fail(key, "missing required key");
    return it->second;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const { return entry(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? entry(key).value : fallback;
}

double Config::get_double(const std::string& key) const {
    try {
        return parse_number(entry(key).value);
    } catch (const ParseError& e) {
        fail(key, "not a number: '" + entry(key).value + "'");
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = entry(key).value;
    std::size_t used = 0;
    long r = 0;
    try {
        r = std::stol(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) fail(key, "not an integer: '" + v + "'");
    return static_cast<int>(r);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = entry(key).value;
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    fail(key, "not a boolean: '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    const std::string v = entry(key).value;
    std::size_t start = 0;
    while (start <= v.size()) {
        const std::size_t comma = v.find(',', start);
        const std::string item = trim(std::string_view(v).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (item.empty()) fail(key, "empty list item");
        try {
            out.push_back(parse_number(item));
        } catch (const ParseError&) {
            fail(key, "not a number: '" + item + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    const std::string& v = entry(key).value;
    int depth = 0;
    std::string cur;
    for (char c : v) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == ';' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = {value, 0}; }

std::vector<std::string> Config::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, e] : entries_) out.push_back(k);
    return out;
}

int Config::line_of(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

void Config::require_known(const std::vector<std::string>& allowed) const {
    for (const auto& [k, e] : entries_) {
        bool ok = false;
        for (const std::string& a : allowed) {
            if (!a.empty() && a.back() == '*') ok = k.compare(0, a.size() - 1, a, 0, a.size() - 1) == 0;
            else ok = k == a;
            if (ok) break;
        }
        if (!ok) fail(k, "unknown key");
    }
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, e] : entries_) out += k + " = " + e.value + "\n";
    return out;
}

std::string Config::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace zoll
