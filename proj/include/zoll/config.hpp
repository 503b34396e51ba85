#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace zoll {

/// `key = value` lines under `[section]` headers; keys are addressed as "section.key".
/// Grammar in docs/config-format.md.
class Config {
public:
    static Config parse(std::string_view text, std::string source = "<string>");
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    /// Numbers accept `pi` expressions such as `3*pi/4`.
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated numbers; empty when absent.
    std::vector<double> get_doubles(const std::string& key) const;
    /// Entries split on ';' at bracket depth zero (region descriptors contain commas).
    std::vector<std::string> get_list(const std::string& key) const;

    /// Command-line override; creates the key if missing.
    void set(const std::string& key, const std::string& value);

    /// Keys in sorted order.
    std::vector<std::string> keys() const;
    /// 1-based line of a key, 0 for overrides and missing keys.
    int line_of(const std::string& key) const;
    const std::string& source() const { return source_; }

    /// Throws ParseError naming the first key outside `allowed`. A trailing '*' in an allowed
    /// entry matches any suffix.
    void require_known(const std::vector<std::string>& allowed) const;

    /// Sorted `key = value` lines.
    std::string canonical() const;
    /// FNV-1a 64 of the canonical text, 16 hex digits.
    std::string hash() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    const Entry& entry(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

    std::map<std::string, Entry> entries_;
    std::string source_;
};

}  // namespace zoll
