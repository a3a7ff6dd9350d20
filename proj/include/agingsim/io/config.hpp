// Copyright 2026 The agingsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <agingsim/params.hpp>

#include <cctype>
#include <charconv>
#include <initializer_list>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace agingsim::io {

/// Flat `key = value` document. Keys may be dotted (params.g); '#' starts a
/// comment. Every key must be consumed or listed as allowed, otherwise
/// check_known() rejects the document.
class Config {
public:
    static Config parse(std::string_view text) {
        Config cfg;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t end = std::min(text.find('\n', pos), text.size());
            std::string_view line = text.substr(pos, end - pos);
            pos = end + 1;
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) {
                if (end == text.size()) break;
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty() || !valid_key(key))
                throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": invalid key '" + key + "'");
            if (cfg.values_.count(key))
                throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
            cfg.values_[key] = value;
            if (end == text.size()) break;
        }
        return cfg;
    }

    static Config load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    const std::map<std::string, std::string>& entries() const { return values_; }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::optional<std::string> string(const std::string& key) const {
        known_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    std::string string(const std::string& key, const std::string& fallback) const {
        return string(key).value_or(fallback);
    }

    std::optional<double> number(const std::string& key) const {
        const auto s = string(key);
        if (!s) return std::nullopt;
        return to_double(key, *s);
    }

    double number(const std::string& key, double fallback) const { return number(key).value_or(fallback); }

    std::optional<int> integer(const std::string& key) const {
        const auto s = string(key);
        if (!s) return std::nullopt;
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
        if (ec != std::errc() || ptr != s->data() + s->size())
            throw Error(ErrorKind::ConfigError, key + ": expected an integer, got '" + *s + "'");
        return v;
    }

    int integer(const std::string& key, int fallback) const { return integer(key).value_or(fallback); }

    std::optional<bool> boolean(const std::string& key) const {
        const auto s = string(key);
        if (!s) return std::nullopt;
        if (*s == "true" || *s == "on" || *s == "yes" || *s == "1") return true;
        if (*s == "false" || *s == "off" || *s == "no" || *s == "0") return false;
        throw Error(ErrorKind::ConfigError, key + ": expected a boolean, got '" + *s + "'");
    }

    /// Comma-separated numbers, or `start:step:stop` (inclusive).
    std::optional<std::vector<double>> numbers(const std::string& key) const {
        const auto s = string(key);
        if (!s) return std::nullopt;
        std::vector<double> out;
        if (s->find(':') != std::string::npos) {
            std::vector<double> parts;
            for (auto part : split(*s, ':')) parts.push_back(to_double(key, std::string(trim(part))));
            if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0])
                throw Error(ErrorKind::ConfigError, key + ": range must be start:step:stop with step > 0");
            const auto count = static_cast<long>(std::floor((parts[2] - parts[0]) / parts[1] + 0.5));
            for (long i = 0; i <= count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[1]);
            return out;
        }
        for (auto part : split(*s, ',')) out.push_back(to_double(key, std::string(trim(part))));
        return out;
    }

    /// Marks keys as understood without reading them.
    void allow(std::initializer_list<std::string> keys) const { known_.insert(keys.begin(), keys.end()); }

    /// Throws ConfigError naming every key that nothing read.
    void check_known() const {
        std::string unknown;
        for (const auto& [key, value] : values_)
            if (!known_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
        if (!unknown.empty()) throw Error(ErrorKind::ConfigError, "unknown key(s): " + unknown);
    }

private:
    static std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    }

    static bool valid_key(const std::string& key) {
        if (key.front() == '.' || key.back() == '.') return false;
        for (char c : key)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
        return key.find("..") == std::string::npos;
    }

    static std::vector<std::string_view> split(std::string_view s, char sep) {
        std::vector<std::string_view> out;
        std::size_t pos = 0;
        while (true) {
            const auto next = s.find(sep, pos);
            out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
            if (next == std::string_view::npos) break;
            pos = next + 1;
        }
        return out;
    }

    static double to_double(const std::string& key, const std::string& s) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
            throw Error(ErrorKind::ConfigError, key + ": expected a number, got '" + s + "'");
        return v;
    }

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> known_;
};

}  // namespace agingsim::io
