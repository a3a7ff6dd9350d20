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

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace agingsim::io {

/// 12 significant digits, the precision of every numeric output.
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Comma-separated table with a header row and LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
        write_fields(header);
    }

    void row(const std::vector<double>& values) {
        std::vector<std::string> fields;
        fields.reserve(values.size());
        for (double v : values) fields.push_back(fmt(v));
        add(fields);
    }

    void add(const std::vector<std::string>& fields) {
        if (fields.size() != columns_) throw Error(ErrorKind::InvalidArgument, "CSV row width mismatch");
        write_fields(fields);
    }

    const std::string& str() const { return text_; }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        out << text_;
        if (!out) throw Error(ErrorKind::InvalidArgument, "failed to write '" + path + "'");
    }

private:
    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }

    void write_fields(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) text_ += (i ? "," : "") + quote(fields[i]);
        text_ += '\n';
    }

    std::size_t columns_;
    std::string text_;
};

}  // namespace agingsim::io
