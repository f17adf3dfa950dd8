// Copyright 2026 The qbias Authors
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

/// @file table.hpp
/// Byte-stable CSV/JSON emission. Floats always use 12 significant digits
/// so golden files compare equal across runs and platforms.

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qbias/error.hpp"

namespace qbias {

inline constexpr std::string_view kVersion = "1.0.0";

/// %.12g, with negative zero printed as 0.
inline std::string format_double(double v) {
    if (v == 0.0) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class Table {
  public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    /// Metadata lines, emitted in insertion order.
    Table &meta(std::string key, std::string value) {
        meta_.emplace_back(std::move(key), std::move(value));
        return *this;
    }

    class Row {
      public:
        Row &operator<<(double v) { return add(format_double(v)); }
        Row &operator<<(std::string_view v) { return add(std::string(v)); }
        Row &operator<<(const char *v) { return add(v); }
        template <class I>
            requires std::is_integral_v<I>
        Row &operator<<(I v) {
            return add(std::to_string(v));
        }

      private:
        friend class Table;
        explicit Row(std::vector<std::string> &cells) : cells_(&cells) {}
        Row &add(std::string s) {
            cells_->push_back(std::move(s));
            return *this;
        }
        std::vector<std::string> *cells_;
    };

    Row row() {
        rows_.emplace_back();
        return Row(rows_.back());
    }

    const std::vector<std::string> &columns() const { return columns_; }
    const std::vector<std::vector<std::string>> &rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>> &metadata() const { return meta_; }
    bool empty() const { return rows_.empty(); }

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

enum class Format { Csv, Json };

namespace detail {
inline void check_table(const Table &t) {
    if (t.empty()) throw Error("refusing to write an empty table");
    for (const auto &r : t.rows()) {
        if (r.size() != t.columns().size()) throw SizeError("table row width mismatch");
    }
}

inline std::ofstream open_out(const std::filesystem::path &path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

inline void close_out(std::ofstream &out, const std::filesystem::path &path) {
    out.flush();
    if (!out) throw Error("write failed for " + path.string());
}
} // namespace detail

inline std::string to_csv(const Table &t) {
    detail::check_table(t);
    std::string s;
    for (const auto &[k, v] : t.metadata()) s += "# " + k + "=" + v + "\n";
    for (std::size_t i = 0; i < t.columns().size(); ++i) {
        s += (i ? "," : "") + t.columns()[i];
    }
    s += "\n";
    for (const auto &r : t.rows()) {
        for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
        s += "\n";
    }
    return s;
}

/// Cells stay strings so the JSON carries exactly the CSV text.
inline nlohmann::ordered_json to_json(const Table &t) {
    detail::check_table(t);
    nlohmann::ordered_json j;
    j["meta"] = nlohmann::ordered_json::object();
    for (const auto &[k, v] : t.metadata()) j["meta"][k] = v;
    j["columns"] = t.columns();
    j["rows"] = t.rows();
    return j;
}

inline void emit_summary(const Table &t, Format format, const std::filesystem::path &path) {
    const std::string text = format == Format::Csv ? to_csv(t) : to_json(t).dump(2) + "\n";
    auto out = detail::open_out(path);
    out << text;
    detail::close_out(out, path);
}

inline void write_json(const nlohmann::ordered_json &j, const std::filesystem::path &path) {
    auto out = detail::open_out(path);
    out << j.dump(2) << "\n";
    detail::close_out(out, path);
}

} // namespace qbias
