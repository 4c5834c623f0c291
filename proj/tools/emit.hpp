#pragma once

// Output plumbing for the command-line tool: a stream buffer that hashes
// everything written through it, and a small table emitter for CSV / JSON.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <streambuf>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace grimm::cli {

// 64-bit FNV-1a.
class Fnv1a {
public:
    void update(const char* data, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= static_cast<unsigned char>(data[i]);
            h_ *= 0x100000001b3ULL;
        }
    }
    std::uint64_t value() const { return h_; }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
        return buf;
    }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

// Forwards to `sink` (if any) while hashing every byte.
class DigestBuf : public std::streambuf {
public:
    explicit DigestBuf(std::streambuf* sink) : sink_(sink) {}
    const Fnv1a& digest() const { return hash_; }

protected:
    int_type overflow(int_type ch) override {
        if (traits_type::eq_int_type(ch, traits_type::eof())) return traits_type::not_eof(ch);
        char c = traits_type::to_char_type(ch);
        hash_.update(&c, 1);
        if (sink_ && traits_type::eq_int_type(sink_->sputc(c), traits_type::eof())) return traits_type::eof();
        return ch;
    }
    std::streamsize xsputn(const char* s, std::streamsize n) override {
        hash_.update(s, static_cast<std::size_t>(n));
        return sink_ ? sink_->sputn(s, n) : n;
    }
    int sync() override { return sink_ ? sink_->pubsync() : 0; }

private:
    std::streambuf* sink_;
    Fnv1a hash_;
};

enum class Format { csv, json };

using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string to_text(const Cell& c) {
    struct V {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(const std::string& s) const { return s; }
    };
    return std::visit(V{}, c);
}

inline nlohmann::ordered_json to_json(const Cell& c) {
    struct V {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(bool b) const { return b; }
        nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
        nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
        // Round-trip through the same text as CSV so both formats agree.
        nlohmann::ordered_json operator()(double v) const { return std::stod(format_double(v)); }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    };
    return std::visit(V{}, c);
}

// CSV: a header line, one line per row, and an optional trailing
// `key=value,...` summary line. JSON: {"rows": [...], "summary": {...}}.
class Emitter {
public:
    Emitter(std::ostream& out, Format fmt) : out_(out), fmt_(fmt) {}

    void header(std::vector<std::string> cols) {
        cols_ = std::move(cols);
        if (fmt_ == Format::csv) {
            for (std::size_t i = 0; i < cols_.size(); ++i) out_ << (i ? "," : "") << cols_[i];
            out_ << '\n';
        }
    }

    void row(const std::vector<Cell>& cells) {
        if (fmt_ == Format::csv) {
            for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << to_text(cells[i]);
            out_ << '\n';
        } else {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < cells.size() && i < cols_.size(); ++i) obj[cols_[i]] = to_json(cells[i]);
            rows_.push_back(std::move(obj));
        }
    }

    void summary(const std::vector<std::pair<std::string, Cell>>& kv) {
        if (fmt_ == Format::csv) {
            for (std::size_t i = 0; i < kv.size(); ++i) out_ << (i ? "," : "") << kv[i].first << '=' << to_text(kv[i].second);
            out_ << '\n';
        } else {
            summary_ = nlohmann::ordered_json::object();
            for (const auto& [k, v] : kv) (*summary_)[k] = to_json(v);
        }
    }

    void finish() {
        if (fmt_ != Format::json) return;
        nlohmann::ordered_json doc = nlohmann::ordered_json::object();
        if (!cols_.empty()) doc["rows"] = rows_;
        if (summary_) doc["summary"] = *summary_;
        out_ << doc.dump(2) << '\n';
    }

private:
    std::ostream& out_;
    Format fmt_;
    std::vector<std::string> cols_;
    nlohmann::ordered_json rows_ = nlohmann::ordered_json::array();
    std::optional<nlohmann::ordered_json> summary_;
};

} // namespace grimm::cli
