#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace gausscov {

/// Minimal streaming JSON emitter with a fixed number format.
///
/// Reports are compared byte-for-byte across runs, so serialization must
/// be fully specified: objects keep insertion order, floating-point values
/// are printed with printf "%.17g" (lossless for doubles), and the
/// infinite-F sentinel becomes the string "inf". Output is one compact
/// line with no trailing whitespace.
class JsonWriter {
public:
    void begin_object() { open('{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void end_array() { close(']'); }

    void key(std::string_view k) {
        comma();
        quote(k);
        out_ += ':';
        pending_value_ = true;
    }

    void value(double v) {
        comma();
        if (std::isinf(v)) {
            out_ += v > 0 ? "\"inf\"" : "\"-inf\"";
            return;
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out_ += buf;
    }

    void value(std::uint64_t v) { comma(); out_ += std::to_string(v); }
    void value(std::int64_t v) { comma(); out_ += std::to_string(v); }
    void value(int v) { value(static_cast<std::int64_t>(v)); }
    void value(bool v) { comma(); out_ += v ? "true" : "false"; }
    void value(std::string_view v) { comma(); quote(v); }
    void value(const char* v) { value(std::string_view(v)); }

    const std::string& str() const { return out_; }

private:
    void open(char c) {
        comma();
        out_ += c;
        first_in_scope_ = true;
    }

    void close(char c) {
        out_ += c;
        first_in_scope_ = false;
    }

    void comma() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!first_in_scope_ && !out_.empty()) out_ += ',';
        first_in_scope_ = false;
    }

    void quote(std::string_view s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\r': out_ += "\\r"; break;
                case '\t': out_ += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += c;
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    bool first_in_scope_ = true;
    bool pending_value_ = false;
};

} // namespace gausscov
