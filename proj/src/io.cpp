#include "gll/io.hpp"

#include <cmath>
#include <cstdio>

namespace gll::io {

std::string fmt17(double v) {
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    if (std::isnan(v)) return "\"nan\"";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void JsonWriter::sep() {
    if (!need_comma_.empty()) {
        if (need_comma_.back()) out_ += ',';
        need_comma_.back() = true;
    }
}

JsonWriter& JsonWriter::begin_object() {
    sep();
    out_ += '{';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    sep();
    out_ += '[';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    sep();
    out_ += '"';
    out_ += json_escape(k);
    out_ += "\":";
    need_comma_.back() = false; // the upcoming value completes the pair
    return *this;
}

JsonWriter& JsonWriter::value_raw(const std::string& raw) {
    sep();
    out_ += raw;
    return *this;
}

JsonWriter& JsonWriter::value(double v) { return value_raw(fmt17(v)); }

JsonWriter& JsonWriter::value(int64_t v) { return value_raw(std::to_string(v)); }

JsonWriter& JsonWriter::value(bool v) { return value_raw(v ? "true" : "false"); }

JsonWriter& JsonWriter::value(const std::string& s) {
    return value_raw("\"" + json_escape(s) + "\"");
}

JsonWriter& JsonWriter::value(const std::complex<double>& z) {
    begin_array();
    value(z.real());
    value(z.imag());
    return end_array();
}

JsonWriter& JsonWriter::null() { return value_raw("null"); }

void append_estimate(JsonWriter& w, const Estimate& e, bool with_note) {
    w.begin_object();
    w.key("value").value(e.value);
    w.key("kind").value(to_string(e.kind));
    w.key("radius").value(e.radius);
    w.key("certified").value(e.certified);
    if (with_note) w.key("note").value(e.note);
    w.end_object();
}

void append_verdict(JsonWriter& w, const Verdict& v) {
    w.begin_object();
    w.key("status").value(to_string(v.status));
    w.key("radius").value(v.radius);
    w.key("witness");
    if (v.witness_edge) {
        w.begin_object();
        w.key("edge").begin_array().value(v.witness_edge->v.enc).value(v.witness_edge->w.enc).end_array();
        w.key("value").value(v.witness_value);
        w.end_object();
    } else if (v.witness_vertex) {
        w.begin_object();
        w.key("vertex").value(v.witness_vertex->enc);
        w.key("value").value(v.witness_value);
        w.end_object();
    } else {
        w.null();
    }
    w.key("note").value(v.note);
    w.end_object();
}

std::string to_json(const Estimate& e) {
    JsonWriter w;
    append_estimate(w, e, true);
    return w.str();
}

std::string to_json(const Verdict& v) {
    JsonWriter w;
    append_verdict(w, v);
    return w.str();
}

std::string to_csv(const ShellProfile& p) {
    std::string out = "shell,n,value\n";
    for (size_t i = 0; i < p.values.size(); ++i) {
        out += p.quantity;
        out += ',';
        out += std::to_string(p.first_shell + int(i));
        out += ',';
        std::string v = fmt17(p.values[i]);
        // CSV keeps bare tokens; fmt17 quotes only non-finite values
        if (!v.empty() && v.front() == '"') v = v.substr(1, v.size() - 2);
        out += v;
        out += '\n';
    }
    return out;
}

} // namespace gll::io
