#pragma once

#include <complex>
#include <string>

#include "gll/estimate.hpp"

namespace gll::io {

// Floating point is printed with 17 significant digits so that output is
// byte-stable and lossless; non-finite values are emitted as JSON strings.
std::string fmt17(double v);

std::string json_escape(const std::string& s);

// Minimal append-style JSON writer with fixed key order (insertion order).
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value_raw(const std::string& raw); // pre-serialized
    JsonWriter& value(double v);
    JsonWriter& value(int64_t v);
    JsonWriter& value(int v) { return value(int64_t(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& s);
    JsonWriter& value(const char* s) { return value(std::string(s)); }
    JsonWriter& value(const std::complex<double>& z);
    JsonWriter& null();

    const std::string& str() const { return out_; }

private:
    void sep();
    std::string out_;
    std::vector<bool> need_comma_;
};

std::string to_json(const Estimate& e);
std::string to_json(const Verdict& v);

void append_estimate(JsonWriter& w, const Estimate& e, bool with_note);
void append_verdict(JsonWriter& w, const Verdict& v);

// `shell,n,value` rows
std::string to_csv(const ShellProfile& p);

} // namespace gll::io
