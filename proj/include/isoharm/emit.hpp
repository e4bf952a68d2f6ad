#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "isoharm/rational.hpp"
#include "isoharm/version.hpp"

namespace isoharm::emit {

// Ordered maps keep the emitted field order stable, which the byte-identical
// rerun guarantee depends on.
using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Rationals serialize as an exact numerator/denominator string next to a
/// float rendering, so consumers can pick precision or convenience.
inline Json rational(const Rat& q) {
    Json j;
    j["exact"] = to_string(q);
    j["value"] = to_double(q);
    return j;
}

inline Json header(const std::string& command) {
    Json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["command"] = command;
    return j;
}

/// stdout when path is empty, else the file (created or truncated).
inline void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!text.empty() && text.back() != '\n')
        out << '\n';
}

} // namespace isoharm::emit
