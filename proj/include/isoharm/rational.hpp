#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace isoharm {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& q) {
    return q.template convert_to<double>();
}

inline int sign(const Rat& q) {
    return q.sign();
}

inline Int floor_int(const Rat& q) {
    Int n = boost::multiprecision::numerator(q);
    Int d = boost::multiprecision::denominator(q);
    Int t = n / d; // truncates toward zero
    if (n < 0 && t * d != n)
        --t;
    return t;
}

inline Rat abs_rat(const Rat& q) {
    return q < 0 ? Rat(-q) : q;
}

/// Parse "p/q", "p", or a plain decimal like "2.5" into an exact rational.
inline Rat parse_rational(const std::string& text) {
    if (text.empty())
        throw std::invalid_argument("empty rational literal");
    auto bad = [&] { throw std::invalid_argument("malformed rational literal: " + text); };
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string ns = text.substr(0, slash);
        std::string ds = text.substr(slash + 1);
        if (ns.empty() || ds.empty())
            bad();
        Int n(ns), d(ds);
        if (d == 0)
            throw std::invalid_argument("zero denominator: " + text);
        return Rat(n, d);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string ip = text.substr(0, dot);
        std::string fp = text.substr(dot + 1);
        if (fp.empty())
            bad();
        bool neg = !ip.empty() && ip[0] == '-';
        if (ip.empty() || ip == "-" || ip == "+")
            ip += "0";
        Int scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i)
            scale *= 10;
        Int whole(ip), frac(fp);
        Int n = whole * scale + (neg ? -frac : frac);
        return Rat(n, scale);
    }
    return Rat(Int(text));
}

inline std::string to_string(const Rat& q) {
    Int n = boost::multiprecision::numerator(q);
    Int d = boost::multiprecision::denominator(q);
    if (d == 1)
        return n.str();
    return n.str() + "/" + d.str();
}

} // namespace isoharm
