#include "octaflow/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace octaflow {

namespace {

std::int64_t parse_int(const std::string& s, std::size_t begin, std::size_t end) {
    if (begin == end) throw InvalidParameterError("empty integer in rational literal");
    errno = 0;
    char* tail = nullptr;
    const std::string part = s.substr(begin, end - begin);
    long long v = std::strtoll(part.c_str(), &tail, 10);
    if (errno != 0 || tail == part.c_str() || *tail != '\0')
        throw InvalidParameterError("bad integer in rational literal: '" + part + "'");
    return v;
}

} // namespace

Rational Rational::parse(const std::string& raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    if (b == e) throw InvalidParameterError("empty rational literal");
    const std::string s = raw.substr(b, e - b);

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::int64_t n = parse_int(s, 0, slash);
        std::int64_t d = parse_int(s, slash + 1, s.size());
        if (d == 0) throw DegenerateInputError("rational with zero denominator");
        return Rational(n, d);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        // Decimal string, converted exactly: "-0.125" -> -125/1000 -> -1/8.
        bool neg = !s.empty() && s[0] == '-';
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        if (neg) digits.erase(0, 1);
        else if (!digits.empty() && digits[0] == '+') digits.erase(0, 1);
        std::size_t frac_len = s.size() - dot - 1;
        if (frac_len > 18) throw InvalidParameterError("decimal literal too long for exact conversion");
        std::int64_t num = digits.empty() ? 0 : parse_int(digits, 0, digits.size());
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        return Rational(neg ? -num : num, den);
    }
    return Rational(parse_int(s, 0, s.size()));
}

} // namespace octaflow
