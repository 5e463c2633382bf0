#include "colmkt/rational.hpp"

#include <cctype>
#include <sstream>

namespace colmkt
{

namespace
{

bool is_integer_token(const std::string& s)
{
    if (s.empty())
        return false;
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size())
        return false;
    for (std::size_t i = start; i < s.size(); ++i)
    {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    }
    return true;
}

// GMP rejects an explicit '+' sign that is fine by is_integer_token.
std::string strip_plus(const std::string& s)
{
    return (!s.empty() && s[0] == '+') ? s.substr(1) : s;
}

}   // namespace

Rational parse_rational(const std::string& text)
{
    const std::size_t slash = text.find('/');
    if (slash == std::string::npos)
    {
        if (!is_integer_token(text))
            throw ParseError("malformed rational: \"" + text + "\"");
        return Rational(Integer(strip_plus(text)));
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
        throw ParseError("malformed rational: \"" + text + "\"");
    const Integer d(strip_plus(den));
    if (d == 0)
        throw ParseError("zero denominator in rational: \"" + text + "\"");
    return Rational(Integer(strip_plus(num)), d);
}

std::string to_string(const Rational& value)
{
    std::ostringstream out;
    out << value;   // GMP streams the canonical "p/q" / "p" form
    return out.str();
}

Rational vec_sum(const RatVec& v)
{
    Rational s = 0;
    for (const Rational& x : v)
        s += x;
    return s;
}

Rational dot(const RatVec& a, const RatVec& b)
{
    if (a.size() != b.size())
        throw DimensionMismatch("dot: vectors of length " + std::to_string(a.size()) +
                                " and " + std::to_string(b.size()));
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

}   // namespace colmkt
