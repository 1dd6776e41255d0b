#include "shelby/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace shelby {

Rational parse_decimal(const std::string& text) {
    std::size_t pos = 0;
    auto fail = [&]() -> Rational {
        throw std::invalid_argument("not a decimal number: '" + text + "'");
    };

    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }

    BigInt mantissa = 0;
    std::size_t digits = 0, frac_digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        mantissa = mantissa * 10 + (text[pos] - '0');
        ++digits;
        ++pos;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            mantissa = mantissa * 10 + (text[pos] - '0');
            ++digits;
            ++frac_digits;
            ++pos;
        }
    }
    if (digits == 0) return fail();

    long long exponent = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool exp_neg = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_neg = text[pos] == '-';
            ++pos;
        }
        std::size_t exp_digits = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            exponent = exponent * 10 + (text[pos] - '0');
            ++exp_digits;
            ++pos;
        }
        if (exp_digits == 0) return fail();
        if (exp_neg) exponent = -exponent;
    }
    if (pos != text.size()) return fail();

    exponent -= static_cast<long long>(frac_digits);
    Rational value(mantissa);
    BigInt scale = 1;
    for (long long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) scale *= 10;
    if (exponent >= 0)
        value *= scale;
    else
        value /= scale;
    return negative ? -value : value;
}

std::string format_exact(const Rational& value) {
    BigInt num = boost::multiprecision::numerator(value);
    BigInt den = boost::multiprecision::denominator(value);

    // Strip factors of 2 and 5; whatever remains decides decimal viability.
    BigInt rest = den;
    int twos = 0, fives = 0;
    while (rest % 2 == 0) {
        rest /= 2;
        ++twos;
    }
    while (rest % 5 == 0) {
        rest /= 5;
        ++fives;
    }
    if (rest != 1) return num.str() + "/" + den.str();

    int shift = twos > fives ? twos : fives;
    BigInt scaled = num;
    for (int i = 0; i < shift - twos; ++i) scaled *= 2;
    for (int i = 0; i < shift - fives; ++i) scaled *= 5;

    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string body = scaled.str();
    if (shift == 0) return (negative ? "-" : "") + body;
    if (body.size() <= static_cast<std::size_t>(shift))
        body.insert(0, static_cast<std::size_t>(shift) + 1 - body.size(), '0');
    body.insert(body.size() - static_cast<std::size_t>(shift), ".");
    return (negative ? "-" : "") + body;
}

double to_double(const Rational& value) {
    return value.convert_to<double>();
}

BigInt round_half_up(const Rational& value) {
    Rational shifted = value + Rational(1, 2);
    BigInt num = boost::multiprecision::numerator(shifted);
    BigInt den = boost::multiprecision::denominator(shifted);
    BigInt q = num / den;
    if (num < 0 && q * den != num) --q;  // floor for negatives
    return q;
}

}  // namespace shelby
