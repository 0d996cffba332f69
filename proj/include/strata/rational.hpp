#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace strata {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator. All probability arithmetic in this library runs on these;
/// doubles appear only at the reporting boundary (decimal_str / to_double).
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long long n) : v_(n) {}  // NOLINT: implicit on purpose, mirrors int literals
    Rational(const BigInt& n) : v_(n) {}

    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        // cpp_rational reduces but rejects negative denominators; normalize first.
        v_ = den < 0 ? boost::multiprecision::cpp_rational(-num, -den)
                     : boost::multiprecision::cpp_rational(num, den);
    }
    Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return denominator() == 1; }
    int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

    Rational abs() const {
        if (v_ >= 0) return *this;
        Rational r;
        r.v_ = -v_;
        return r;
    }

    double to_double() const { return v_.convert_to<double>(); }

    /// Canonical "num/den" rendering, e.g. "3/8", "0/1", "-1/2".
    std::string str() const {
        return numerator().str() + "/" + denominator().str();
    }

    /// 17-significant-digit decimal rendering of the double value.
    std::string decimal_str() const {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.17g", to_double());
        return buf;
    }

    /// Accepts "n/d", a plain integer, or a terminating decimal ("0.25").
    static Rational parse(std::string_view text);

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.v_ == 0) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { Rational r; r.v_ = -a.v_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

private:
    boost::multiprecision::cpp_rational v_;
};

inline Rational Rational::parse(std::string_view text) {
    auto fail = [&] {
        throw std::invalid_argument("Rational::parse: bad literal '" + std::string(text) + "'");
    };
    if (text.empty()) fail();

    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        const std::string num(text.substr(0, slash));
        const std::string den(text.substr(slash + 1));
        if (num.empty() || den.empty()) fail();
        try {
            return Rational(BigInt(num), BigInt(den));
        } catch (const std::runtime_error&) {
            fail();
        }
    }

    const auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        try {
            return Rational(BigInt(std::string(text)));
        } catch (const std::runtime_error&) {
            fail();
        }
    }

    // Terminating decimal: sign, integer part, fractional part.
    std::string_view body = text;
    bool negative = false;
    if (body.front() == '-' || body.front() == '+') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    const auto d = body.find('.');
    const std::string_view ipart = body.substr(0, d);
    const std::string_view fpart = body.substr(d + 1);
    if (ipart.empty() && fpart.empty()) fail();
    for (char c : ipart) if (c < '0' || c > '9') fail();
    for (char c : fpart) if (c < '0' || c > '9') fail();

    BigInt num = ipart.empty() ? BigInt(0) : BigInt(std::string(ipart));
    BigInt den = 1;
    for (char c : fpart) {
        num = num * 10 + (c - '0');
        den *= 10;
    }
    if (negative) num = -num;
    return Rational(num, den);
}

}  // namespace strata
