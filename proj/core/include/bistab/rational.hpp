#pragma once

#include <cctype>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace bistab {

// Exact rational on 64-bit integers. Rate constants like 16/3 and the balance
// sums built from them stay tiny, so int64 with overflow checks is enough;
// anything that does not fit is handled by the caller in double precision.
class Rat64 {
public:
    Rat64() = default;
    Rat64(std::int64_t n) : num_(n), den_(1) {}
    Rat64(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (den_ == 0) throw std::invalid_argument("Rat64: zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    Rat64 operator-() const { return Rat64(-num_, den_); }

    Rat64 operator+(const Rat64& o) const {
        __int128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
        __int128 d = i128(den_) * o.den_;
        return make(n, d);
    }
    Rat64 operator-(const Rat64& o) const { return *this + (-o); }

    Rat64 operator*(const Rat64& o) const {
        __int128 n = i128(num_) * o.num_;
        __int128 d = i128(den_) * o.den_;
        return make(n, d);
    }

    Rat64 operator/(const Rat64& o) const {
        if (o.num_ == 0) throw std::domain_error("Rat64: division by zero");
        __int128 n = i128(num_) * o.den_;
        __int128 d = i128(den_) * o.num_;
        return make(n, d);
    }

    bool operator==(const Rat64& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rat64& o) const { return !(*this == o); }

    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }

    // Accepts "p", "p/q", decimals ("0.25") and scientific notation ("2e-4").
    // Returns nullopt when the value does not fit in int64 rationals.
    static std::optional<Rat64> parse(const std::string& text) {
        std::size_t pos = 0;
        auto skip_ws = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
        skip_ws();
        std::size_t end = text.size();
        while (end > pos && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
        if (pos >= end) return std::nullopt;

        std::size_t slash = text.find('/', pos);
        if (slash != std::string::npos && slash < end) {
            auto n = parse_int(text.substr(pos, slash - pos));
            auto d = parse_int(text.substr(slash + 1, end - slash - 1));
            if (!n || !d || *d == 0) return std::nullopt;
            return make_opt(i128(*n), i128(*d));
        }

        bool neg = false;
        if (text[pos] == '+' || text[pos] == '-') neg = text[pos++] == '-';
        __int128 mant = 0;
        int frac_digits = 0;
        bool any = false, in_frac = false;
        for (; pos < end; ++pos) {
            char c = text[pos];
            if (c == '.') {
                if (in_frac) return std::nullopt;
                in_frac = true;
            } else if (c == 'e' || c == 'E') {
                break;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                any = true;
                mant = mant * 10 + (c - '0');
                if (mant > max128()) return std::nullopt;
                if (in_frac) ++frac_digits;
            } else {
                return std::nullopt;
            }
        }
        if (!any) return std::nullopt;
        int exp10 = 0;
        if (pos < end && (text[pos] == 'e' || text[pos] == 'E')) {
            auto e = parse_int(text.substr(pos + 1, end - pos - 1));
            if (!e || *e > 40 || *e < -40) return std::nullopt;
            exp10 = static_cast<int>(*e);
        }
        __int128 num = neg ? -mant : mant;
        __int128 den = 1;
        int net = exp10 - frac_digits;
        for (int k = 0; k < net; ++k) {
            num *= 10;
            if (num > max128() || num < -max128()) return std::nullopt;
        }
        for (int k = 0; k < -net; ++k) {
            den *= 10;
            if (den > max128()) return std::nullopt;
        }
        return make_opt(num, den);
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

    static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }
    static __int128 max128() { return static_cast<__int128>(INT64_MAX); }

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static Rat64 make(__int128 n, __int128 d) {
        auto r = make_opt(n, d);
        if (!r) throw std::overflow_error("Rat64: arithmetic overflow");
        return *r;
    }

    static std::optional<Rat64> make_opt(__int128 n, __int128 d) {
        if (d == 0) return std::nullopt;
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n > max128() || n < -max128() || d > max128()) return std::nullopt;
        Rat64 r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static std::optional<std::int64_t> parse_int(const std::string& s) {
        std::size_t i = 0;
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t e = s.size();
        while (e > i && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        if (i >= e) return std::nullopt;
        bool neg = false;
        if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
        if (i >= e) return std::nullopt;
        __int128 v = 0;
        for (; i < e; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
            v = v * 10 + (s[i] - '0');
            if (v > max128()) return std::nullopt;
        }
        return static_cast<std::int64_t>(neg ? -v : v);
    }

    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }
};

}  // namespace bistab
