#pragma once

// Arbitrary-precision integers and rationals. Everything downstream assumes
// exact arithmetic; there is no floating point anywhere in the library.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdr {

class BigInt {
public:
    BigInt() = default;
    BigInt(long long v) {
        if (v < 0) { sign_ = -1; v = -v; }
        else if (v > 0) { sign_ = 1; }
        unsigned long long u = static_cast<unsigned long long>(v);
        while (u) { mag_.push_back(static_cast<uint32_t>(u & 0xffffffffu)); u >>= 32; }
    }
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}

    static BigInt from_string(const std::string& s) {
        BigInt r;
        size_t i = 0;
        int sg = 1;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) { if (s[i] == '-') sg = -1; ++i; }
        if (i == s.size()) throw std::invalid_argument("BigInt: empty numeral");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
            r = r.mul_small(10);
            r = r.add_small(static_cast<uint32_t>(s[i] - '0'));
        }
        if (!r.mag_.empty()) r.sign_ = sg;
        return r;
    }

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }

    bool operator==(const BigInt& o) const { return sign_ == o.sign_ && mag_ == o.mag_; }
    bool operator!=(const BigInt& o) const { return !(*this == o); }
    bool operator<(const BigInt& o) const {
        if (sign_ != o.sign_) return sign_ < o.sign_;
        int c = cmp_mag(mag_, o.mag_);
        return sign_ >= 0 ? c < 0 : c > 0;
    }

    BigInt operator-() const { BigInt r = *this; r.sign_ = -r.sign_; return r; }

    BigInt operator+(const BigInt& o) const {
        if (sign_ == 0) return o;
        if (o.sign_ == 0) return *this;
        BigInt r;
        if (sign_ == o.sign_) { r.mag_ = add_mag(mag_, o.mag_); r.sign_ = sign_; return r; }
        int c = cmp_mag(mag_, o.mag_);
        if (c == 0) return BigInt();
        if (c > 0) { r.mag_ = sub_mag(mag_, o.mag_); r.sign_ = sign_; }
        else { r.mag_ = sub_mag(o.mag_, mag_); r.sign_ = o.sign_; }
        return r;
    }
    BigInt operator-(const BigInt& o) const { return *this + (-o); }

    BigInt operator*(const BigInt& o) const {
        if (sign_ == 0 || o.sign_ == 0) return BigInt();
        BigInt r;
        r.mag_.assign(mag_.size() + o.mag_.size(), 0);
        for (size_t i = 0; i < mag_.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < o.mag_.size(); ++j) {
                uint64_t cur = static_cast<uint64_t>(mag_[i]) * o.mag_[j] + r.mag_[i + j] + carry;
                r.mag_[i + j] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
            }
            size_t k = i + o.mag_.size();
            while (carry) {
                uint64_t cur = r.mag_[k] + carry;
                r.mag_[k] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        r.sign_ = sign_ * o.sign_;
        return r;
    }

    // Truncated division with remainder, |r| < |o|, sign(r) = sign(*this).
    void divrem(const BigInt& o, BigInt& q, BigInt& r) const {
        if (o.sign_ == 0) throw std::domain_error("BigInt: division by zero");
        int c = cmp_mag(mag_, o.mag_);
        if (c < 0) { q = BigInt(); r = *this; return; }
        q.mag_.assign(mag_.size(), 0);
        BigInt rem;
        for (size_t bit = mag_.size() * 32; bit-- > 0;) {
            rem.shift_left_one();
            if (mag_[bit / 32] >> (bit % 32) & 1u) rem.set_low_bit();
            if (cmp_mag(rem.mag_, o.mag_) >= 0) {
                rem.mag_ = sub_mag(rem.mag_, o.mag_);
                q.mag_[bit / 32] |= (1u << (bit % 32));
            }
        }
        q.trim(); rem.trim();
        q.sign_ = q.mag_.empty() ? 0 : sign_ * o.sign_;
        rem.sign_ = rem.mag_.empty() ? 0 : sign_;
        r = rem;
    }

    BigInt operator/(const BigInt& o) const { BigInt q, r; divrem(o, q, r); return q; }
    BigInt operator%(const BigInt& o) const { BigInt q, r; divrem(o, q, r); return r; }

    BigInt abs() const { BigInt r = *this; if (r.sign_ < 0) r.sign_ = 1; return r; }

    // binary gcd: shifts and subtractions only
    static BigInt gcd(BigInt a, BigInt b) {
        a = a.abs(); b = b.abs();
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        size_t za = a.trailing_zero_bits(), zb = b.trailing_zero_bits();
        size_t shift = std::min(za, zb);
        a.shr(za);
        for (;;) {
            b.shr(b.trailing_zero_bits());
            if (cmp_mag(a.mag_, b.mag_) > 0) std::swap(a.mag_, b.mag_);
            b.mag_ = sub_mag(b.mag_, a.mag_);
            if (b.mag_.empty()) break;
        }
        a.shl(shift);
        return a;
    }

    static BigInt lcm(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt();
        return (a / gcd(a, b) * b).abs();
    }

    size_t trailing_zero_bits() const {
        for (size_t i = 0; i < mag_.size(); ++i)
            if (mag_[i]) {
                size_t b = 0;
                uint32_t v = mag_[i];
                while (!(v & 1u)) { v >>= 1; ++b; }
                return i * 32 + b;
            }
        return 0;
    }
    void shr(size_t bits) {
        if (mag_.empty() || bits == 0) return;
        size_t limbs = bits / 32, rem = bits % 32;
        if (limbs >= mag_.size()) { mag_.clear(); sign_ = 0; return; }
        mag_.erase(mag_.begin(), mag_.begin() + limbs);
        if (rem) {
            for (size_t i = 0; i < mag_.size(); ++i) {
                mag_[i] >>= rem;
                if (i + 1 < mag_.size()) mag_[i] |= mag_[i + 1] << (32 - rem);
            }
        }
        trim();
    }
    void shl(size_t bits) {
        if (mag_.empty() || bits == 0) return;
        size_t limbs = bits / 32, rem = bits % 32;
        if (rem) {
            uint32_t carry = 0;
            for (size_t i = 0; i < mag_.size(); ++i) {
                uint32_t nc = mag_[i] >> (32 - rem);
                mag_[i] = (mag_[i] << rem) | carry;
                carry = nc;
            }
            if (carry) mag_.push_back(carry);
        }
        mag_.insert(mag_.begin(), limbs, 0u);
    }

    std::string to_string() const {
        if (sign_ == 0) return "0";
        std::string digits;
        BigInt t = abs();
        BigInt ten(10);
        while (!t.is_zero()) {
            BigInt q, r;
            t.divrem(ten, q, r);
            digits.push_back(static_cast<char>('0' + (r.mag_.empty() ? 0 : r.mag_[0])));
            t = q;
        }
        if (sign_ < 0) digits.push_back('-');
        return std::string(digits.rbegin(), digits.rend());
    }

    long long to_long() const {
        long long v = 0;
        for (size_t i = mag_.size(); i-- > 0;) {
            if (v > (1ll << 31)) throw std::overflow_error("BigInt: to_long overflow");
            v = (v << 32) | mag_[i];
        }
        return sign_ < 0 ? -v : v;
    }

private:
    int sign_ = 0;                 // -1, 0, 1
    std::vector<uint32_t> mag_;    // little-endian limbs, no leading zeros

    void trim() { while (!mag_.empty() && mag_.back() == 0) mag_.pop_back(); if (mag_.empty()) sign_ = 0; }
    void shift_left_one() {
        uint32_t carry = 0;
        for (auto& limb : mag_) {
            uint32_t nc = limb >> 31;
            limb = (limb << 1) | carry;
            carry = nc;
        }
        if (carry) mag_.push_back(carry);
    }
    void set_low_bit() { if (mag_.empty()) mag_.push_back(0); mag_[0] |= 1u; }

    BigInt mul_small(uint32_t x) const {
        BigInt r;
        uint64_t carry = 0;
        for (uint32_t limb : mag_) {
            uint64_t cur = static_cast<uint64_t>(limb) * x + carry;
            r.mag_.push_back(static_cast<uint32_t>(cur));
            carry = cur >> 32;
        }
        if (carry) r.mag_.push_back(static_cast<uint32_t>(carry));
        r.trim();
        r.sign_ = r.mag_.empty() ? 0 : (sign_ == 0 ? 1 : sign_);
        return r;
    }
    BigInt add_small(uint32_t x) const {
        BigInt r = *this;
        if (r.sign_ < 0) throw std::logic_error("add_small on negative");
        uint64_t carry = x;
        for (size_t i = 0; i < r.mag_.size() && carry; ++i) {
            uint64_t cur = r.mag_[i] + carry;
            r.mag_[i] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) r.mag_.push_back(static_cast<uint32_t>(carry));
        if (!r.mag_.empty()) r.sign_ = 1;
        return r;
    }

    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r;
        uint64_t carry = 0;
        for (size_t i = 0; i < std::max(a.size(), b.size()) || carry; ++i) {
            uint64_t cur = carry;
            if (i < a.size()) cur += a[i];
            if (i < b.size()) cur += b[i];
            r.push_back(static_cast<uint32_t>(cur));
            carry = cur >> 32;
        }
        return r;
    }
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r = a;
        int64_t borrow = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            int64_t cur = static_cast<int64_t>(r[i]) - borrow - (i < b.size() ? b[i] : 0);
            if (cur < 0) { cur += (1ll << 32); borrow = 1; } else borrow = 0;
            r[i] = static_cast<uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }
};

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(int n) : num_(n), den_(1) {}
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    static Rational from_string(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(BigInt::from_string(s));
        return Rational(BigInt::from_string(s.substr(0, slash)), BigInt::from_string(s.substr(slash + 1)));
    }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == BigInt(1) && den_ == BigInt(1); }
    int sign() const { return num_.sign(); }
    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    Rational operator-() const { Rational r = *this; r.num_ = -r.num_; return r; }
    Rational operator+(const Rational& o) const { return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
    Rational operator-(const Rational& o) const { return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
    Rational operator*(const Rational& o) const { return Rational(num_ * o.num_, den_ * o.den_); }
    Rational operator/(const Rational& o) const {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(num_ * o.den_, den_ * o.num_);
    }
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return (num_ * o.den_) < (o.num_ * den_); }

    Rational inv() const {
        if (is_zero()) throw std::domain_error("Rational: inverse of zero");
        return Rational(den_, num_);
    }

    std::string to_string() const {
        if (den_ == BigInt(1)) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    BigInt num_, den_;   // den_ > 0, gcd(num_, den_) = 1

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        if (den_.sign() < 0) { num_ = -num_; den_ = -den_; }
        if (num_.is_zero()) { den_ = BigInt(1); return; }
        BigInt g = BigInt::gcd(num_, den_);
        if (g != BigInt(1)) { num_ = num_ / g; den_ = den_ / g; }
    }
};

} // namespace kdr
