// Exact rational arithmetic for stencil weights and literal folding.
//
// All operations check for int64 overflow and report it as a SemanticError,
// so fuzzed inputs with huge constants fail with a positioned message
// instead of wrapping silently.
#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "sodac/diagnostics.hpp"

namespace sodac {

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
    Rational(int64_t num, int64_t den) : num_(num), den_(den) { normalize(); }

    int64_t num() const { return num_; }
    int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational abs() const { return num_ < 0 ? Rational(checked_neg(num_), den_) : *this; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
                        checked_mul(a.den_, b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(checked_sub(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
                        checked_mul(a.den_, b.den_));
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw Error(ErrorCode::SemanticError, "division by zero constant");
        return Rational(checked_mul(a.num_, b.den_), checked_mul(a.den_, b.num_));
    }
    Rational operator-() const { return Rational(checked_neg(num_), den_); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }

private:
    static int64_t checked_add(int64_t a, int64_t b) {
        int64_t r;
        if (__builtin_add_overflow(a, b, &r)) throw overflow();
        return r;
    }
    static int64_t checked_sub(int64_t a, int64_t b) {
        int64_t r;
        if (__builtin_sub_overflow(a, b, &r)) throw overflow();
        return r;
    }
    static int64_t checked_mul(int64_t a, int64_t b) {
        int64_t r;
        if (__builtin_mul_overflow(a, b, &r)) throw overflow();
        return r;
    }
    static int64_t checked_neg(int64_t a) { return checked_sub(0, a); }
    static Error overflow() {
        return Error(ErrorCode::SemanticError, "constant arithmetic overflow");
    }

    void normalize() {
        if (den_ == 0) throw Error(ErrorCode::SemanticError, "division by zero constant");
        if (den_ < 0) {
            num_ = checked_neg(num_);
            den_ = checked_neg(den_);
        }
        uint64_t mag = num_ < 0 ? ~static_cast<uint64_t>(num_) + 1 : static_cast<uint64_t>(num_);
        uint64_t g = std::gcd(mag, static_cast<uint64_t>(den_));
        if (g > 1) {
            num_ /= static_cast<int64_t>(g);
            den_ /= static_cast<int64_t>(g);
        }
        if (num_ == 0) den_ = 1;
    }

    int64_t num_;
    int64_t den_;
};

}  // namespace sodac
