#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace drr {

// Exact rational number, always kept in canonical reduced form with a
// positive denominator. Equality is structural; all arithmetic is exact.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(int n) : v_(n) {}
    Rat(long n) : v_(static_cast<signed long>(n)) {}
    Rat(long long n) { v_ = make_mpz(n); }
    explicit Rat(const mpz_class& n) : v_(n) {}
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    Rat(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    Rat(long long num, long long den) : Rat(make_mpz(num), make_mpz(den)) {}

    // Accepts "p/q", "p", optional leading '-'. Rejects zero denominators
    // and anything with stray characters.
    static Rat parse(const std::string& text);

    // "p/q" for non-integers, plain "p" otherwise.
    std::string str() const;

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    bool is_integer() const { return v_.get_den() == 1; }
    bool is_zero() const { return v_ == 0; }
    int sign() const { return sgn(v_); }

    mpz_class floor() const {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), num().get_mpz_t(), den().get_mpz_t());
        return r;
    }
    mpz_class ceil() const {
        mpz_class r;
        mpz_cdiv_q(r.get_mpz_t(), num().get_mpz_t(), den().get_mpz_t());
        return r;
    }

    double to_double() const { return v_.get_d(); }

    Rat operator-() const { return Rat(mpq_class(-v_), already_canonical{}); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.v_ == 0) throw std::domain_error("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r);

private:
    struct already_canonical {};
    Rat(mpq_class q, already_canonical) : v_(std::move(q)) {}

    static mpz_class make_mpz(long long n) {
        static_assert(sizeof(long) == sizeof(long long), "64-bit long expected");
        return mpz_class(static_cast<long>(n));
    }

    mpq_class v_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }
inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? a : b; }

// 2^e as a rational (e may be negative).
Rat pow2(long e);

// Deterministic dyadic lower bound on sqrt(q), q >= 0:
// floor(sqrt(q * 4^prec_bits)) / 2^prec_bits.
Rat sqrt_lower(const Rat& q, unsigned prec_bits = 32);

// Deterministic dyadic lower bound on log2(n) for an integer n >= 1,
// monotone in n. Digit-by-digit with truncation; prec_bits fractional bits.
Rat log2_lower(const mpz_class& n, unsigned prec_bits = 16);

}  // namespace drr
