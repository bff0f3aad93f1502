#include "drr/rational.hpp"

#include <cctype>
#include <ostream>

namespace drr {

Rat Rat::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto valid_int = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!valid_int(text)) throw std::invalid_argument("malformed rational '" + text + "'");
        return Rat(mpz_class(text), mpz_class(1));
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den))
        throw std::invalid_argument("malformed rational '" + text + "'");
    mpz_class d(den);
    if (d == 0) throw std::domain_error("zero denominator in '" + text + "'");
    return Rat(mpz_class(num), d);
}

std::string Rat::str() const {
    if (is_integer()) return num().get_str();
    return num().get_str() + "/" + den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

Rat pow2(long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
    return e >= 0 ? Rat(p) : Rat(mpz_class(1), p);
}

Rat sqrt_lower(const Rat& q, unsigned prec_bits) {
    if (q.sign() < 0) throw std::domain_error("sqrt of negative rational");
    // sqrt(a/b) = sqrt(a*b)/b; scale by 4^prec and take the integer floor sqrt.
    mpz_class scaled = q.num() * q.den();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * prec_bits);
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    mpz_class denom = q.den();
    mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), prec_bits);
    return Rat(root, denom);
}

Rat log2_lower(const mpz_class& n, unsigned prec_bits) {
    if (n < 1) throw std::domain_error("log2 of non-positive integer");
    long ipart = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - 1;
    Rat result{mpz_class(ipart)};
    // r = n / 2^ipart in [1, 2); square-and-compare for the fractional bits,
    // truncating r to guard precision each step so sizes stay bounded.
    const unsigned guard = prec_bits + 16;
    Rat r = Rat(n) / pow2(ipart);
    const Rat two(2);
    for (unsigned bit = 1; bit <= prec_bits; ++bit) {
        r *= r;
        if (r >= two) {
            result += pow2(-static_cast<long>(bit));
            r /= two;
        }
        mpz_class t = (r * pow2(guard)).floor();
        r = Rat(t) / pow2(guard);
    }
    return result;
}

}  // namespace drr
