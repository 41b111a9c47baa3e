#include "hofbauer/angle.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace hofbauer {

mpq_class frac(const mpq_class& x) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    mpq_class r = x - mpq_class(q);
    r.canonicalize();
    return r;
}

Angle::Angle(long numerator, long denominator) {
    if (denominator == 0) throw std::invalid_argument("angle with zero denominator");
    value_ = mpq_class(numerator, denominator);
    normalize();
}

Angle::Angle(const mpq_class& value) : value_(value) { normalize(); }

void Angle::normalize() {
    value_.canonicalize();
    if (value_ < 0 || value_ >= 1) value_ = frac(value_);
}

Angle Angle::parse(std::string_view text) {
    std::string s(text);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t start = s.find_first_not_of(" \t");
    if (start == std::string::npos) throw std::invalid_argument("empty angle literal");
    s = s.substr(start);
    const auto slash = s.find('/');
    mpq_class v;
    try {
        if (slash == std::string::npos) {
            v = mpq_class(mpz_class(s));
        } else {
            mpz_class p(s.substr(0, slash));
            mpz_class q(s.substr(slash + 1));
            if (q == 0) throw std::invalid_argument("angle with zero denominator: " + s);
            v = mpq_class(p, q);
        }
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed angle literal '" + s + "' (expected p/q)");
    }
    return Angle(v);
}

std::string Angle::to_string() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Angle Angle::times(unsigned degree) const {
    mpq_class v = value_ * degree;
    return Angle(v);
}

Angle Angle::shifted(const mpq_class& offset) const { return Angle(value_ + offset); }

Angle times_d(const Angle& a, unsigned degree) { return a.times(degree); }

OrbitShape orbit_shape(const Angle& a, unsigned degree) {
    std::map<Angle, std::size_t> seen;
    Angle x = a;
    for (std::size_t k = 0;; ++k) {
        auto [it, inserted] = seen.emplace(x, k);
        if (!inserted) return {it->second, k - it->second};
        x = x.times(degree);
    }
}

AngleCursor::AngleCursor(const Angle& start, unsigned degree)
    : degree_(degree), num_(start.numerator()), den_(start.denominator()) {
    den_bits_ = static_cast<long>(mpz_sizeinbase(den_.get_mpz_t(), 2));
}

void AngleCursor::advance() {
    mpz_mul_ui(num_.get_mpz_t(), num_.get_mpz_t(), degree_);
    while (mpz_cmp(num_.get_mpz_t(), den_.get_mpz_t()) >= 0)
        mpz_sub(num_.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
    ++steps_;
}

double AngleCursor::approx() const {
    if (den_bits_ < 1000) {
        return mpz_get_d(num_.get_mpz_t()) / mpz_get_d(den_.get_mpz_t());
    }
    long en = 0;
    long ed = 0;
    const double mn = mpz_get_d_2exp(&en, num_.get_mpz_t());
    const double md = mpz_get_d_2exp(&ed, den_.get_mpz_t());
    if (mn == 0.0) return 0.0;
    return std::ldexp(mn / md, static_cast<int>(en - ed));
}

Angle AngleCursor::exact() const { return Angle(mpq_class(num_, den_)); }

int AngleCursor::compare(const Angle& ref) const {
    // num/den vs p/q  <=>  num*q vs p*den
    auto* a = scratch_a_.get_mpz_t();
    auto* b = scratch_b_.get_mpz_t();
    mpz_mul(a, num_.get_mpz_t(), ref.value().get_den_mpz_t());
    mpz_mul(b, ref.value().get_num_mpz_t(), den_.get_mpz_t());
    const int c = mpz_cmp(a, b);
    return (c > 0) - (c < 0);
}

} // namespace hofbauer
