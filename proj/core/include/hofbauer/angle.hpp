#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hofbauer {

/// An exact point of the circle R/Z, stored as a reduced fraction in [0, 1).
///
/// External rays are represented only through their angles; multiplication
/// by the degree never rounds.
class Angle {
public:
    Angle() : value_(0) {}
    Angle(long numerator, long denominator);
    explicit Angle(const mpq_class& value);

    /// Parses "p/q" (or a bare integer). The value is reduced mod 1.
    static Angle parse(std::string_view text);

    const mpq_class& value() const { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    double to_double() const { return value_.get_d(); }
    std::string to_string() const;

    /// d * a mod 1.
    Angle times(unsigned degree) const;

    /// a + offset mod 1; offset may be negative or exceed 1.
    Angle shifted(const mpq_class& offset) const;

    friend bool operator==(const Angle& a, const Angle& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Angle& a, const Angle& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    void normalize();
    mpq_class value_;
};

Angle times_d(const Angle& a, unsigned degree);

/// Reduces an arbitrary rational into [0, 1).
mpq_class frac(const mpq_class& x);

/// Forward orbit of a rational angle split into preperiod and period.
struct OrbitShape {
    std::size_t preperiod = 0;
    std::size_t period = 0;
};

/// Every rational angle is eventually periodic under multiplication by d.
OrbitShape orbit_shape(const Angle& a, unsigned degree);

/// Streaming orbit of an angle under multiplication by the degree.
///
/// Keeps the exact residue num/den in place (no reallocation per step) and
/// offers a double approximation of the current point. Used in the
/// per-sample hot loops where a fresh Angle per step would be wasteful.
class AngleCursor {
public:
    AngleCursor(const Angle& start, unsigned degree);

    void advance();
    std::size_t steps() const { return steps_; }

    double approx() const;
    Angle exact() const;

    /// Exact three-way comparison of the current point with a reference angle.
    int compare(const Angle& ref) const;

private:
    unsigned degree_;
    mpz_class num_;
    mpz_class den_;
    mutable mpz_class scratch_a_;
    mutable mpz_class scratch_b_;
    long den_bits_;
    std::size_t steps_ = 0;
};

} // namespace hofbauer
