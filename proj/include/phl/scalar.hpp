#ifndef PHL_SCALAR_HPP
#define PHL_SCALAR_HPP

#include <concepts>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <Eigen/Core>

namespace phl {

/// Arbitrary-precision rational, always kept in lowest terms.
class Rational
{
public:
    Rational() = default;
    template <std::integral I>
    Rational(I n) : v_(static_cast<long>(n))
    {
    }
    Rational(long num, long den);
    explicit Rational(mpq_class v);

    const mpq_class& value() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    Rational inverse() const;
    std::string str() const;

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

private:
    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

/// Element of a prime field F_p. The modulus travels with the value; a
/// modulus of 0 marks an untyped integer literal (Eigen builds its zeros and
/// ones through Scalar(0) and Scalar(1)), which adopts the modulus of the
/// first typed operand it meets.
class Fp
{
public:
    Fp() = default;
    template <std::integral I>
    Fp(I n) : v_(static_cast<std::int64_t>(n))
    {
    }
    Fp(long long n, std::uint32_t p);

    std::uint32_t modulus() const { return p_; }
    bool typed() const { return p_ != 0; }
    /// Canonical residue in [0, p); requires a typed value.
    std::uint64_t residue() const;
    long long raw() const { return v_; }

    bool is_zero() const { return p_ ? v_ % p_ == 0 : v_ == 0; }
    Fp inverse() const;
    std::string str() const;

    Fp& operator+=(const Fp& o);
    Fp& operator-=(const Fp& o);
    Fp& operator*=(const Fp& o);
    Fp& operator/=(const Fp& o) { return *this *= o.inverse(); }

    friend Fp operator+(Fp a, const Fp& b) { return a += b; }
    friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
    friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
    friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
    friend Fp operator-(const Fp& a);

    friend bool operator==(const Fp& a, const Fp& b);
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

private:
    static std::uint32_t join(std::uint32_t a, std::uint32_t b);

    std::int64_t v_ = 0;
    std::uint32_t p_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Fp& x);

enum class FieldKind { rationals, prime };

/// Runtime description of the base field, before dispatch onto a scalar type.
struct FieldSpec
{
    FieldKind kind = FieldKind::rationals;
    std::uint32_t p = 0;

    std::string str() const;
    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

bool is_prime(std::uint64_t n);

template <class K>
class Field;

template <>
class Field<Rational>
{
public:
    using Scalar = Rational;

    Rational zero() const { return Rational(0); }
    Rational one() const { return Rational(1); }
    Rational from_int(long long n) const { return Rational(static_cast<long>(n)); }
    Rational normalize(const Rational& x) const { return x; }
    /// Accepts "a", "-a", "a/b".
    Rational parse(std::string_view text) const;
    /// Uniform integer in [-bound, bound].
    Rational random(std::mt19937_64& rng, int bound = 3) const;

    bool finite() const { return false; }
    std::uint64_t order() const { return 0; }
    std::uint64_t characteristic() const { return 0; }
    Rational element(std::uint64_t) const
    {
        throw std::logic_error("element enumeration over an infinite field");
    }
    FieldSpec spec() const { return {FieldKind::rationals, 0}; }
    std::string name() const { return "Q"; }

    friend bool operator==(const Field&, const Field&) { return true; }
};

template <>
class Field<Fp>
{
public:
    using Scalar = Fp;

    explicit Field(std::uint32_t p);

    Fp zero() const { return Fp(0, p_); }
    Fp one() const { return Fp(1, p_); }
    Fp from_int(long long n) const { return Fp(n, p_); }
    Fp normalize(const Fp& x) const { return Fp(x.raw(), p_); }
    Fp parse(std::string_view text) const;
    Fp random(std::mt19937_64& rng, int = 0) const;

    bool finite() const { return true; }
    std::uint64_t order() const { return p_; }
    std::uint64_t characteristic() const { return p_; }
    /// The i-th field element in the enumeration order 0, 1, ..., p-1.
    Fp element(std::uint64_t i) const { return Fp(static_cast<long long>(i), p_); }
    FieldSpec spec() const { return {FieldKind::prime, p_}; }
    std::string name() const { return "F" + std::to_string(p_); }
    std::uint32_t p() const { return p_; }

    friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_; }

private:
    std::uint32_t p_;
};

/// Hash of a canonical scalar (used for orbit bookkeeping).
std::size_t scalar_hash(const Rational& x);
std::size_t scalar_hash(const Fp& x);

} // namespace phl

namespace Eigen {

template <>
struct NumTraits<phl::Rational> : GenericNumTraits<phl::Rational>
{
    typedef phl::Rational Real;
    typedef phl::Rational NonInteger;
    typedef phl::Rational Nested;
    typedef phl::Rational Literal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 16,
        MulCost = 32
    };
    static Real epsilon() { return Real(0); }
    static Real dummy_precision() { return Real(0); }
    static int digits10() { return 0; }
};

template <>
struct NumTraits<phl::Fp> : GenericNumTraits<phl::Fp>
{
    typedef phl::Fp Real;
    typedef phl::Fp NonInteger;
    typedef phl::Fp Nested;
    typedef phl::Fp Literal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 3,
        MulCost = 4
    };
    static Real epsilon() { return Real(0); }
    static Real dummy_precision() { return Real(0); }
    static int digits10() { return 0; }
};

} // namespace Eigen

#endif // PHL_SCALAR_HPP
