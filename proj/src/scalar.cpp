#include "phl/scalar.hpp"

#include <charconv>
#include <ostream>

namespace phl {

Rational::Rational(long num, long den) : v_(num, den)
{
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    v_.canonicalize();
}

Rational::Rational(mpq_class v) : v_(std::move(v))
{
    v_.canonicalize();
}

Rational Rational::inverse() const
{
    if (is_zero())
        throw std::domain_error("inverse of zero");
    return Rational(mpq_class(1 / v_));
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero())
        throw std::domain_error("division by zero");
    v_ /= o.v_;
    return *this;
}

std::string Rational::str() const
{
    return v_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& q)
{
    return os << q.str();
}

namespace {

std::uint64_t reduce(std::int64_t v, std::uint32_t p)
{
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0)
        r += p;
    return static_cast<std::uint64_t>(r);
}

} // namespace

Fp::Fp(long long n, std::uint32_t p) : v_(0), p_(p)
{
    if (p == 0)
        v_ = n;
    else
        v_ = static_cast<std::int64_t>(reduce(n, p));
}

std::uint64_t Fp::residue() const
{
    if (!p_) {
        if (v_ < 0)
            throw std::logic_error("residue of a negative untyped literal");
        return static_cast<std::uint64_t>(v_);
    }
    return static_cast<std::uint64_t>(v_);
}

std::uint32_t Fp::join(std::uint32_t a, std::uint32_t b)
{
    if (a == 0)
        return b;
    if (b == 0 || a == b)
        return a;
    throw std::logic_error("arithmetic across different prime fields");
}

Fp& Fp::operator+=(const Fp& o)
{
    std::uint32_t p = join(p_, o.p_);
    if (!p) {
        v_ += o.v_;
    } else {
        v_ = static_cast<std::int64_t>((reduce(v_, p) + reduce(o.v_, p)) % p);
    }
    p_ = p;
    return *this;
}

Fp& Fp::operator-=(const Fp& o)
{
    std::uint32_t p = join(p_, o.p_);
    if (!p) {
        v_ -= o.v_;
    } else {
        v_ = static_cast<std::int64_t>((reduce(v_, p) + p - reduce(o.v_, p)) % p);
    }
    p_ = p;
    return *this;
}

Fp& Fp::operator*=(const Fp& o)
{
    std::uint32_t p = join(p_, o.p_);
    if (!p) {
        v_ *= o.v_;
    } else {
        v_ = static_cast<std::int64_t>((reduce(v_, p) * reduce(o.v_, p)) % p);
    }
    p_ = p;
    return *this;
}

Fp operator-(const Fp& a)
{
    if (!a.p_)
        return Fp(-a.v_);
    return Fp(-a.v_, a.p_);
}

Fp Fp::inverse() const
{
    if (!p_) {
        if (v_ == 1 || v_ == -1)
            return *this;
        throw std::domain_error("inverse of an untyped literal");
    }
    std::int64_t a = static_cast<std::int64_t>(reduce(v_, p_));
    if (a == 0)
        throw std::domain_error("inverse of zero");
    std::int64_t m = p_, x0 = 1, x1 = 0;
    while (m != 0) {
        std::int64_t q = a / m;
        std::int64_t t = a - q * m;
        a = m;
        m = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
    }
    return Fp(x0, p_);
}

bool operator==(const Fp& a, const Fp& b)
{
    std::uint32_t p = Fp::join(a.p_, b.p_);
    if (!p)
        return a.v_ == b.v_;
    return reduce(a.v_, p) == reduce(b.v_, p);
}

std::string Fp::str() const
{
    return std::to_string(p_ ? reduce(v_, p_) : v_);
}

std::ostream& operator<<(std::ostream& os, const Fp& x)
{
    return os << x.str();
}

std::string FieldSpec::str() const
{
    return kind == FieldKind::rationals ? "Q" : "F" + std::to_string(p);
}

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Rational Field<Rational>::parse(std::string_view text) const
{
    std::string s(text);
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0)
        throw std::invalid_argument("not a rational literal: '" + s + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(q);
}

Rational Field<Rational>::random(std::mt19937_64& rng, int bound) const
{
    std::uniform_int_distribution<long> dist(-bound, bound);
    return Rational(dist(rng));
}

Field<Fp>::Field(std::uint32_t p) : p_(p)
{
    if (!is_prime(p))
        throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
}

Fp Field<Fp>::parse(std::string_view text) const
{
    long long v = 0;
    auto first = text.data();
    auto last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw std::invalid_argument("not an integer literal: '" + std::string(text) + "'");
    return Fp(v, p_);
}

Fp Field<Fp>::random(std::mt19937_64& rng, int) const
{
    std::uniform_int_distribution<std::uint32_t> dist(0, p_ - 1);
    return Fp(dist(rng), p_);
}

std::size_t scalar_hash(const Rational& x)
{
    return std::hash<std::string>{}(x.str());
}

std::size_t scalar_hash(const Fp& x)
{
    return std::hash<long long>{}(x.typed() ? static_cast<long long>(x.residue()) : x.raw());
}

} // namespace phl
