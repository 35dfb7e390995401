#pragma once

// Exact arithmetic in prime fields GF(p). The modulus is a runtime value so
// that one binary can work with modules over different primes; products are
// accumulated in 64 bits, which is safe because p < 2^31.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pmod {

// Raised when an operation is called with arguments that violate its
// contract (mismatched fields, shape mismatches, bad picks, ...).
struct usage_error : std::invalid_argument {
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when an internal invariant that the algorithms guarantee fails to
// hold; seeing one of these is a bug, not a user error.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

inline bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

class fp_field {
public:
    explicit fp_field(uint32_t modulus) : p_(modulus) {
        if (modulus >= (1u << 31))
            throw usage_error("field modulus must be < 2^31, got " + std::to_string(modulus));
        if (!is_prime_u32(modulus))
            throw usage_error("field modulus must be prime, got " + std::to_string(modulus));
    }

    uint32_t modulus() const { return p_; }

    uint32_t add(uint32_t a, uint32_t b) const {
        uint32_t s = a + b;  // a, b < 2^31, no overflow
        return s >= p_ ? s - p_ : s;
    }
    uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
    uint32_t neg(uint32_t a) const { return a ? p_ - a : 0; }
    uint32_t mul(uint32_t a, uint32_t b) const { return uint32_t((uint64_t(a) * b) % p_); }

    // Multiplicative inverse by extended Euclid.
    uint32_t inv(uint32_t a) const {
        if (a == 0) throw usage_error("division by zero in GF(" + std::to_string(p_) + ")");
        int64_t t = 0, new_t = 1;
        int64_t r = p_, new_r = a;
        while (new_r != 0) {
            int64_t q = r / new_r;
            int64_t tmp = t - q * new_t;
            t = new_t; new_t = tmp;
            tmp = r - q * new_r;
            r = new_r; new_r = tmp;
        }
        return uint32_t(t < 0 ? t + p_ : t);
    }
    uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }

    // Normalizes an arbitrary signed value into [0, p).
    uint32_t reduce(int64_t x) const {
        int64_t r = x % int64_t(p_);
        return uint32_t(r < 0 ? r + p_ : r);
    }

    bool operator==(const fp_field& o) const { return p_ == o.p_; }
    bool operator!=(const fp_field& o) const { return p_ != o.p_; }

private:
    uint32_t p_;
};

// A single field element carrying its field, for use at API boundaries where
// mixing scalars from different fields must be caught. The linear algebra
// layer works on raw residues through fp_field instead.
class scalar {
public:
    scalar(uint32_t value, fp_field field) : v_(value % field.modulus()), f_(field) {}

    uint32_t value() const { return v_; }
    fp_field field() const { return f_; }

    scalar operator+(const scalar& o) const { return {same(o).add(v_, o.v_), f_}; }
    scalar operator-(const scalar& o) const { return {same(o).sub(v_, o.v_), f_}; }
    scalar operator*(const scalar& o) const { return {same(o).mul(v_, o.v_), f_}; }
    scalar operator/(const scalar& o) const { return {same(o).div(v_, o.v_), f_}; }
    scalar operator-() const { return {f_.neg(v_), f_}; }
    scalar inverse() const { return {f_.inv(v_), f_}; }

    bool operator==(const scalar& o) const { return v_ == o.v_ && f_ == o.f_; }
    bool operator!=(const scalar& o) const { return !(*this == o); }

private:
    const fp_field& same(const scalar& o) const {
        if (f_ != o.f_)
            throw usage_error("scalars from different fields: GF(" + std::to_string(f_.modulus()) +
                              ") vs GF(" + std::to_string(o.f_.modulus()) + ")");
        return f_;
    }
    uint32_t v_;
    fp_field f_;
};

}  // namespace pmod
