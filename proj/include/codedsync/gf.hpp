#pragma once

#include <cstdint>

#include "codedsync/errors.hpp"

namespace codedsync {

/// Deterministic Miller-Rabin primality test for 64-bit integers.
bool is_prime_u64(std::uint64_t n);

/// Arithmetic in a prime field F_q. Values are canonical representatives in
/// [0, q). The modulus must be prime and fit comfortably in a machine word
/// (q < 2^62) so that sums never overflow and products fit a widened
/// intermediate.
class Field {
public:
    explicit Field(std::uint64_t q);

    std::uint64_t order() const { return q_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        return a >= b ? a - b : a + q_ - b;
    }

    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        if (small_) return (a * b) % q_;
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % q_);
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    std::uint64_t inv(std::uint64_t a) const;

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;

    /// Map an arbitrary signed integer to its representative in [0, q).
    std::uint64_t reduce(std::int64_t v) const;

    bool operator==(const Field& other) const { return q_ == other.q_; }
    bool operator!=(const Field& other) const { return q_ != other.q_; }

private:
    std::uint64_t q_;
    bool small_;  // q < 2^32: plain 64-bit products cannot overflow
};

/// Validates primality and constructs the field.
Field make_field(std::uint64_t q);

/// A field value tagged with its field, for call sites where mixing fields is
/// a real hazard. Bulk coding paths use Field directly on raw words.
struct FieldElement {
    std::uint64_t value;
    Field field;

    FieldElement(std::uint64_t v, const Field& f) : value(v % f.order()), field(f) {}

    FieldElement operator+(const FieldElement& o) const {
        check(o);
        return {field.add(value, o.value), field};
    }
    FieldElement operator-(const FieldElement& o) const {
        check(o);
        return {field.sub(value, o.value), field};
    }
    FieldElement operator*(const FieldElement& o) const {
        check(o);
        return {field.mul(value, o.value), field};
    }
    FieldElement inv() const { return {field.inv(value), field}; }
    FieldElement pow(std::uint64_t e) const { return {field.pow(value, e), field}; }

    bool operator==(const FieldElement& o) const { return value == o.value && field == o.field; }

private:
    void check(const FieldElement& o) const {
        if (field != o.field) throw MixedFields("operands belong to different fields");
    }
};

}  // namespace codedsync
