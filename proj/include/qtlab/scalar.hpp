#ifndef QTLAB_SCALAR_HPP
#define QTLAB_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace qtlab {

// Exact arbitrary-precision scalars; no floating point anywhere.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// The field with two elements, used for small covers.
class GF2 {
public:
    GF2() : bit_(0) {}
    explicit GF2(int v) : bit_(v & 1) {}
    explicit GF2(const Int& v) : bit_(static_cast<int>(v % 2 != 0)) {}

    bool is_zero() const { return bit_ == 0; }
    int value() const { return bit_; }

    GF2 operator+(GF2 o) const { return GF2(bit_ ^ o.bit_); }
    GF2 operator-(GF2 o) const { return GF2(bit_ ^ o.bit_); }
    GF2 operator*(GF2 o) const { return GF2(bit_ & o.bit_); }
    GF2 operator/(GF2 o) const {
        if (o.bit_ == 0) throw std::domain_error("GF2: division by zero");
        return *this;
    }
    GF2 operator-() const { return *this; }
    GF2& operator+=(GF2 o) { bit_ ^= o.bit_; return *this; }
    GF2& operator-=(GF2 o) { bit_ ^= o.bit_; return *this; }
    GF2& operator*=(GF2 o) { bit_ &= o.bit_; return *this; }
    bool operator==(GF2 o) const { return bit_ == o.bit_; }
    bool operator!=(GF2 o) const { return bit_ != o.bit_; }

private:
    int bit_;
};

template <class F>
inline F scalar_from_int(const Int& v) { return F(v); }

template <>
inline Rat scalar_from_int<Rat>(const Int& v) { return Rat(v); }

template <class F>
inline bool scalar_is_zero(const F& v) { return v == F(0); }

template <>
inline bool scalar_is_zero<GF2>(const GF2& v) { return v.is_zero(); }

// Errors shared across modules.
struct InvariantViolation : std::logic_error {
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

struct InvalidDiagonal : std::runtime_error {
    explicit InvalidDiagonal(const std::string& what) : std::runtime_error(what) {}
};

struct NotNormalized : std::runtime_error {
    explicit NotNormalized(const std::string& what) : std::runtime_error(what) {}
};

struct NotUnipotent : std::runtime_error {
    explicit NotUnipotent(const std::string& what) : std::runtime_error(what) {}
};

struct PermutationSearchExceeded : std::runtime_error {
    explicit PermutationSearchExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qtlab

#endif
