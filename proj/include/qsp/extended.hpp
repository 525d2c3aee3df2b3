#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "qsp/rational.hpp"

namespace qsp {

/// A value of T or the distinct marker "infinite" (greater than every T).
template <class T>
class Extended {
 public:
  Extended(T value) : value_(std::move(value)) {}  // NOLINT: implicit by intent
  static Extended infinite() { return Extended(); }

  bool is_finite() const { return value_.has_value(); }
  bool is_infinite() const { return !value_.has_value(); }
  const T& value() const {
    if (!value_) throw std::logic_error("value() on an infinite quantity");
    return *value_;
  }

  friend bool operator==(const Extended& a, const Extended& b) { return a.value_ == b.value_; }
  friend bool operator<(const Extended& a, const Extended& b) {
    if (!a.value_) return false;
    if (!b.value_) return true;
    return *a.value_ < *b.value_;
  }
  friend bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }
  friend bool operator>(const Extended& a, const Extended& b) { return b < a; }
  friend bool operator>=(const Extended& a, const Extended& b) { return !(a < b); }

 private:
  Extended() = default;
  std::optional<T> value_;
};

using ExtendedRational = Extended<Rational>;
using ExtendedNatural = Extended<std::int64_t>;

inline std::string to_string(const ExtendedRational& v) { return v.is_finite() ? to_string(v.value()) : "infinite"; }
inline std::string to_string(const ExtendedNatural& v) {
  return v.is_finite() ? std::to_string(v.value()) : "infinite";
}

}  // namespace qsp
