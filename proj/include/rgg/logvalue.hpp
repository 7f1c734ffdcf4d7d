#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rgg {

// A nonnegative quantity stored as its natural logarithm, with an explicit
// zero flag. Used wherever kappa_d, lambda_d or the gamma terms leave the
// range of double (kappa_d underflows near d ~ 300, phase-(2) intensities
// overflow well before that).
class LogValue {
 public:
  LogValue() = default;

  static LogValue zero() { return LogValue{}; }

  static LogValue from_log(double log_magnitude) {
    if (std::isnan(log_magnitude)) {
      throw std::invalid_argument("LogValue: NaN log magnitude");
    }
    if (log_magnitude == -std::numeric_limits<double>::infinity()) {
      return zero();
    }
    LogValue v;
    v.log_ = log_magnitude;
    v.zero_ = false;
    return v;
  }

  static LogValue from_linear(double x) {
    if (std::isnan(x) || x < 0.0) {
      throw std::invalid_argument("LogValue: negative or NaN value");
    }
    if (x == 0.0) return zero();
    return from_log(std::log(x));
  }

  bool is_zero() const { return zero_; }

  double log_magnitude() const {
    return zero_ ? -std::numeric_limits<double>::infinity() : log_;
  }

  // Materialize; underflows to 0 and overflows to +inf.
  double to_double() const { return zero_ ? 0.0 : std::exp(log_); }

  LogValue operator*(const LogValue& o) const {
    if (zero_ || o.zero_) return zero();
    return from_log(log_ + o.log_);
  }

  LogValue operator/(const LogValue& o) const {
    if (o.zero_) throw std::domain_error("LogValue: division by zero");
    if (zero_) return zero();
    return from_log(log_ - o.log_);
  }

  // log-sum-exp
  LogValue operator+(const LogValue& o) const {
    if (zero_) return o;
    if (o.zero_) return *this;
    const double hi = std::max(log_, o.log_);
    const double lo = std::min(log_, o.log_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }

  bool operator<(const LogValue& o) const {
    if (zero_) return !o.zero_;
    if (o.zero_) return false;
    return log_ < o.log_;
  }
  bool operator<=(const LogValue& o) const { return !(o < *this); }

 private:
  double log_ = 0.0;
  bool zero_ = true;
};

inline LogValue pow(const LogValue& v, double e) {
  if (v.is_zero()) {
    if (e <= 0.0) throw std::domain_error("LogValue: 0 to nonpositive power");
    return LogValue::zero();
  }
  return LogValue::from_log(e * v.log_magnitude());
}

inline LogValue sqrt(const LogValue& v) { return pow(v, 0.5); }

}  // namespace rgg
