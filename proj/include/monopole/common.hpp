#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace monopole {

struct MonopoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// core-model
struct DegenerateMetric : MonopoleError { using MonopoleError::MonopoleError; };
struct ZeroMonopole : MonopoleError { using MonopoleError::MonopoleError; };
struct ZeroM : MonopoleError { using MonopoleError::MonopoleError; };
struct OutOfDomain : MonopoleError { using MonopoleError::MonopoleError; };

// integrals
struct WrongGauge : MonopoleError { using MonopoleError::MonopoleError; };
struct NonpositiveS : MonopoleError { using MonopoleError::MonopoleError; };
struct ComplexDomain : MonopoleError { using MonopoleError::MonopoleError; };

// parity-expander
struct NotCoprime : MonopoleError { using MonopoleError::MonopoleError; };

// dynamics
struct NewtonDiverged : MonopoleError { using MonopoleError::MonopoleError; };
struct DomainExit : MonopoleError { using MonopoleError::MonopoleError; };
struct StepUnderflow : MonopoleError { using MonopoleError::MonopoleError; };

// transforms
struct ConventionError : MonopoleError { using MonopoleError::MonopoleError; };

/// Metric deformation exponent m = sign * m1/m2, kept exact because the
/// higher-order integral needs the coprime pair (m1, m2).
class RationalM {
 public:
  RationalM(std::int64_t numerator, std::int64_t denominator, int sign = +1)
      : sign_(sign) {
    if (numerator < 0) { numerator = -numerator; sign_ = -sign_; }
    if (denominator < 0) { denominator = -denominator; sign_ = -sign_; }
    if (numerator == 0 || denominator == 0)
      throw ZeroM("RationalM: m must be nonzero");
    if (sign_ != 1 && sign_ != -1)
      throw ZeroM("RationalM: sign must be +1 or -1");
    const std::int64_t g = std::gcd(numerator, denominator);
    m1_ = numerator / g;
    m2_ = denominator / g;
  }

  std::int64_t m1() const { return m1_; }
  std::int64_t m2() const { return m2_; }
  int sign() const { return sign_; }
  double value() const {
    return sign_ * static_cast<double>(m1_) / static_cast<double>(m2_);
  }
  /// Positive representative m1/m2; the section-3 objects are even in m.
  double abs_value() const {
    return static_cast<double>(m1_) / static_cast<double>(m2_);
  }

  /// Parses "m1/m2", "-m1/m2" or a bare integer.
  static RationalM parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
      if (slash == std::string::npos)
        return RationalM(std::stoll(text), 1);
      return RationalM(std::stoll(text.substr(0, slash)),
                       std::stoll(text.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
      throw ZeroM("RationalM: cannot parse '" + text + "'");
    } catch (const std::out_of_range&) {
      throw ZeroM("RationalM: out of range '" + text + "'");
    }
  }

  bool operator==(const RationalM& o) const {
    return m1_ == o.m1_ && m2_ == o.m2_ && sign_ == o.sign_;
  }

 private:
  std::int64_t m1_, m2_;
  int sign_;
};

}  // namespace monopole
