#pragma once

#include <string>
#include <vector>

#include "rku/types.hpp"

namespace rku {

/// A pole of a rational Krylov space: a finite complex shift or infinity.
class Pole {
 public:
  Pole() = default;
  static Pole finite(Scalar value) { return Pole(false, value); }
  static Pole infinity() { return Pole(true, 0.0); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Only meaningful for finite poles.
  Scalar value() const noexcept { return value_; }
  Pole conj() const { return infinite_ ? *this : finite(std::conj(value_)); }

  friend bool operator==(const Pole& a, const Pole& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  Pole(bool infinite, Scalar value) : infinite_(infinite), value_(value) {}

  bool infinite_ = true;
  Scalar value_ = 0.0;
};

/// Pole sequence xi_1, xi_2, ... driving the rational Arnoldi sweep.
class PolePlan {
 public:
  enum class Repetition { as_given, cyclic };
  enum class Ordering { as_given, leja };

  PolePlan() = default;
  /// `cycles` bounds cyclic repetition; 0 means unbounded.
  explicit PolePlan(std::vector<Pole> poles, Repetition repetition = Repetition::as_given,
                    Ordering ordering = Ordering::as_given, Index cycles = 0);

  static PolePlan repeated(Pole pole) { return PolePlan({pole}, Repetition::cyclic); }

  /// Base poles in their final order (after Leja ordering, if requested).
  const std::vector<Pole>& base() const noexcept { return base_; }
  Repetition repetition() const noexcept { return repetition_; }
  Ordering ordering() const noexcept { return ordering_; }
  Index cycles() const noexcept { return cycles_; }

  /// Largest expandable length (-1 when unbounded).
  Index capacity() const;
  /// Pole j (0-based) of the expanded sequence.
  Pole at(Index j) const;
  /// First m poles of the expanded sequence; throws if m exceeds capacity().
  std::vector<Pole> expand(Index m) const;

  /// Multiset of finite base poles is invariant under conjugation. A cyclic
  /// plan is closed after each completed cycle.
  bool conjugate_closed() const;

  /// One pole per line: `inf`, `re`, or `re im`. Blank lines and `#` comments
  /// are ignored on input.
  std::string to_text() const;
  static PolePlan from_text(const std::string& text, Repetition repetition = Repetition::as_given);

 private:
  std::vector<Pole> base_;
  Repetition repetition_ = Repetition::as_given;
  Ordering ordering_ = Ordering::as_given;
  Index cycles_ = 0;
};

/// Greedy Leja ordering of finite poles: start with the largest magnitude,
/// then repeatedly take the pole maximizing the product of distances to the
/// poles already chosen. Ties go to the smaller imaginary part, then the
/// smaller real part. Infinite poles keep their relative order at the end.
std::vector<Pole> leja_sequence(const std::vector<Pole>& poles);

/// Plan holding the Leja-ordered poles with as-given repetition.
PolePlan leja_order(const std::vector<Pole>& poles);

}  // namespace rku
