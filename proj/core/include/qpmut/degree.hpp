#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace qpmut {

/// Element of the free abelian grading group Z^k. Rank 0 means ungraded.
class Degree {
 public:
  Degree() = default;
  explicit Degree(std::vector<std::int64_t> components) : c_(std::move(components)) {}
  Degree(std::initializer_list<std::int64_t> components) : c_(components) {}

  static Degree zero(std::size_t rank) { return Degree(std::vector<std::int64_t>(rank, 0)); }
  static Degree unit(std::size_t rank, std::size_t index);

  std::size_t rank() const { return c_.size(); }
  std::int64_t operator[](std::size_t i) const { return c_[i]; }
  const std::vector<std::int64_t>& components() const { return c_; }

  Degree& operator+=(const Degree& other);
  Degree& operator-=(const Degree& other);
  friend Degree operator+(Degree a, const Degree& b) { return a += b; }
  friend Degree operator-(Degree a, const Degree& b) { return a -= b; }
  Degree operator-() const;
  Degree scaled(std::int64_t factor) const;

  /// Pairing with an integer functional of the same rank.
  std::int64_t dot(const std::vector<std::int64_t>& functional) const;

  friend bool operator==(const Degree&, const Degree&) = default;
  friend auto operator<=>(const Degree&, const Degree&) = default;

  /// "(1,0,0)"; rank 0 prints "()".
  std::string str() const;

 private:
  std::vector<std::int64_t> c_;
};

}  // namespace qpmut
