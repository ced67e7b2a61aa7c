#include "qpmut/degree.hpp"

#include <cassert>

namespace qpmut {

Degree Degree::unit(std::size_t rank, std::size_t index) {
  Degree d = zero(rank);
  d.c_.at(index) = 1;
  return d;
}

Degree& Degree::operator+=(const Degree& other) {
  assert(rank() == other.rank());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

Degree& Degree::operator-=(const Degree& other) {
  assert(rank() == other.rank());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  return *this;
}

Degree Degree::operator-() const { return scaled(-1); }

Degree Degree::scaled(std::int64_t factor) const {
  Degree d = *this;
  for (auto& x : d.c_) x *= factor;
  return d;
}

std::int64_t Degree::dot(const std::vector<std::int64_t>& functional) const {
  assert(functional.size() == c_.size());
  std::int64_t s = 0;
  for (std::size_t i = 0; i < c_.size(); ++i) s += c_[i] * functional[i];
  return s;
}

std::string Degree::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c_[i]);
  }
  return s + ")";
}

}  // namespace qpmut
