#include "qpmut/linalg.hpp"

namespace qpmut {

bool RowEchelon::insert(SparseRow row) {
  while (!row.empty()) {
    const auto [lead, value] = *row.begin();
    auto pivot = pivots_.find(lead);
    if (pivot == pivots_.end()) {
      const Rational inv = 1 / value;
      for (auto& [col, x] : row) x *= inv;
      pivots_.emplace(lead, std::move(row));
      return true;
    }
    const Rational factor = value;
    for (const auto& [col, x] : pivot->second) {
      auto [it, inserted] = row.try_emplace(col, 0);
      it->second -= factor * x;
      if (it->second == 0) row.erase(it);
    }
  }
  return false;
}

std::size_t rank(std::vector<SparseRow> rows) {
  RowEchelon echelon;
  for (auto& r : rows) echelon.insert(std::move(r));
  return echelon.rank();
}

std::size_t rank(const std::vector<std::vector<Rational>>& matrix) {
  RowEchelon echelon;
  for (const auto& line : matrix) {
    SparseRow row;
    for (std::size_t j = 0; j < line.size(); ++j)
      if (line[j] != 0) row.emplace(j, line[j]);
    echelon.insert(std::move(row));
  }
  return echelon.rank();
}

}  // namespace qpmut
