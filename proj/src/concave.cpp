#include "disjlab/concave.hpp"

#include <cmath>
#include <stdexcept>

namespace disjlab {

ConcaveTable::ConcaveTable(std::vector<std::int64_t> dyadic_nums, std::string name)
    : num_(std::move(dyadic_nums)), name_(std::move(name)) {
  if (num_.empty()) throw std::invalid_argument("concave table: empty");
  if (num_.size() >= 2) {
    std::int64_t prev = num_[1] - num_[0];
    for (std::size_t l = 1; l + 1 < num_.size(); ++l) {
      const std::int64_t inc = num_[l + 1] - num_[l];
      if (inc > prev)
        throw std::invalid_argument("concave table '" + name_ +
                                    "': increment rises at l=" + std::to_string(l));
      prev = inc;
    }
    last_slope_ = prev;
  }
}

ConcaveTable ConcaveTable::counting() {
  return ConcaveTable({0, kOne}, "counting");
}

ConcaveTable ConcaveTable::log2_table(std::uint64_t L) {
  std::vector<std::int64_t> nums;
  nums.reserve(L + 1);
  nums.push_back(-kOne);  // log 0 := -1
  for (std::uint64_t l = 1; l <= L; ++l)
    nums.push_back(std::llround(std::log2(static_cast<double>(l)) *
                                static_cast<double>(kOne)));
  return ConcaveTable(std::move(nums), "log");
}

ConcaveTable ConcaveTable::empty_indicator() {
  return ConcaveTable({-kOne, 0}, "empty-indicator");
}

std::int64_t ConcaveTable::value_num(std::uint64_t l) const {
  if (l < num_.size()) return num_[l];
  const std::uint64_t over = l - (num_.size() - 1);
  return num_.back() + static_cast<std::int64_t>(over) * last_slope_;
}

}  // namespace disjlab
