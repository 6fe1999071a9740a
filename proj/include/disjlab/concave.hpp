#pragma once
// Finite concave functions on the nonnegative integers, in dyadic fixed
// point: value(l) = num[l] / 2^40. Beyond the stored range the table extends
// affinely with its last slope, which preserves concavity. All verifier
// comparisons stay in exact integer arithmetic; the only approximation is
// the 2^-41 rounding of binary logs onto the dyadic grid.

#include <cstdint>
#include <string>
#include <vector>

namespace disjlab {

class ConcaveTable {
 public:
  static constexpr int kFracBits = 40;
  static constexpr std::int64_t kOne = std::int64_t{1} << kFracBits;

  // Values as dyadic numerators (value * 2^40). Throws std::invalid_argument
  // unless increments num[l+1]-num[l] are nonincreasing (concavity) or the
  // table is empty.
  explicit ConcaveTable(std::vector<std::int64_t> dyadic_nums, std::string name);

  // f(0)=0, f(l)=1 for l>0.
  static ConcaveTable counting();
  // f(0)=-1, f(l)=log2(l); stored up to L.
  static ConcaveTable log2_table(std::uint64_t L);
  // f(0)=-1, f(l)=0 for l>0. -E[f(|B cap S|)] = Pr[ball misses S].
  static ConcaveTable empty_indicator();

  std::int64_t value_num(std::uint64_t l) const;
  double value(std::uint64_t l) const {
    return static_cast<double>(value_num(l)) / static_cast<double>(kOne);
  }
  std::size_t stored_size() const { return num_.size(); }
  const std::string& name() const { return name_; }

 private:
  std::vector<std::int64_t> num_;
  std::int64_t last_slope_ = 0;
  std::string name_;
};

}  // namespace disjlab
