#pragma once

// Integer partitions: nonincreasing nonnegative parts, stored without
// trailing zeros. Includes the hat map lambda -> lambda^ (subtract the
// d-th part) and its one-sided inverse lambda^(k), plus bounded
// enumeration with a hard cap.

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rsedge {

class Partition {
 public:
  Partition() = default;

  Partition(std::initializer_list<std::int64_t> parts)
      : Partition(std::vector<std::int64_t>(parts)) {}

  explicit Partition(std::vector<std::int64_t> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 0) throw std::invalid_argument("Partition: negative part");
      if (i > 0 && parts_[i] > parts_[i - 1]) throw std::invalid_argument("Partition: parts must be nonincreasing");
    }
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  }

  // Number of nonzero parts.
  std::size_t length() const { return parts_.size(); }

  std::int64_t weight() const {
    return std::accumulate(parts_.begin(), parts_.end(), std::int64_t{0});
  }

  // Part i (0-based), 0 beyond the length.
  std::int64_t part(std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }

  const std::vector<std::int64_t>& parts() const { return parts_; }

  bool operator==(const Partition& other) const = default;

 private:
  std::vector<std::int64_t> parts_;
};

// lambda^ = (lambda_1 - lambda_d, ..., lambda_{d-1} - lambda_d); requires
// length(lambda) <= d, and the result has length <= d-1.
inline Partition hat_map(const Partition& lambda, std::size_t d) {
  if (lambda.length() > d) throw std::invalid_argument("hat_map: partition longer than d");
  if (d == 0) return Partition{};
  std::vector<std::int64_t> out;
  out.reserve(d > 0 ? d - 1 : 0);
  const std::int64_t last = lambda.part(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) out.push_back(lambda.part(i) - last);
  return Partition(std::move(out));
}

// lambda^(k) = (lambda_1 + k, ..., lambda_{d-1} + k, k): the unique
// partition of length <= d and weight |lambda| + k*d whose hat is lambda.
inline Partition unhat(const Partition& lambda, std::int64_t k, std::size_t d) {
  if (k < 0) throw std::invalid_argument("unhat: negative k");
  if (d == 0 || lambda.length() + 1 > d) throw std::invalid_argument("unhat: partition longer than d-1");
  std::vector<std::int64_t> out;
  out.reserve(d);
  for (std::size_t i = 0; i + 1 < d; ++i) out.push_back(lambda.part(i) + k);
  out.push_back(k);
  return Partition(std::move(out));
}

// Visit every partition with weight <= max_weight and length <= max_len,
// ordered by weight then lexicographically. Throws once more than `cap`
// partitions have been produced.
inline void for_each_partition(std::int64_t max_weight, std::size_t max_len, std::size_t cap,
                               const std::function<void(const Partition&)>& visit) {
  if (max_weight < 0) return;
  std::size_t produced = 0;
  std::vector<std::int64_t> stack;
  // Place parts left to right, each at most the previous; group by weight
  // so weights come out ascending.
  std::function<void(std::int64_t, std::int64_t)> rec_exact = [&](std::int64_t remaining, std::int64_t max_part) {
    if (remaining == 0) {
      if (++produced > cap) throw std::runtime_error("for_each_partition: enumeration cap exceeded");
      visit(Partition(std::vector<std::int64_t>(stack)));
      return;
    }
    if (stack.size() == max_len) return;
    for (std::int64_t p = std::min(remaining, max_part); p >= 1; --p) {
      stack.push_back(p);
      rec_exact(remaining - p, p);
      stack.pop_back();
    }
  };
  for (std::int64_t w = 0; w <= max_weight; ++w) rec_exact(w, w);
}

inline std::vector<Partition> enumerate_partitions(std::int64_t max_weight, std::size_t max_len,
                                                   std::size_t cap = 1000000) {
  std::vector<Partition> out;
  for_each_partition(max_weight, max_len, cap, [&](const Partition& p) { out.push_back(p); });
  return out;
}

}  // namespace rsedge
