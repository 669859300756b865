#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#ifndef CUMEX_MAX_ORDER
#define CUMEX_MAX_ORDER 16
#endif

namespace cumex {

/// Largest cumulant / moment order any sequence may carry.
inline constexpr int kMaxOrder = CUMEX_MAX_ORDER;

/// Order-indexed sequence v_1..v_n (1-based). The tag keeps moments,
/// cumulants and modified moments from being mixed up.
template <class T, class Tag>
class OrderedSequence {
 public:
  using value_type = T;

  OrderedSequence() = default;

  explicit OrderedSequence(int order) : values_(check_order(order), T(0)) {}

  explicit OrderedSequence(std::vector<T> values) : values_(std::move(values)) {
    check_order(static_cast<int>(values_.size()));
  }

  OrderedSequence(std::initializer_list<T> values) : values_(values) {
    check_order(static_cast<int>(values_.size()));
  }

  int order() const noexcept { return static_cast<int>(values_.size()); }

  const T& operator()(int k) const { return values_.at(index(k)); }
  T& operator()(int k) { return values_.at(index(k)); }

  /// v_k, or zero when k exceeds the stored order.
  T get_or_zero(int k) const { return (k >= 1 && k <= order()) ? values_[k - 1] : T(0); }

  std::span<const T> values() const noexcept { return values_; }

  friend bool operator==(const OrderedSequence&, const OrderedSequence&) = default;

 private:
  static int check_order(int order) {
    if (order < 1 || order > kMaxOrder)
      throw std::invalid_argument("sequence order " + std::to_string(order) +
                                  " outside 1.." + std::to_string(kMaxOrder));
    return order;
  }

  std::size_t index(int k) const {
    if (k < 1 || k > order())
      throw std::out_of_range("order index " + std::to_string(k) + " outside 1.." +
                              std::to_string(order()));
    return static_cast<std::size_t>(k - 1);
  }

  std::vector<T> values_;
};

struct MomentTag {};
struct CumulantTag {};
struct ModifiedMomentTag {};

/// Raw moments m_1..m_n (m_0 = 1 implicit).
template <class T>
using MomentVector = OrderedSequence<T, MomentTag>;

/// Cumulants kappa_1..kappa_n.
template <class T>
using CumulantVector = OrderedSequence<T, CumulantTag>;

/// Gram-Charlier coefficients: moments generated by the cumulants of order >= 3 only.
template <class T>
using ModifiedMomentVector = OrderedSequence<T, ModifiedMomentTag>;

}  // namespace cumex
