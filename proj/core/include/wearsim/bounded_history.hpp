#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wearsim
{

// Chronological ring of at most `capacity` entries; the oldest entry is evicted first.
template <typename T>
class BoundedHistory
{
public:
  BoundedHistory() = default;
  explicit BoundedHistory(std::size_t capacity) : capacity_(capacity) { items_.reserve(capacity); }

  void push(T value)
  {
    if (capacity_ == 0)
      return;
    if (items_.size() == capacity_)
      items_.erase(items_.begin());
    items_.push_back(std::move(value));
  }

  std::span<const T> items() const { return items_; }
  const T& back() const { return items_.back(); }
  const T& operator[](std::size_t i) const { return items_[i]; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t capacity() const { return capacity_; }

  bool operator==(const BoundedHistory&) const = default;

private:
  std::size_t capacity_ = 0;
  std::vector<T> items_;
};

} // namespace wearsim
