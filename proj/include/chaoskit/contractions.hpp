#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include "chaoskit/grid_kernel.hpp"

namespace chaoskit {

/// f (x)_r g: contracts the LAST r slots of f against the LAST r slots of g.
/// Output order p + q - 2r; the free slots of f come first. r = 0 is the
/// tensor product, r = p = q the inner product as an order-0 kernel.
/// Accepts non-symmetric inputs.
template <ChaosScalar T>
GridKernel<T> contract_classical(const GridKernel<T>& f, const GridKernel<T>& g, int r);

/// symmetrize(contract_classical(f, g, r)).
template <ChaosScalar T>
GridKernel<T> contract_classical_sym(const GridKernel<T>& f, const GridKernel<T>& g, int r);

/// Free contraction: the last r slots of f meet the FIRST r slots of g in
/// reversed order, i.e. f(t, s_1..s_r) g(s_r..s_1, u). r = p = q gives <f, g*>.
template <ChaosScalar T>
GridKernel<T> contract_free(const GridKernel<T>& f, const GridKernel<T>& g, int r);

namespace reference {

// Serial digit-by-digit transcriptions, kept as the test oracle for the
// blocked OpenMP versions above.
template <ChaosScalar T>
GridKernel<T> contract_classical(const GridKernel<T>& f, const GridKernel<T>& g, int r);

template <ChaosScalar T>
GridKernel<T> contract_free(const GridKernel<T>& f, const GridKernel<T>& g, int r);

}  // namespace reference

/// Thread-safe memo table. Values are computed outside the lock; when two
/// threads race on one key the first insertion wins and both see it.
template <class Key, class Value>
class MemoCache {
 public:
  std::shared_ptr<const Value> get_or_compute(const Key& key, const std::function<Value()>& compute) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) {
        ++hits_;
        return it->second;
      }
    }
    auto value = std::make_shared<const Value>(compute());
    std::lock_guard lock(mutex_);
    auto [it, inserted] = table_.emplace(key, std::move(value));
    return it->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return table_.size();
  }
  std::size_t hits() const {
    std::lock_guard lock(mutex_);
    return hits_;
  }

 private:
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const Value>> table_;
  std::size_t hits_ = 0;
};

}  // namespace chaoskit
