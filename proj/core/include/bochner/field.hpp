#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include "bochner/tensor.hpp"

namespace bochner {

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

/// Deepest scalar type a type-erased field can be evaluated on.
inline constexpr int kMaxFieldDepth = 3;

/// Type-erased tensor field: a map from chart points to component arrays,
/// evaluable on double and on nested dual numbers up to kMaxFieldDepth.
///
/// Operators that differentiate take their argument as any callable with a
/// generic call operator; Field is the storage form for fixtures and random
/// test fields.
class Field {
 public:
  Field() = default;

  /// Wraps a generic callable. Levels deeper than MaxDepth are not
  /// instantiated and throw when reached; fields whose own definition
  /// differentiates another field use MaxDepth < kMaxFieldDepth.
  template <int MaxDepth = kMaxFieldDepth, class F>
  static Field from(F f) {
    Field out;
    out.f0_ = [f](const Point<double>& p) { return f(p); };
    out.f1_ = level<D1, MaxDepth>(f);
    out.f2_ = level<D2, MaxDepth>(f);
    out.f3_ = level<D3, MaxDepth>(f);
    return out;
  }

  explicit operator bool() const { return static_cast<bool>(f0_); }

  template <class T>
  Tensor<T> operator()(const Point<T>& p) const {
    constexpr int depth = dual_depth<T>::value;
    static_assert(depth <= kMaxFieldDepth, "field evaluated deeper than supported");
    if constexpr (depth == 0) {
      return f0_(p);
    } else if constexpr (depth == 1) {
      return f1_(p);
    } else if constexpr (depth == 2) {
      return f2_(p);
    } else {
      return f3_(p);
    }
  }

 private:
  template <class T, int MaxDepth, class F>
  static std::function<Tensor<T>(const Point<T>&)> level(const F& f) {
    if constexpr (dual_depth<T>::value <= MaxDepth) {
      return [f](const Point<T>& p) { return f(p); };
    } else {
      return [](const Point<T>&) -> Tensor<T> {
        throw std::logic_error("field differentiated beyond its supported depth");
      };
    }
  }

  std::function<Tensor<double>(const Point<double>&)> f0_;
  std::function<Tensor<D1>(const Point<D1>&)> f1_;
  std::function<Tensor<D2>(const Point<D2>&)> f2_;
  std::function<Tensor<D3>(const Point<D3>&)> f3_;
};

}  // namespace bochner
