#pragma once

#include "liftrom/types.hpp"

#include <functional>
#include <utility>

namespace liftrom {

/// Time-dependent input u(t) with a fixed number of channels.
class InputSignal {
 public:
  InputSignal() : InputSignal(0) {}
  explicit InputSignal(Index channels)
      : channels_(channels), eval_([channels](double) { return Vector::Zero(channels); }) {}
  InputSignal(Index channels, std::function<Vector(double)> eval)
      : channels_(channels), eval_(std::move(eval)) {}

  static InputSignal constant(Vector value) {
    const Index m = value.size();
    return InputSignal(m, [v = std::move(value)](double) { return v; });
  }

  Index channels() const { return channels_; }
  Vector operator()(double t) const { return eval_(t); }

 private:
  Index channels_;
  std::function<Vector(double)> eval_;
};

}  // namespace liftrom
