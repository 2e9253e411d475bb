#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cyldiff {

// Base of every domain error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteState : public Error {
 public:
  NonFiniteState(std::size_t step_index, std::size_t trajectory = npos)
      : Error(make_message(step_index, trajectory)),
        step_index_(step_index),
        trajectory_(trajectory) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t step_index() const noexcept { return step_index_; }
  std::size_t trajectory() const noexcept { return trajectory_; }

 private:
  static std::string make_message(std::size_t step, std::size_t traj) {
    std::string msg = "non-finite state at step " + std::to_string(step);
    if (traj != npos) msg += " of trajectory " + std::to_string(traj);
    return msg;
  }

  std::size_t step_index_;
  std::size_t trajectory_;
};

class ResonantInput : public Error {
 public:
  using Error::Error;
};

class IllConditioned : public Error {
 public:
  using Error::Error;
};

class AmbiguousClass : public Error {
 public:
  using Error::Error;
};

class NotTIAdmissible : public Error {
 public:
  using Error::Error;
};

class DegenerateVariance : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class IOFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cyldiff
