#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gwrec {

// Base of every error raised by the library. The CLI maps subclasses to exit
// codes (see tools/gwrec_cli.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

class InvalidTree : public Error {
 public:
  using Error::Error;
};

class InvalidSize : public Error {
 public:
  using Error::Error;
};

class SpanMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A node function produced a value outside the state space.
class SpecError : public Error {
 public:
  using Error::Error;
};

class NoKernel : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class NotUnique : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Tree generation hit the node cap. `attempts` counts how many trees were
// started by the operation that gave up (1 for a single sampler call).
class CapExceeded : public Error {
 public:
  CapExceeded(std::uint64_t cap, std::uint64_t attempts = 1)
      : Error("tree exceeded node cap of " + std::to_string(cap) + " nodes"),
        cap_(cap),
        attempts_(attempts) {}

  std::uint64_t cap() const noexcept { return cap_; }
  std::uint64_t attempts() const noexcept { return attempts_; }

 private:
  std::uint64_t cap_;
  std::uint64_t attempts_;
};

// The composed spine map was still non-constant after `levels` levels.
class NonCoalescent : public Error {
 public:
  NonCoalescent(std::uint64_t levels, std::size_t image_size)
      : Error("no coalescence within " + std::to_string(levels) +
              " spine levels (image size " + std::to_string(image_size) + ")"),
        levels_(levels),
        image_size_(image_size) {}

  std::uint64_t levels() const noexcept { return levels_; }
  std::size_t image_size() const noexcept { return image_size_; }

 private:
  std::uint64_t levels_;
  std::size_t image_size_;
};

}  // namespace gwrec
