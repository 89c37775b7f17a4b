#ifndef RESONANT_ERRORS_HPP
#define RESONANT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace resonant {

// Base of everything the library throws for bad input or numerical failure.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Exact arithmetic would overflow, or an index exceeds a documented bound.
class RangeError : public Error {
public:
  using Error::Error;
};

// Block dimension exceeds the configured cap.
class SizeError : public Error {
public:
  using Error::Error;
};

// Input has no spread (zero variance, nonpositive E_max, ...).
class DegenerateError : public Error {
public:
  using Error::Error;
};

// Unfolding window collapsed to zero width.
class WindowError : public Error {
public:
  WindowError(const std::string &what, long index) : Error(what), index_(index) {}
  long index() const noexcept { return index_; }

private:
  long index_;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

// Requested closed form does not exist for this coupling family.
class UnsupportedFamily : public Error {
public:
  using Error::Error;
};

} // namespace resonant

#endif // RESONANT_ERRORS_HPP
