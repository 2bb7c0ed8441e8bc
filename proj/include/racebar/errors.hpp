#ifndef RACEBAR_ERRORS_HPP
#define RACEBAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace racebar {

/// Bad input: an invalid modulus, residue, parameter range or file.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A construction could not be carried out for the given instance.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A produced object failed one of its own post-conditions.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

inline void ensure(bool ok, const std::string& what) {
  if (!ok) throw VerificationError(what);
}

}  // namespace detail
}  // namespace racebar

#endif  // RACEBAR_ERRORS_HPP
