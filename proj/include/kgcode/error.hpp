#ifndef KGCODE_ERROR_HPP
#define KGCODE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace kgcode {

/// Broad failure category. The CLI maps these onto exit codes 2, 3 and 4.
enum class ErrorKind {
  input,         // malformed files, bad arguments
  precondition,  // budget, depth and structural preconditions
  internal       // an invariant the library should have guaranteed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace kgcode

#endif  // KGCODE_ERROR_HPP
