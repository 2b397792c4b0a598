#pragma once

#include <stdexcept>
#include <string>

namespace zkpark {

// Every failure surfaced by the library derives from Error so callers can
// catch broadly or by category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ZKPARK_DEFINE_ERROR(Name)                    \
  class Name : public Error {                        \
   public:                                           \
    explicit Name(const std::string& what)           \
        : Error(std::string(#Name ": ") + what) {}   \
  };

ZKPARK_DEFINE_ERROR(DivisionByZero)
ZKPARK_DEFINE_ERROR(ConfigError)
ZKPARK_DEFINE_ERROR(ArgumentError)
ZKPARK_DEFINE_ERROR(DecodeError)
ZKPARK_DEFINE_ERROR(CapacityError)
ZKPARK_DEFINE_ERROR(NotFoundError)
ZKPARK_DEFINE_ERROR(UnsatisfiedWitness)
ZKPARK_DEFINE_ERROR(ConnectError)
ZKPARK_DEFINE_ERROR(ReassemblyTimeout)
ZKPARK_DEFINE_ERROR(IoError)

#undef ZKPARK_DEFINE_ERROR

}  // namespace zkpark
