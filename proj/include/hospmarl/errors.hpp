#pragma once

#include <stdexcept>
#include <string>

namespace hospmarl {

struct InconsistentStateError : std::runtime_error {
  explicit InconsistentStateError(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroSkillError : std::logic_error {
  explicit ZeroSkillError(const std::string& what) : std::logic_error(what) {}
};

struct UnsatisfiableTeamError : std::invalid_argument {
  explicit UnsatisfiableTeamError(const std::string& what) : std::invalid_argument(what) {}
};

struct UnknownSubtaskError : std::invalid_argument {
  explicit UnknownSubtaskError(const std::string& what) : std::invalid_argument(what) {}
};

struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct HashMismatchError : std::runtime_error {
  explicit HashMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct NanDetectedError : std::runtime_error {
  explicit NanDetectedError(const std::string& what) : std::runtime_error(what) {}
};

struct MonotonicityViolationError : std::runtime_error {
  explicit MonotonicityViolationError(const std::string& what) : std::runtime_error(what) {}
};

struct IndexOutOfRangeError : std::out_of_range {
  explicit IndexOutOfRangeError(const std::string& what) : std::out_of_range(what) {}
};

}  // namespace hospmarl
