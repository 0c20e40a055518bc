#pragma once

#include <stdexcept>
#include <string>

namespace dlr {

// Library-wide exception type: contract violations (shape mismatches,
// non-finite data, diverged substeps) and configuration errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(const std::string& what) { throw Error(what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(what);
}

}  // namespace dlr
