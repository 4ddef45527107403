#pragma once

#include <stdexcept>
#include <string>

namespace ibmc {

struct SourceLoc {
  int line = 0;  // 1-based; 0 = unknown
  int col = 0;
  std::string str() const {
    if (line == 0) return "?";
    return std::to_string(line) + ":" + std::to_string(col);
  }
};

// Front-end failure with a position. The CLI maps these to exit code 1.
class FrontendError : public std::runtime_error {
 public:
  FrontendError(SourceLoc loc, const std::string& msg)
      : std::runtime_error(loc.str() + ": " + msg), loc_(loc) {}
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

class ParseError : public FrontendError {
 public:
  using FrontendError::FrontendError;
};

class TypeError : public FrontendError {
 public:
  using FrontendError::FrontendError;
};

// Bad CLI usage / invalid engine configuration.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ibmc
