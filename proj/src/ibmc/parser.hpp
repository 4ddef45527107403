#pragma once

#include "ast.hpp"

namespace ibmc {

// Source text plus its origin (file path or "<stdin>").
struct SourceProgram {
  std::string text;
  std::string origin = "<string>";
};

// Parses a .rsl program into an untyped AST. Throws ParseError.
Program parse(const SourceProgram& src);

}  // namespace ibmc
