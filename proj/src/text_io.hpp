#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace mofw::detail {

/// Whitespace-separated tokens with `#` comments stripped.
std::vector<std::string> read_tokens(std::istream& in);

/// Sequential reader over a token list with typed accessors that throw ParseError.
class TokenCursor {
 public:
  TokenCursor(std::vector<std::string> tokens, std::string what)
      : tokens_(std::move(tokens)), what_(std::move(what)) {}

  long long next_int();
  double next_double();
  bool done() const { return pos_ >= tokens_.size(); }
  /// Throws ParseError if tokens remain.
  void expect_end() const;

 private:
  const std::string& next();
  std::vector<std::string> tokens_;
  std::string what_;
  std::size_t pos_ = 0;
};

}  // namespace mofw::detail
