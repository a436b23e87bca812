#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stiffspec {

/// Error thrown by CoeffExpr::parse, carrying the offending position
/// (0-based offset into the source text).
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what), position(pos) {}
  std::size_t position;
};

/// A coefficient function of one variable, parsed from a small expression
/// language:
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' integer)?
///   base   := number | 'x' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
///   func   := 'sin' | 'cos' | 'exp' | 'sqrt'
///
/// Whitespace is insignificant. Evaluation is deterministic: the tree is
/// kept exactly as parsed (no folding or reassociation), so the same source
/// always produces bit-identical values.
///
/// Instances are immutable and cheap to copy; evaluation is reentrant.
class CoeffExpr {
 public:
  CoeffExpr() = default;

  static CoeffExpr parse(std::string_view source);

  /// Value at x. Valid for any real x; domain problems (poles, sqrt of a
  /// negative) surface as inf/nan, which validation screens for.
  double operator()(double x) const;

  bool valid() const { return root_ != nullptr; }

  /// The original source text.
  const std::string& source() const { return source_; }

  /// Fully parenthesized form that reparses to an identical tree.
  std::string canonical() const;

  /// Screens the expression on a uniform grid of `samples` points over
  /// [lo, hi]: non-finite values, division by a denominator that vanishes or
  /// changes sign, sqrt of a non-positive argument, and a negative-power base
  /// that vanishes or changes sign are all reported. Returns a description of
  /// the first problem found, or nullopt if the expression looks usable.
  std::optional<std::string> domain_issue(double lo, double hi,
                                          int samples = 1000) const;

  struct Node;  // opaque expression tree

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace stiffspec
