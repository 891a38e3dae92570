#pragma once

#include <complex>
#include <memory>
#include <string>

namespace tightlag {

/// Parsed arithmetic expression in the chart parameters u and v.
///
/// Grammar (see README for the full description):
///   expr    := term (('+' | '-') term)*
///   term    := factor (('*' | '/') factor)*
///   factor  := ('+' | '-') factor | power
///   power   := primary ('^' factor)?
///   primary := number | 'pi' | 'u' | 'v' | func '(' expr ')' | '(' expr ')'
///   func    := sin | cos | tan | sqrt | exp | log
///
/// Expressions evaluate on real and on complex arguments; the complex path
/// drives complex-step differentiation of chart maps, so every function in
/// the grammar is analytic on its real domain.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double eval(double u, double v) const;
  std::complex<double> eval(std::complex<double> u, std::complex<double> v) const;

  /// Exact-to-roundoff partial derivatives via a 1e-100 imaginary step.
  double du(double u, double v) const;
  double dv(double u, double v) const;

  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace tightlag
