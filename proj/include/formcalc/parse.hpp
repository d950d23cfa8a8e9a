#pragma once

// Text grammar shared by the CLI and the config loaders.
//
//   expr    := sum
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?          exponent: integer constant
//   primary := NUMBER | IDENT | FUNC '(' expr ')' | '(' expr ')'
//   FUNC    := sin | cos | exp | log
//
//   form    := ['+' | '-'] term (('+' | '-') term)*
//   term    := ['(' expr ')' | NUMBER] basis?    (at least one part)
//   basis   := 'd' IDENT ('^' 'd' IDENT)*
//
// Whitespace is insignificant; `dx1` and `d x1` both denote the basis
// 1-form of coordinate x1. NUMBER is an integer or a decimal literal, read
// exactly as a rational.

#include <string_view>

#include "formcalc/expr.hpp"
#include "formcalc/forms.hpp"

namespace formcalc {

/// Throws ParseError with line/column on malformed input.
Expr parse_expr(std::string_view text);

/// Throws ParseError on malformed input, unknown basis coordinates or
/// terms of mixed degree.
Form parse_form(std::string_view text, const Coords& coords);

}  // namespace formcalc
