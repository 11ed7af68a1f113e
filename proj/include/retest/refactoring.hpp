#pragma once

#include <map>
#include <string>

#include "retest/common.hpp"

namespace retest {

enum class RefactoringType { PullUp, InlineMethod, ExtractVariable, ExtractMethod, MakeStatic };

inline std::string to_string(RefactoringType t) {
  switch (t) {
    case RefactoringType::PullUp: return "PullUp";
    case RefactoringType::InlineMethod: return "InlineMethod";
    case RefactoringType::ExtractVariable: return "ExtractVariable";
    case RefactoringType::ExtractMethod: return "ExtractMethod";
    case RefactoringType::MakeStatic: return "MakeStatic";
  }
  return "?";
}

// Accepts both the wire spelling ("PullUp") and prose spellings from
// extraction replies ("Pull up", "pull-up method").
inline std::optional<RefactoringType> parse_refactoring_type(std::string_view text) {
  std::string t = to_lower(text);
  std::string squeezed;
  for (char c : t)
    if (c != ' ' && c != '-' && c != '_') squeezed += c;
  if (squeezed.rfind("pullup", 0) == 0) return RefactoringType::PullUp;
  if (squeezed.rfind("inlinemethod", 0) == 0 || squeezed == "inline")
    return RefactoringType::InlineMethod;
  if (squeezed.rfind("extractvariable", 0) == 0) return RefactoringType::ExtractVariable;
  if (squeezed.rfind("extractmethod", 0) == 0) return RefactoringType::ExtractMethod;
  if (squeezed.rfind("makestatic", 0) == 0 || squeezed.rfind("makemethodstatic", 0) == 0)
    return RefactoringType::MakeStatic;
  return std::nullopt;
}

// Free-text refactoring definitions fed to the mutation prompt.
inline std::string refactoring_definition(RefactoringType t) {
  switch (t) {
    case RefactoringType::PullUp:
      return "Pull up: move a method from a subclass into its superclass so shared behavior "
             "lives in one place.";
    case RefactoringType::InlineMethod:
      return "Inline method: replace each call to a method with the method's body and remove "
             "the method.";
    case RefactoringType::ExtractVariable:
      return "Extract variable: introduce a new local variable initialized with a selected "
             "expression and replace the expression with the variable.";
    case RefactoringType::ExtractMethod:
      return "Extract method: move a contiguous statement range into a new method and replace "
             "the range with a call to it.";
    case RefactoringType::MakeStatic:
      return "Make static: add the static modifier to a method, rewriting instance accesses "
             "through an explicit parameter.";
  }
  return "";
}

using ParamMap = std::map<std::string, std::string>;

// Required parameter keys per refactoring type.
inline std::vector<std::string> required_params(RefactoringType t) {
  switch (t) {
    case RefactoringType::PullUp: return {"destination"};
    case RefactoringType::InlineMethod: return {};
    case RefactoringType::ExtractVariable: return {"name", "var_type"};
    case RefactoringType::ExtractMethod: return {"name", "start", "end"};
    case RefactoringType::MakeStatic: return {};
  }
  return {};
}

}  // namespace retest
