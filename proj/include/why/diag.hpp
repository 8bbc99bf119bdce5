#pragma once

#include <string>
#include <vector>

namespace why {

struct SourcePos {
  int line = 1;
  int col = 1;
};

struct SourceSpan {
  std::string file;
  SourcePos start;
  SourcePos end;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  SourceSpan span;
  Severity severity = Severity::Error;
  std::string message;
};

// Sorting violation found by well_sorted: `path` locates the offending node.
struct SortDiagnostic {
  std::string path;
  std::string message;
};

inline bool has_errors(const std::vector<ParseDiagnostic>& ds) {
  for (const auto& d : ds)
    if (d.severity == Severity::Error) return true;
  return false;
}

std::string format_diagnostic(const ParseDiagnostic& d);

}  // namespace why
