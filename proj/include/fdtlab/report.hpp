#pragma once

#include <string>
#include <vector>

namespace fdtlab {

/// One verification row: which check ran, on what, how it scored.
struct CheckRecord {
  std::string check;   // operation name, e.g. "fdt-dynamic"
  std::string family;  // family kind name, or "-" when not family-specific
  std::string params;  // compact JSON fragment identifying the instance
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Accumulates check rows and serializes them deterministically, so two runs
/// over the same instances produce byte-identical reports regardless of the
/// order the checks executed in.
struct FdtReport {
  std::vector<CheckRecord> records;

  void add(CheckRecord rec);
  /// Convenience: pass = residual <= tolerance.
  void add(std::string check, std::string family, std::string params, double residual,
           double tolerance);
  void merge(const FdtReport& other);

  bool all_pass() const;
  int fail_count() const;

  /// CSV with header check,family,param_json,residual,tolerance,verdict.
  /// Rows sorted lexicographically; param_json is CSV-quoted.
  std::string to_csv() const;
  /// The same rows as a JSON document {"records": [...], "all_pass": ...}.
  std::string to_json() const;
};

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double value);

}  // namespace fdtlab
