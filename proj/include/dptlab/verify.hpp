#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dptlab/bounds.hpp"
#include "dptlab/io.hpp"
#include "dptlab/monotone_family.hpp"
#include "dptlab/tables.hpp"

namespace dptlab {

enum class Theorem { dpt, xor_lemma, threshold, gen_threshold, relation_threshold, search, zero_error, size };

/// "1.1", "1.3", "1.4", "6.2", "6.3", "7.2", "7.5", "8.1".
std::optional<Theorem> parse_theorem(std::string_view id);
const char* theorem_id(Theorem t);

struct VerifyInput {
  Theorem theorem = Theorem::dpt;
  BooleanTable f;
  std::optional<RelationTable> relation;  // replaces f for 6.2 / 6.3
  std::optional<SearchSet> search;        // 7.2; defaults to f's certificates
  io::Distribution mu;
  int T = 1;
  Rational alpha = 1;
  int k = 2;
  Rational eta = 1;
  std::optional<MonotoneFamily> family;   // 6.2
};

struct BoundCheck {
  std::string name;
  BoundValue bound;
  Verdict verdict = Verdict::holds;
};

struct ReportCell {
  std::string label;
  std::vector<std::pair<std::string, std::string>> params;
  std::string representation;  // "exact" or "float64"
  std::string eps;             // 1 - single-instance optimum
  std::string oracle;
  double oracle_value = 0;
  std::string budget;          // depth or size budget given to the oracle
  std::vector<BoundCheck> bounds;
  Verdict verdict = Verdict::holds;
  std::string note;
  std::vector<std::pair<std::string, std::string>> extras;  // free-form details
  double runtime_ms = 0;
};

/// Runs the k-fold oracle for one theorem and judges oracle ≤ bound.
ReportCell verify(const VerifyInput& in);

inline constexpr int kReportFormatVersion = 1;

struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> grid;
  std::vector<ReportCell> cells;

  Verdict overall() const;
  bool violated() const { return overall() == Verdict::violated; }
  std::string to_json() const;
  std::string to_text() const;
};

}  // namespace dptlab
