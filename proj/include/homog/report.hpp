#pragma once
// Clause-structured verification results: one named pass/fail line with a
// numeric margin per checked fact; the report passes iff every clause does.

#include <iosfwd>
#include <string>
#include <vector>

namespace homog {

struct Clause {
  std::string name;
  bool pass = false;
  double margin = 0.0; // distance to the failure boundary, in clause units
  std::string detail;
};

struct VerificationReport {
  std::string name;
  std::vector<Clause> clauses;

  void add(const std::string& clause_name, bool pass, double margin,
           const std::string& detail = "");
  bool overall() const;
  void write_text(std::ostream& os) const;
};

std::string report_json(const VerificationReport& r);

} // namespace homog
