#include "homog/report.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace homog {

void VerificationReport::add(const std::string& clause_name, bool pass, double margin,
                             const std::string& detail) {
  clauses.push_back({clause_name, pass, margin, detail});
}

bool VerificationReport::overall() const {
  for (const auto& c : clauses)
    if (!c.pass) return false;
  return true;
}

void VerificationReport::write_text(std::ostream& os) const {
  os << "report " << name << "\n";
  char buf[64];
  for (const auto& c : clauses) {
    std::snprintf(buf, sizeof buf, "%.12g", c.margin);
    os << (c.pass ? "pass " : "FAIL ") << c.name << " margin=" << buf;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  os << "overall " << (overall() ? "pass" : "FAIL") << "\n";
}

std::string report_json(const VerificationReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["overall"] = r.overall();
  j["clauses"] = nlohmann::json::array();
  for (const auto& c : r.clauses) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["margin"] = c.margin;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    j["clauses"].push_back(cj);
  }
  return j.dump(2);
}

} // namespace homog
