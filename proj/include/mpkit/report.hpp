#ifndef MPKIT_REPORT_HPP
#define MPKIT_REPORT_HPP

#include <string>
#include <vector>

namespace mpkit {

// Outcome of an axiom/property check. Failures are content, not errors:
// a checker never throws on a violated axiom, it records a witness line.
struct CheckReport {
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void fail(std::string msg) { failures.push_back(std::move(msg)); }

  void merge(const CheckReport &other) {
    failures.insert(failures.end(), other.failures.begin(),
                    other.failures.end());
  }

  std::string summary(const std::string &what) const;
};

}  // namespace mpkit

#endif
