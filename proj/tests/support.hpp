// Shared helpers for the test suites.

#ifndef FOML_TESTS_SUPPORT_HPP_
#define FOML_TESTS_SUPPORT_HPP_

#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "foml/problem.hpp"

namespace testing_support {

// Replaces fresh symbol and atom names c3__1a2b3c4d / a0__... by c3 / a0 so
// outputs can be compared modulo the hash part.
inline std::string strip_hashes(const std::string& s) {
  static const std::regex fresh("\\b([ca][0-9]+)__[0-9a-f]{8}\\b");
  return std::regex_replace(s, fresh, "$1");
}

inline std::string problem_path(const std::string& name) { return std::string(FOML_PROBLEMS_DIR) + "/" + name; }

inline std::string read_problem(const std::string& name) {
  std::ifstream in(problem_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline foml::Expr expr(const std::string& text, const foml::DefinitionEnvironment& env) {
  return foml::parse_expression(text, env);
}

}  // namespace testing_support

#endif  // FOML_TESTS_SUPPORT_HPP_
