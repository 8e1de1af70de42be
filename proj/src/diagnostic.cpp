#include "fd/diagnostic.hpp"

#include "json.hpp"

namespace fd {

std::string Diagnostic::to_string() const {
  std::string s;
  if (!file.empty()) s += file + ":";
  if (line > 0) s += std::to_string(line) + ":" + std::to_string(column) + ":";
  if (!s.empty()) s += " ";
  s += "error[" + code + "]: " + message;
  if (!expected.empty()) s += "\n  expected: " + expected;
  if (!found.empty()) s += "\n  found:    " + found;
  if (!path.empty()) {
    s += "\n  at path:";
    for (int i : path) s += " " + std::to_string(i);
  }
  return s;
}

std::string Diagnostic::to_json() const {
  nlohmann::json j = {{"code", code}, {"message", message}};
  if (!path.empty()) j["path"] = path;
  if (!expected.empty()) j["expected"] = expected;
  if (!found.empty()) j["found"] = found;
  if (!file.empty()) j["file"] = file;
  if (line > 0) {
    j["line"] = line;
    j["column"] = column;
  }
  return j.dump();
}

void fail(std::string code, std::string message, std::string expected,
          std::string found) {
  Diagnostic d;
  d.code = std::move(code);
  d.message = std::move(message);
  d.expected = std::move(expected);
  d.found = std::move(found);
  throw FdError(std::move(d));
}

}  // namespace fd
