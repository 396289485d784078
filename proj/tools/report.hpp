#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aplab/displacement_normalization.hpp"
#include "aplab/morphism_detector.hpp"
#include "aplab/rational.hpp"

namespace aplab::cli {

using Json = nlohmann::ordered_json;

/// Text report with a machine-readable JSON section at the end. The header
/// lists every option, defaults included.
class Report {
 public:
  Report(std::string command, std::string input);

  void option(const std::string& key, const std::string& value);
  void line(const std::string& text) { lines_.push_back(text); }
  void field(const std::string& key, const std::string& value) { lines_.push_back(key + ": " + value); }
  Json& json() { return json_; }

  std::string render(bool timestamp) const;
  /// Writes to path, or to stdout when path is empty.
  void emit(const std::filesystem::path& path, bool timestamp) const;

 private:
  std::string command_;
  std::string input_;
  std::vector<std::pair<std::string, std::string>> options_;
  std::vector<std::string> lines_;
  Json json_ = Json::object();
};

Json to_json(const Rational& r);
Json to_json(const Interval& w);
Json to_json(const RMembershipReport& r);
Json to_json(const MorphismReport& r);

void describe(Report& rep, const RMembershipReport& r, const std::string& prefix = "");
void describe(Report& rep, const MorphismReport& r);

}  // namespace aplab::cli
