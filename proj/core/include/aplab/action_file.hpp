#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "aplab/group_action.hpp"

namespace aplab {

/// Line-oriented action format:
///
///   action <name>
///   gen <name> affine <slope> <intercept>
///   gen <name> pl ltail <s> pts <x> <y> ; <x> <y> ... rtail <s>
///   inv <name> <name>
///   rel <word>
///
/// Numbers are "p/q" or "p". '#' starts a comment. Throws ParseError
/// (line/column) on malformed text and ValidationError on invariant
/// violations, including relators that fail the exact check.
GroupAction parse_action(std::string_view text);

/// Canonical text: generators sorted by name, inverse pairs sorted,
/// relators in declaration order, rationals reduced. PL generators only.
std::string serialize_action(const GroupAction& a);

GroupAction read_action_file(const std::filesystem::path& path);
void write_action_file(const std::filesystem::path& path, const GroupAction& a);

}  // namespace aplab
