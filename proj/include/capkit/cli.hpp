#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification failures,
// 2 parse or validation error, 3 undetermined verdict, 4 engine cap exceeded.

#include "capkit/capability.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace capkit::cli {

inline constexpr const char* kSchema = "capkit/1";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailures = 1,
  kExitParse = 2,
  kExitUndetermined = 3,
  kExitCap = 4,
};

enum class Verb { Analyze, Capability, Pair, Epicenter, Multiplier, Verify };
enum class Format { Text, Json };

std::string to_string(Verb v);

struct Command {
  Verb verb = Verb::Capability;
  std::vector<std::string> subjects;  // group specs, or the suite name for verify
  std::string subgroup;               // pair only
  VarietyDescriptor variety = VarietyDescriptor::abelian();
  Engine engine = Engine::Auto;
  std::size_t max_order = kDefaultMaxOrder;
  bool max_order_given = false;
  std::size_t abelian_order = 100;  // verify: abelian sweep bound
  bool force = false;
  Format format = Format::Text;
  std::string output;
  bool timing = true;
};

/// argv excludes the program name. Throws ParseError on unknown verbs,
/// malformed specs or invalid flags; help requests throw HelpRequested.
Command parse_command(const std::vector<std::string>& argv);

struct HelpRequested {
  std::string text;
};

struct ReportDocument {
  nlohmann::json body;
  int exit_code = kExitOk;
};

EngineOptions engine_options(const Command& cmd);

/// Library errors become exit codes; the document then carries an "error".
ReportDocument run(const Command& cmd);

/// products | pairs | engines | classifier. Unknown names are a ParseError.
ReportDocument verify_suite(const std::string& name, const Command& cmd);

/// Serialized with sorted keys.
std::string render_json(const ReportDocument& doc);
/// Aligned table, one subject per row.
std::string render_text(const ReportDocument& doc);

int main(int argc, char** argv);

}  // namespace capkit::cli
