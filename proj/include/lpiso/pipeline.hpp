#pragma once

#include "lpiso/config.hpp"
#include "lpiso/error.hpp"
#include "lpiso/report.hpp"

#include <optional>
#include <string_view>

namespace lpiso {

enum class Command { Diagonalize, Classify, Certify, FamilyEval };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command c);

Report cmd_diagonalize(const ProblemConfig& cfg);
Report cmd_classify(const ProblemConfig& cfg);
Report cmd_certify(const ProblemConfig& cfg);
Report cmd_family_eval(const ProblemConfig& cfg);

/// Dispatches to the command. Errors propagate as lpiso::Error.
Report run_command(Command c, const ProblemConfig& cfg);

/// 1 for malformed input, 2 for numeric precondition failures.
int exit_code_for(ErrorCode code) noexcept;

}  // namespace lpiso
