#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "regulus/etaq.hpp"
#include "regulus/modform.hpp"

namespace regulus::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kBudget = 3 };

/// "3 * f2^4 f3^5 / (f1^8 f6)". ParseError carries the 0-based column.
FQuotient parse_fquotient(std::string_view text);

/// "N=16; eta(4)^6 eta(8)^-2". ParseError with position; DomainError (via
/// EtaQuotientSpec::make) when a delta does not divide N.
EtaQuotientSpec parse_eta_spec(std::string_view text);

/// Budget precedence: explicit flag > REGULUS_BUDGET > kDefaultBudget.
std::size_t resolve_budget(long long flag_value);

/// Runs one subcommand; args exclude the program name. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace regulus::cli
