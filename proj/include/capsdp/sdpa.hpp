#pragma once

#include <string>

#include "capsdp/sdp_problem.hpp"

namespace capsdp {

/// Sparse SDPA text (".dat-s"). The problem is written as the SDPA dual
/// form: maximize F_0 . Y subject to F_i . Y = c_i with F_0 = -C, F_i = A_i
/// and c = b. Free scalars become a trailing LP block holding x+ and x- for
/// each variable. Leading "*" comment lines carry block labels, row tags,
/// free variable names and the objective offset so that import_sdpa restores
/// the problem; other SDPA readers skip them.
std::string export_sdpa(const SdpProblem& problem);

/// Parses sparse SDPA text. Numeric values are taken as the exact binary
/// value of the parsed double. Without the capsdp comments every LP block
/// entry becomes its own 1x1 block.
SdpProblem import_sdpa(const std::string& text);

}  // namespace capsdp
