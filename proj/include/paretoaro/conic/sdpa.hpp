#pragma once

#include <string>

#include "paretoaro/conic/program.hpp"

namespace paretoaro::conic {

// SDPA sparse format (".dat-s"). The program  min <C,X>, <A_i,X> = b_i,
// X in K  is written as the SDPA dual problem with F_0 = -C, F_i = A_i and
// c = b. Nonnegative blocks become diagonal blocks (negative size). Free and
// second-order blocks are lowered first (split_free, lower_soc); the
// objective constant is not representable and is dropped.
std::string export_sdpa(const ConicProgram& program);

// Throws Error(kParseError) naming the offending line.
ConicProgram import_sdpa(const std::string& text);

// Shortest decimal that round-trips; integral values keep a trailing ".0".
std::string format_number(double v);

}  // namespace paretoaro::conic
