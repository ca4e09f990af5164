#pragma once

#include <iosfwd>

namespace seisfault {

// Exit codes: 0 success, 2 validation, 3 I/O, 4 stage failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitStage = 4;

// Entry point behind the `seisfault` tool: synth | run | eval | export | serve.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seisfault
