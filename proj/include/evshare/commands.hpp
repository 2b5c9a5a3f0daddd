#pragma once

namespace evshare::cli {

// Full command-line front end (gen / solve / check / map).
// Exit codes: 0 success, 2 usage, 3 validation or solve failure,
// 4 time limit without an incumbent.
int run(int argc, const char* const* argv);

}  // namespace evshare::cli
