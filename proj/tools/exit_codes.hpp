#pragma once

namespace novak::cli {

enum ExitCode : int {
  kPass = 0,
  kFail = 1,
  kInputError = 2,
  kTimeout = 3,
};

}  // namespace novak::cli
