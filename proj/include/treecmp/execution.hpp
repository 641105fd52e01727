#pragma once

namespace treecmp {

/// Selects the OpenMP kernel or the serial reference it is tested against.
enum class Execution { Serial, Parallel };

}  // namespace treecmp
