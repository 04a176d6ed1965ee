#pragma once

namespace semsched {

/// Execution policy for the data-parallel kernels. The serial path is the
/// reference implementation; both must produce bit-identical results.
enum class ExecPolicy { Serial, Parallel };

}  // namespace semsched
