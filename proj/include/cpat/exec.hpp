#pragma once

namespace cpat {

/// Selects between the OpenMP kernels and the serial reference versions kept
/// for testing. Both produce bit-identical results.
enum class Exec { serial, parallel };

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

}  // namespace cpat
