#pragma once

namespace bubblefem {

/// Selects the OpenMP element loops or their serial reference versions.
enum class Execution { serial, parallel };

}  // namespace bubblefem
