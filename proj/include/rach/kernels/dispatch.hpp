#pragma once

namespace rach::kern {

/// Kernel backend selection. Scalar is the reference implementation; Avx2 is
/// required to produce bit-identical results (same operation sequence, same
/// rounding) and is selected automatically when the CPU supports AVX2+FMA.
enum class Backend { Auto, Scalar, Avx2 };

/// The backend currently in force (never returns Auto).
Backend active_backend();

/// Override the backend (tests, reproducibility studies). Auto re-resolves
/// from the RACH_BACKEND environment variable and CPUID. Forcing Avx2 on a
/// CPU without AVX2 throws.
void force_backend(Backend b);

bool cpu_supports_avx2();

const char* backend_name(Backend b);

}  // namespace rach::kern
