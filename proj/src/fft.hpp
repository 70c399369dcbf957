#pragma once

// Thin FFTW wrapper. Plans are cached per size; execution uses the
// new-array interface so concurrent transforms of the same size are safe.

#include <span>

#include "diffs1/spectral.hpp"

namespace diffs1::detail {

/// out[k] = sum_j in[j] exp(-2 pi i jk/m), k = 0..m/2. Unnormalized.
void forward_half_spectrum(std::span<const double> in, std::span<cplx> out);

/// out[j] = sum_{k} c_k exp(2 pi i jk/m) for a Hermitian spectrum given by its
/// non-negative half (length m/2+1). Unnormalized.
void inverse_half_spectrum(std::span<const cplx> in, std::span<double> out);

}  // namespace diffs1::detail
