// Unitary discrete Fourier transforms on the periodic box, FFTW-backed.
// Both directions carry the symmetric 1/sqrt(N) factor so that
// sum_x |f|^2 == sum_xi |fhat|^2 exactly (Parseval without volume factors).
#ifndef EULAB_FFT_HPP
#define EULAB_FFT_HPP

#include "eulab/grid.hpp"

namespace eulab {

SpectralField transform_forward(const RealField& f);
RealField transform_inverse(const SpectralField& fh);

// Inverse transform keeping the complex result; the imaginary part is the
// conjugate-symmetry residue diagnostic.
SpectralField transform_inverse_complex(const SpectralField& fh);

// Largest |imag| of the complex inverse transform, relative to max |field|.
double imag_residual(const SpectralField& fh);

} // namespace eulab

#endif
