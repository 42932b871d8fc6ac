#pragma once

#include "tmscat/types.hpp"

// Integer-order cylinder functions of complex argument.
//
// Scaled variants keep lossy arguments finite:
//   J_s = J e^{-|Im z|},  Y_s = Y e^{-|Im z|},  H2_s = H2 e^{jz}.
// Unscaled routines throw OverflowError when the exponential factor would not
// fit in a double.

namespace tmscat {

cplx bessel_j(int n, cplx z);
cplx bessel_y(int n, cplx z);
cplx hankel2(int n, cplx z);

cplx bessel_j_scaled(int n, cplx z);
cplx bessel_y_scaled(int n, cplx z);
cplx hankel2_scaled(int n, cplx z);

// H0^(2)(z), H1^(2)(z) in one call; the kernel fast path.
struct Hankel01 {
  cplx h0, h1;
};
Hankel01 hankel2_01(cplx z);

// Orders 0..nmax (entries nmax+1).
CVector bessel_j_sequence_scaled(int nmax, cplx z);
CVector hankel2_sequence_scaled(int nmax, cplx z);

// Largest order the sequence routines are guaranteed to handle at z.
int max_order(cplx z);

}  // namespace tmscat
