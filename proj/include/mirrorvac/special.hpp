#pragma once

#include <complex>

namespace mirrorvac {

/// Exponential integral E1(w) for complex w off the negative real axis.
std::complex<double> expint_e1(std::complex<double> w);

/// Scaled form e^w E1(w); stays finite where E1 itself underflows.
std::complex<double> scaled_expint_e1(std::complex<double> w);

}  // namespace mirrorvac
