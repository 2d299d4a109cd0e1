#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "ridgewalk/linalg.hpp"

namespace ridgewalk {

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Eigenvalues sorted by descending modulus; ties broken by descending real
// part, then descending imaginary part, so conjugate pairs sit adjacent with
// the +i member first.
struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;
    bool complete = true;  // false: QR hit its iteration cap, holds the converged subset
};

struct EigPair {
    double value;
    Vec vector;
};

// real nonsymmetric eigenvalues via Hessenberg reduction and double-shift QR
Spectrum eig_general(const Mat& a);

// cyclic Jacobi; requires symmetry up to roundoff, returns all pairs sorted
// by descending |value| (ties: descending value)
std::vector<EigPair> eig_symmetric(const Mat& a);

// top n eigenpairs of a symmetric matrix; power_iteration switches from the
// Jacobi path to power iteration with deflation
std::vector<EigPair> top_eigpairs_symmetric(const Mat& a, std::size_t n,
                                            bool power_iteration = false,
                                            int iters = 200);

double spectral_radius(const Mat& a);

// rows "re,im", one per eigenvalue, with a header
std::string spectrum_csv(const Spectrum& s);

} // namespace ridgewalk
