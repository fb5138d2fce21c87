#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kgioh/params.hpp"

namespace kgioh::oplab {

using Matrix = Eigen::MatrixXcd;

struct XP {
    Matrix x;
    Matrix p;
};

// x = (a + a^dag)/sqrt(2 m omega), P = i sqrt(m omega/2)(a^dag - a) in the
// truncated number basis. Throws DimensionError for dim < 8.
XP build_xp(int dim, double m, double omega);

// xP + Px (independent of m omega).
Matrix dilation_generator(int dim);

// Scaling-and-squaring Pade exponential; ConvergenceError on non-finite output.
Matrix expm(const Matrix& a);

// rules:   V = exp(+(pi/8)(xP+Px)), for which V x V^-1 = e^{-i pi/4} x
// printed: V = exp(-(pi/8)(xP+Px)), for which V x V^-1 = e^{+i pi/4} x
enum class RotationSign { rules, printed };

Matrix symplectic_rotation(int dim, RotationSign sign = RotationSign::rules);

enum class Quadrature { x, p };

// e^{theta A} X e^{-theta A}, A = xP + Px, X in {x, P}, as the Lie series
// sum_{k<=order} theta^k/k! ad_A^k(X). The recursion is carried out in 50-digit
// arithmetic; the result is exact on the top-left (dim - 2 order - 2) block.
Matrix lie_rotate(int dim, double m, double omega, Quadrature which, double theta, int order);

// Same series evaluated in double precision (diagnostic: roundoff amplification).
Matrix lie_rotate_double(int dim, double m, double omega, Quadrature which, double theta, int order);

struct RotationCheck {
    int dim = 0;
    int block = 0;
    int lie_order = 0;
    double res_vx = 0.0;          // Lie series, rules sign
    double res_vp = 0.0;
    double res_vx_dense = 0.0;    // V x V^-1 with dense V and V^-1
    double res_vp_dense = 0.0;
    double res_vx_printed = 0.0;  // Lie series with the printed sign
    double res_vx_double = 0.0;   // Lie series in double precision
    double cond_v = 0.0;
};

RotationCheck rotation_check(int dim, int block);

struct ChainReport {
    int dim = 0;
    double res_vx = 0.0;
    double res_vp = 0.0;
    double res_spectrum = 0.0;   // max_{n < n_reliable} |lambda_n - m omega (2n+1)|
    double res_pseudo = 0.0;     // ||H^dag - eta H eta^-1|| on the low block, eta = V^2
    int n_reliable = 0;
    double lowest_eigenvalue = 0.0;
    double res_anti_pseudo = 0.0;  // ||H^dag + eta H eta^-1||
    double res_pt = 0.0;           // ||Pi conj(H) Pi - H^dag||
    double res_spectrum_truncated_hkg = 0.0;  // truncated H_KG against i[omega(2n+1) - m omega]
    double biortho_offdiag = 0.0;
    double res_vx_dense = 0.0;
    double res_vp_dense = 0.0;
    double res_vx_printed = 0.0;
    double res_vx_double = 0.0;
    double cond_v = 0.0;
    std::vector<cplx> transformed_eigenvalues;  // first n_reliable, ascending real part
};

// Throws DimensionError for dim < 32.
ChainReport verify_chain(int dim, const ModelParams& params);

// Left/right eigenvectors of h paired by eigenvalue (right: lambda, left: conj lambda);
// largest normalised off-diagonal overlap among the n lowest (by real part).
double biorthogonality_residual(const Matrix& h, int n);

// H_KG = P^2 - m^2 omega^2 x^2 - i m omega on the truncated basis.
Matrix build_hkg(int dim, double m, double omega);

}  // namespace kgioh::oplab
