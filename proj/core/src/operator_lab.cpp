#include "kgioh/operator_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "kgioh/errors.hpp"

namespace kgioh::oplab {

namespace {

constexpr cplx kI(0.0, 1.0);

double block_max(const Matrix& a, int b) { return a.topLeftCorner(b, b).cwiseAbs().maxCoeff(); }

int lie_order_for(int dim, int block) { return std::max(1, (dim - block - 2) / 2); }

// Sort eigenvalues by ascending real part, ties by imaginary part.
std::vector<cplx> sorted_eigenvalues(const Matrix& h) {
    Eigen::ComplexEigenSolver<Matrix> es(h, false);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigenvalue solver failed");
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

}  // namespace

XP build_xp(int dim, double m, double omega) {
    if (dim < 8) throw DimensionError("operator basis requires dim >= 8");
    if (!(m > 0.0) || !(omega > 0.0)) throw DomainError("build_xp requires m > 0 and omega > 0");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Matrix ad = a.adjoint();
    const double mw = m * omega;
    return {(a + ad) / std::sqrt(2.0 * mw), kI * std::sqrt(mw / 2.0) * (ad - a)};
}

Matrix dilation_generator(int dim) {
    const XP op = build_xp(dim, 1.0, 1.0);
    return op.x * op.p + op.p * op.x;
}

Matrix expm(const Matrix& a) {
    Matrix e = a.exp();
    if (!e.allFinite()) throw ConvergenceError("matrix exponential produced non-finite entries");
    return e;
}

Matrix symplectic_rotation(int dim, RotationSign sign) {
    const double s = sign == RotationSign::rules ? 1.0 : -1.0;
    return expm(s * (kPi / 8.0) * dilation_generator(dim));
}

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;
using RMat = std::vector<std::vector<Real>>;

// x and Q = -iP as real matrices.
RMat real_quadrature(int dim, double m, double omega, Quadrature which) {
    RMat r(dim, std::vector<Real>(dim, Real(0)));
    const Real mw = Real(m) * Real(omega);
    for (int n = 1; n < dim; ++n) {
        const Real s = boost::multiprecision::sqrt(Real(n));
        if (which == Quadrature::x) {
            r[n - 1][n] = r[n][n - 1] = s / boost::multiprecision::sqrt(2 * mw);
        } else {
            const Real c = boost::multiprecision::sqrt(mw / 2) * s;
            r[n][n - 1] = c;
            r[n - 1][n] = -c;
        }
    }
    return r;
}

// Nonzero pattern of a banded real matrix by rows.
struct Band {
    std::vector<std::vector<std::pair<int, Real>>> rows;
    std::vector<std::vector<std::pair<int, Real>>> cols;
};

Band make_band(const RMat& b) {
    const int n = static_cast<int>(b.size());
    Band band{std::vector<std::vector<std::pair<int, Real>>>(n), std::vector<std::vector<std::pair<int, Real>>>(n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (b[i][j] != 0) {
                band.rows[i].emplace_back(j, b[i][j]);
                band.cols[j].emplace_back(i, b[i][j]);
            }
    return band;
}

// [B, X]
RMat commutator(const Band& b, const RMat& x) {
    const int n = static_cast<int>(x.size());
    RMat r(n, std::vector<Real>(n, Real(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Real acc = 0;
            for (const auto& [l, v] : b.rows[i]) acc += v * x[l][j];
            for (const auto& [l, v] : b.cols[j]) acc -= x[i][l] * v;
            r[i][j] = acc;
        }
    return r;
}

}  // namespace

Matrix lie_rotate(int dim, double m, double omega, Quadrature which, double theta, int order) {
    if (dim < 8) throw DimensionError("operator basis requires dim >= 8");
    if (!(m > 0.0) || !(omega > 0.0)) throw DomainError("lie_rotate requires m > 0 and omega > 0");
    // A = xP + Px = i B with B = xQ + Qx real, so ad_A^k(X) = i^k ad_B^k(X).
    const RMat x = real_quadrature(dim, 1.0, 1.0, Quadrature::x);
    const RMat q = real_quadrature(dim, 1.0, 1.0, Quadrature::p);
    RMat bm(dim, std::vector<Real>(dim, Real(0)));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            Real acc = 0;
            for (int l = 0; l < dim; ++l) acc += x[i][l] * q[l][j] + q[i][l] * x[l][j];
            bm[i][j] = acc;
        }
    const Band band = make_band(bm);

    RMat term = real_quadrature(dim, m, omega, which);
    RMat re = term;
    RMat im(dim, std::vector<Real>(dim, Real(0)));
    const Real th = Real(theta);
    Real coef = 1;  // theta^k / k!
    for (int k = 1; k <= order; ++k) {
        term = commutator(band, term);
        coef *= th / k;
        // i^k: 1, i, -1, -i
        const int phase = k % 4;
        RMat& dst = (phase % 2 == 0) ? re : im;
        const Real sg = (phase == 0 || phase == 1) ? Real(1) : Real(-1);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) dst[i][j] += sg * coef * term[i][j];
    }
    Matrix out(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out(i, j) = cplx(re[i][j].convert_to<double>(), im[i][j].convert_to<double>());
    // P = i Q
    return which == Quadrature::p ? Matrix(kI * out) : out;
}

Matrix lie_rotate_double(int dim, double m, double omega, Quadrature which, double theta, int order) {
    const XP op = build_xp(dim, m, omega);
    const Matrix a = op.x * op.p + op.p * op.x;
    Matrix term = which == Quadrature::x ? op.x : op.p;
    Matrix sum = term;
    for (int k = 1; k <= order; ++k) {
        term = (a * term - term * a) * (theta / k);
        sum += term;
    }
    return sum;
}

RotationCheck rotation_check(int dim, int block) {
    if (block < 1 || block > dim) throw DimensionError("rotation block must lie inside the basis");
    RotationCheck r;
    r.dim = dim;
    r.block = block;
    r.lie_order = lie_order_for(dim, block);
    const XP op = build_xp(dim, 1.0, 1.0);
    const Matrix a = op.x * op.p + op.p * op.x;
    const cplx rot = std::polar(1.0, -kPi / 4.0);
    const double th = kPi / 8.0;

    const int k = r.lie_order;
    r.res_vx = block_max(lie_rotate(dim, 1.0, 1.0, Quadrature::x, th, k) - rot * op.x, block);
    r.res_vp = block_max(lie_rotate(dim, 1.0, 1.0, Quadrature::p, th, k) - std::conj(rot) * op.p, block);
    r.res_vx_printed = block_max(lie_rotate(dim, 1.0, 1.0, Quadrature::x, -th, k) - rot * op.x, block);
    r.res_vx_double = block_max(lie_rotate_double(dim, 1.0, 1.0, Quadrature::x, th, k) - rot * op.x, block);

    const Matrix v = expm(th * a);
    const Matrix vinv = expm(-th * a);
    r.res_vx_dense = block_max(v * op.x * vinv - rot * op.x, block);
    r.res_vp_dense = block_max(v * op.p * vinv - std::conj(rot) * op.p, block);
    const Eigen::JacobiSVD<Matrix> svd(v);
    const auto& sv = svd.singularValues();
    r.cond_v = sv(0) / sv(sv.size() - 1);
    return r;
}

Matrix build_hkg(int dim, double m, double omega) {
    const XP op = build_xp(dim, m, omega);
    const double mw = m * omega;
    return op.p * op.p - mw * mw * op.x * op.x - kI * mw * Matrix::Identity(dim, dim);
}

double biorthogonality_residual(const Matrix& h, int n) {
    Eigen::ComplexEigenSolver<Matrix> right(h, true);
    Eigen::ComplexEigenSolver<Matrix> left(h.adjoint(), true);
    if (right.info() != Eigen::Success || left.info() != Eigen::Success)
        throw ConvergenceError("eigenvector solver failed");
    const int dim = static_cast<int>(h.rows());
    std::vector<int> order(dim);
    std::iota(order.begin(), order.end(), 0);
    const auto& lr = right.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return lr(i).real() != lr(j).real() ? lr(i).real() < lr(j).real() : lr(i).imag() < lr(j).imag();
    });
    n = std::min(n, dim);
    std::vector<int> pair(n);
    std::vector<bool> used(dim, false);
    for (int k = 0; k < n; ++k) {
        const cplx target = std::conj(lr(order[k]));
        int best = -1;
        double bd = 0.0;
        for (int j = 0; j < dim; ++j) {
            if (used[j]) continue;
            const double d = std::abs(left.eigenvalues()(j) - target);
            if (best < 0 || d < bd) {
                best = j;
                bd = d;
            }
        }
        used[best] = true;
        pair[k] = best;
    }
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = left.eigenvectors().col(pair[i]).dot(right.eigenvectors().col(order[j]));
    double off = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) off = std::max(off, std::abs(g(i, j)) / std::sqrt(std::abs(g(i, i)) * std::abs(g(j, j))));
    return off;
}

ChainReport verify_chain(int dim, const ModelParams& params) {
    if (dim < 32) throw DimensionError("verify_chain requires dim >= 32");
    const double m = params.m;
    const double w = params.omega;
    const double mw = m * w;
    const int block = dim / 2;
    const int order = lie_order_for(dim, block);
    const int check = block - 2;  // products of two rotated operators

    ChainReport r;
    r.dim = dim;
    r.n_reliable = dim / 4;

    const RotationCheck rc = rotation_check(dim, block);
    r.res_vx = rc.res_vx;
    r.res_vp = rc.res_vp;
    r.res_vx_dense = rc.res_vx_dense;
    r.res_vp_dense = rc.res_vp_dense;
    r.res_vx_printed = rc.res_vx_printed;
    r.res_vx_double = rc.res_vx_double;
    r.cond_v = rc.cond_v;

    const XP op = build_xp(dim, m, w);
    const Matrix id = Matrix::Identity(dim, dim);
    const Matrix hkg = op.p * op.p - mw * mw * op.x * op.x - kI * mw * id;

    // Transformed operator V H_KG V^-1 from the rotated x and P.
    const Matrix xr = lie_rotate(dim, m, w, Quadrature::x, kPi / 8.0, order);
    const Matrix pr = lie_rotate(dim, m, w, Quadrature::p, kPi / 8.0, order);
    const Matrix hhat = pr * pr - mw * mw * xr * xr - kI * mw * id;
    const Matrix shifted = (-kI * hhat + mw * id).topLeftCorner(check, check);
    const std::vector<cplx> ev = sorted_eigenvalues(shifted);
    r.transformed_eigenvalues.assign(ev.begin(), ev.begin() + r.n_reliable);
    r.lowest_eigenvalue = ev.front().real();
    for (int n = 0; n < r.n_reliable; ++n)
        r.res_spectrum = std::max(r.res_spectrum, std::abs(ev[n] - mw * (2.0 * n + 1.0)));

    // eta = V^2: conjugation by the doubled angle.
    const Matrix xe = lie_rotate(dim, m, w, Quadrature::x, kPi / 4.0, order);
    const Matrix pe = lie_rotate(dim, m, w, Quadrature::p, kPi / 4.0, order);
    const Matrix eh = pe * pe - mw * mw * xe * xe - kI * mw * id;
    const Matrix hdag = hkg.adjoint();
    r.res_pseudo = block_max(hdag - eh, check);
    r.res_anti_pseudo = block_max(hdag + eh, check);

    Matrix parity = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) parity(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    r.res_pt = (parity * hkg.conjugate() * parity - hdag).cwiseAbs().maxCoeff();

    const std::vector<cplx> hev = sorted_eigenvalues(hkg);
    for (int n = 0; n < r.n_reliable; ++n)
        r.res_spectrum_truncated_hkg =
            std::max(r.res_spectrum_truncated_hkg, std::abs(hev[n] - kI * (w * (2.0 * n + 1.0) - mw)));
    r.biortho_offdiag = biorthogonality_residual(hkg, r.n_reliable);
    return r;
}

}  // namespace kgioh::oplab
