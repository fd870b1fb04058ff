#pragma once

#include "horocount/cartan.hpp"
#include "horocount/partition.hpp"

#include <Eigen/Dense>

namespace horocount::decompose {

using Matrix = Eigen::MatrixXd;

/// g = q·r with q orthogonal and r upper triangular with positive diagonal.
/// Householder reflections, then a sign flip per row of r.
struct QrResult {
    Matrix q;
    Matrix r;
};

QrResult qr_positive(const Matrix& g);

/// g = km · exp(b) · u with km ∈ K·M_{I0}, b ∈ a_{I0}, u ∈ U_{I0}.
struct LanglandsParts {
    Matrix km;
    CartanVector b;
    Matrix u;
};

LanglandsParts langlands_decompose(const Matrix& g, const Partition& p);

/// Per-block Cartan decomposition m = c1 · exp(aM) · c2 of m ∈ M_{I0}.
/// c1, c2 are block-diagonal special orthogonal; aM is weakly decreasing
/// within each block (largest singular value first).
struct BlockCartan {
    Matrix c1;
    CartanVector aM;
    Matrix c2;
};

BlockCartan block_cartan(const Matrix& m, const Partition& p);

/// g = k · exp(aM) · c · exp(b) · u, the five-factor frame behind the height.
struct HorocycleFrame {
    Matrix k;
    CartanVector aM;
    Matrix c;
    CartanVector b;
    Matrix u;
    double height = 0.0;

    Matrix reconstruct() const;
};

HorocycleFrame horocycle_frame(const Matrix& g, const Partition& p);

/// Distance from the base point to the horocycle g·U·K/K, i.e.
/// sqrt(||aM||^2 + ||b||^2).
double height(const Matrix& g, const Partition& p);

Matrix exp_diag(const CartanVector& y);

/// Block-diagonal part of an n×n matrix with respect to the partition.
Matrix block_diagonal_part(const Matrix& x, const Partition& p);

bool is_block_unipotent(const Matrix& u, const Partition& p, double tol = 1e-9);
bool is_block_orthogonal(const Matrix& c, const Partition& p, double tol = 1e-9);

} // namespace horocount::decompose
