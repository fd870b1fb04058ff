#pragma once

namespace horocount::special {

/// Riemann zeta for real s > 1 via Euler–Maclaurin summation.
double zeta(double s);

/// Completed zeta ξ(s) = ½ s(s-1) π^{-s/2} Γ(s/2) ζ(s), s > 1.
double xi(double s);

double gamma(double x);

/// Area of the unit sphere S^{k-1} ⊂ R^k, 2π^{k/2}/Γ(k/2).
double sphere_area(int k);

} // namespace horocount::special
