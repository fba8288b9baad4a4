#pragma once

namespace slp {

// Bose functions g_s(z) = sum_{k>=1} z^k / k^s for fugacity 0 <= z <= 1.
// The series is summed to k = 31 and the remainder is added in closed form
// (Euler-Maclaurin: tail integral via the incomplete gamma function plus
// three derivative corrections), which keeps full double precision up to z = 1.
double bose_g32(double z);
double bose_g52(double z);

} // namespace slp
