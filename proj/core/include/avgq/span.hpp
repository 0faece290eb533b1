#pragma once

#include <span>
#include <vector>

namespace avgq {

/// Half-width of a vector's value range: (max - min) / 2.
///
/// This is a seminorm whose kernel is the line of constant vectors, so it is
/// invariant under shifts x -> x + c*e. Throws std::invalid_argument on an
/// empty or non-finite input.
double span(std::span<const double> x);

/// The constant c minimizing ||x - c*e||_inf, namely (max + min) / 2.
double center_offset(std::span<const double> x);

/// Subtracts center_offset(x) from every entry, in place. The result y
/// satisfies max(y) + min(y) = 0 and ||y||_inf = span(y) = span(x).
void center_in_place(std::vector<double>& x);

/// Returns the centered copy of x.
std::vector<double> centered(std::vector<double> x);

/// ||x||_inf.
double sup_norm(std::span<const double> x);

/// ||x - y||_inf. Throws std::invalid_argument on length mismatch.
double sup_dist(std::span<const double> x, std::span<const double> y);

/// span(x - y). Throws std::invalid_argument on length mismatch.
double span_dist(std::span<const double> x, std::span<const double> y);

}  // namespace avgq
