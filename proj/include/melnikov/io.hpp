#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "melnikov/systems.hpp"

namespace melnikov {

/// Text form of a perturbation:
///   degree 2
///   a+ 0 0 1/2
///   b- 1 1 -3
/// '#' starts a comment; blank lines are ignored; unset coefficients are zero.
Perturbation parse_perturbation(const std::string& text);
std::string format_perturbation(const Perturbation& p);
Perturbation read_perturbation_file(const std::string& path);

/// All coefficients of the four arrays drawn uniformly from {k / 2^16 : |k| <= 2^16}
/// using raw 64-bit draws (portable across standard libraries).
Perturbation random_perturbation(int n, std::mt19937_64& rng);

/// Degree-1 perturbation g+ = scale (a + x), g- = -scale (a + x), with a chosen so that
/// M = 2 scale (a I(0,0) + I(1,0)) has its single zero at h_star.
Perturbation one_zero_perturbation(SystemId sys, double h_star, const Rational& scale = Rational(1));

/// Perturbation with M of one sign on the whole annulus: g+ = c, g- = -c with c a
/// polynomial in x with positive coefficients (variant selects the coefficients).
Perturbation sign_definite_perturbation(int variant);

/// Guarded uniform grid: points lo + w (guard + (1 - 2 guard) k / (count - 1)).
std::vector<double> guarded_grid(SystemId sys, int count, double guard);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// %.12e
std::string format_real(double v);

}  // namespace melnikov
