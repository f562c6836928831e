#pragma once

#include <string>

#include <json.hpp>

#include "takagi/monodromy.hpp"

namespace takagi {

/// 1 x 1 field A(x, y) = x + iy on [-1, 1]^2; sigma vanishes at the origin.
MatrixField demo_rankloss_field();

/// 2 x 2 real field [[1 + x, y], [y, 1 - x]] on [-1, 1]^2; sigma = 1 +- r,
/// so the pair coalesces at the origin. Being real, it also loses rank on
/// the whole circle r = 1.
MatrixField demo_coalescence_field();

/// Constant field diag(2, 1).
MatrixField demo_constant_field();

/// A named field plus the JSON that regenerates it.
struct FieldSpec {
  MatrixField field;
  nlohmann::json description;
};

/// Parses "demo-rankloss", "demo-coalescence", "demo-constant", or
/// "ensemble:n=<n>,seed=<s>[,realization=<r>]". An optional suffix
/// "@dx,dy" translates the field.
FieldSpec parse_field_spec(const std::string& spec);

/// Default domain [0, 2pi] x [0, pi] for trigonometric ensemble fields.
Rect ensemble_domain();

}  // namespace takagi
