#pragma once

#include "twistforge/field.hpp"

namespace twistforge {

/// Phi_m over Q, computed as (t^m - 1) / prod_{d | m, d < m} Phi_d.
Poly cyclotomic_polynomial(unsigned m);

/// Q(zeta_m) with the class of t as zeta_m; m <= 2 gives Q itself.
FieldPtr cyclotomic_field(unsigned m);

}  // namespace twistforge
