#pragma once

#include "hessmc/geometry/fields.hpp"
#include "hessmc/geometry/manifold.hpp"

namespace hessmc {

// <Theta(v2) v1, v3> = (nabla_{v3} Ric^#)(v1, v2) - (nabla_{v1} Ric^#)(v3, v2)
//                      - (nabla_{v2} Ric^#)(v1, v3),
// reading (nabla_a Ric^#)(b, c) as <(nabla_a Ric^#)(b), c>. Trilinear.
double theta(const Manifold& M, const Vec& x, const Vec& v1, const Vec& v2,
             const Vec& v3);

// The vector Theta(v2)(v1) obtained from theta() by metric duality.
Vec theta_vector(const Manifold& M, const Vec& x, const Vec& v1,
                 const Vec& v2);

// Theta^h(v2)(v1) = 1/2 Theta(v2)(v1) + nabla^2(grad h)(v2, v1)
//                   + R(grad h, v2) v1.
Vec theta_h(const Manifold& M, const ScalarFieldBundle& fields, const Vec& x,
            const Vec& v2, const Vec& v1);

}  // namespace hessmc
