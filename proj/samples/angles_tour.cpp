// Small tour: angles of a right triangle, a tetrahedron's conic volumes, and a Gaussian polytope.
#include <cstdio>

#include "orthocone/orthocone.hpp"

namespace oc = orthocone;

int main() {
    // [0, e_1, e_2]: the corner has angle 1/4, the other two vertices 1/8.
    const oc::CanonicalSimplex right{oc::SimplexClass::Rectangular, {1.0, 1.0}};
    for (std::size_t v = 0; v < 3; ++v) {
        const auto b = oc::internal_angle(right, {{v}});
        const auto g = oc::external_angle(right, {{v}});
        std::printf("vertex %zu: beta = %.6f  gamma = %.6f\n", v, b.value, g.value);
    }

    // A vertex set in general position: classify it and read off the canonical parameters.
    const auto V = oc::build_obtuse({1.0, 2.0, 1.0, 0.5});
    const auto c = oc::classify(V);
    std::printf("verdict %s, c = %.6f, special vertex %d\n", oc::to_string(c.verdict), c.c, c.special_index);

    const oc::OrthocentricCone cone(1.0, {1.0, 1.5, 2.0}, {1, -1, 1});
    const auto v = oc::conic_intrinsic_volumes(cone);
    std::printf("conic intrinsic volumes:");
    for (double x : v.values) std::printf(" %.6f", x);
    std::printf("\n");

    const oc::GaussianPolytopeSpec spec{2, 5, {1, 1, 1, 2, 2}};
    const auto f = oc::expected_f_vector(spec);
    std::printf("E f_0 = %.6f, E area = %.6f\n", f.values[0], oc::expected_volume(spec).value);
}
