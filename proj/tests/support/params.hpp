// Shared parameter fixtures for the test suite.
#pragma once

#include "ccpb/model.hpp"

namespace ccpb_test {

/// Reference configuration used throughout: A=1, B=2, p=q=1, R=1, N=2, g=1.
inline ccpb::ModelParams p0(double eps = 0.1) {
    ccpb::ModelParams p;
    p.A = 1.0;
    p.B = 2.0;
    p.p = 1.0;
    p.q = 1.0;
    p.epsilon = eps;
    p.R = 1.0;
    p.N = 2;
    return p;
}

/// Mirror of p0 with the concentrations swapped (A > B regime).
inline ccpb::ModelParams p0_mirror(double eps = 0.1) {
    ccpb::ModelParams p = p0(eps);
    p.A = 2.0;
    p.B = 1.0;
    return p;
}

}  // namespace ccpb_test
