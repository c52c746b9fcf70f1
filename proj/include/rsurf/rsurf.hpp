#ifndef RSURF_RSURF_HPP
#define RSURF_RSURF_HPP

// Umbrella header: plane algebraic curves as Riemann surfaces, from branch
// loci and monodromy through genus, divisors, period matrices and the
// Abel-Jacobi machinery.

#include "rsurf/curve.hpp"
#include "rsurf/divisor.hpp"
#include "rsurf/jacobian.hpp"
#include "rsurf/periods.hpp"
#include "rsurf/resultant.hpp"
#include "rsurf/topology.hpp"
#include "rsurf/tracker.hpp"

#endif // RSURF_RSURF_HPP
