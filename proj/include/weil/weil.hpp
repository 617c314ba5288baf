#ifndef WEIL_WEIL_HPP
#define WEIL_WEIL_HPP

// Umbrella header: the full Weil-functor toolkit.

#include "algebra.hpp"
#include "error.hpp"
#include "expr.hpp"
#include "fault_injection.hpp"
#include "groebner.hpp"
#include "io.hpp"
#include "laws.hpp"
#include "lift.hpp"
#include "limits.hpp"
#include "linalg.hpp"
#include "monomial.hpp"
#include "morphism.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "session.hpp"

#endif
