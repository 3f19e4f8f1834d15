#pragma once

// Umbrella header: quasi-arithmetic means, generator comparison through the
// operator A_f = f''/f', max-family diagnostics, and the bump-sum example
// constructions.

#include "qam/arrow_generator.hpp"
#include "qam/arrow_profile.hpp"
#include "qam/comparison.hpp"
#include "qam/constructions.hpp"
#include "qam/diagnostics.hpp"
#include "qam/errors.hpp"
#include "qam/family.hpp"
#include "qam/generator.hpp"
#include "qam/interval.hpp"
#include "qam/means.hpp"
#include "qam/numeric.hpp"
#include "qam/quadrature.hpp"
#include "qam/trend.hpp"
