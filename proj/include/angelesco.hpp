#pragma once

#include "angelesco/angelesco_kernel.hpp"
#include "angelesco/contours.hpp"
#include "angelesco/errors.hpp"
#include "angelesco/finite_n.hpp"
#include "angelesco/io.hpp"
#include "angelesco/linalg.hpp"
#include "angelesco/ode_solutions.hpp"
#include "angelesco/parallel.hpp"
#include "angelesco/path.hpp"
#include "angelesco/precision.hpp"
#include "angelesco/psi_parametrix.hpp"
#include "angelesco/quadrature.hpp"
#include "angelesco/verify.hpp"
