#ifndef GRAPHFORMS_GRAPHFORMS_HPP
#define GRAPHFORMS_GRAPHFORMS_HPP

#include "graphforms/builders.hpp"
#include "graphforms/cech.hpp"
#include "graphforms/dirichlet.hpp"
#include "graphforms/document.hpp"
#include "graphforms/errors.hpp"
#include "graphforms/linalg.hpp"
#include "graphforms/navier_stokes.hpp"
#include "graphforms/neumann.hpp"
#include "graphforms/one_forms.hpp"
#include "graphforms/potential.hpp"
#include "graphforms/run.hpp"
#include "graphforms/weighted_graph.hpp"

#endif
