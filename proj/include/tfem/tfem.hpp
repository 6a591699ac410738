#pragma once

#include "tfem/assembly.hpp"
#include "tfem/config.hpp"
#include "tfem/csv.hpp"
#include "tfem/degeneracy.hpp"
#include "tfem/dofs.hpp"
#include "tfem/harness.hpp"
#include "tfem/mapping.hpp"
#include "tfem/mesh.hpp"
#include "tfem/mortar.hpp"
#include "tfem/msh_io.hpp"
#include "tfem/norms.hpp"
#include "tfem/problems.hpp"
#include "tfem/quadrature.hpp"
#include "tfem/reference.hpp"
#include "tfem/solve.hpp"
#include "tfem/svg.hpp"
#include "tfem/tempering.hpp"
