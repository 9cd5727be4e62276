#pragma once

// Umbrella header.

#include "birsym/abelian_invariants.hpp"
#include "birsym/equivariant.hpp"
#include "birsym/errors.hpp"
#include "birsym/fin_ab_group.hpp"
#include "birsym/formal_sum.hpp"
#include "birsym/graded_piece.hpp"
#include "birsym/int_matrix.hpp"
#include "birsym/model_io.hpp"
#include "birsym/modular_symbols.hpp"
#include "birsym/residue_matrix.hpp"
#include "birsym/surface.hpp"
#include "birsym/symbol.hpp"
#include "birsym/version.hpp"
