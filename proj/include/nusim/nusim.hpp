#pragma once

#include "nusim/aut.hpp"
#include "nusim/bitset.hpp"
#include "nusim/charform.hpp"
#include "nusim/decl_io.hpp"
#include "nusim/declarations.hpp"
#include "nusim/errors.hpp"
#include "nusim/formula.hpp"
#include "nusim/formula_parser.hpp"
#include "nusim/lts.hpp"
#include "nusim/relations.hpp"
#include "nusim/semantics.hpp"
#include "nusim/verify.hpp"
