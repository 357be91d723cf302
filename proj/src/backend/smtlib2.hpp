/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_BACKEND_SMTLIB2_HPP
#define CYCLOMC_BACKEND_SMTLIB2_HPP

#include "logic/formula.hpp"
#include "logic/model.hpp"

#include <string>
#include <vector>

namespace cyclomc {

// Wire-format helpers, exposed separately from the process client so the
// protocol layer is testable without a solver binary.
namespace smt2 {

/// |...|-quoted when the name is not a simple SMT-LIB symbol.
std::string symbol(const Var & v);

/// Term/formula rendering; Int terms are wrapped in to_real inside
/// mixed-sort atoms.
std::string render(const Formula & f);

/// "QF_LIA", "QF_LRA" or "QF_LIRA" from the sorts present.
std::string logic_for(const Formula & f);

/// The full command block for one query (reset, set-logic, declarations,
/// assert, check-sat).
std::string query_script(const Formula & f);

/// Parses the standard get-model reply into an assignment; declared
/// variables missing from the reply are left out.
Model parse_model(const std::string & reply, const std::vector<Var> & vars);

} // namespace smt2

} // namespace cyclomc

#endif
