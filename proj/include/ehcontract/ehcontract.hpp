#ifndef EHCONTRACT_EHCONTRACT_HPP
#define EHCONTRACT_EHCONTRACT_HPP

#include "baselines.hpp"
#include "contract_solver.hpp"
#include "feasibility.hpp"
#include "golden_section.hpp"
#include "market_model.hpp"
#include "projected_ascent.hpp"
#include "scenario.hpp"
#include "type_distribution.hpp"
#include "version.hpp"

#endif
