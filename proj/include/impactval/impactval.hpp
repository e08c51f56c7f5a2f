#pragma once

#include "impactval/config.hpp"
#include "impactval/csv.hpp"
#include "impactval/errors.hpp"
#include "impactval/estimation.hpp"
#include "impactval/fit.hpp"
#include "impactval/format.hpp"
#include "impactval/impact.hpp"
#include "impactval/leverage.hpp"
#include "impactval/montecarlo.hpp"
#include "impactval/random.hpp"
#include "impactval/report.hpp"
#include "impactval/roots.hpp"
#include "impactval/schedule.hpp"
#include "impactval/valuation.hpp"
