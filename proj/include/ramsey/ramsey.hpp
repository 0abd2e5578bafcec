#pragma once

#include "ramsey/anchor.hpp"
#include "ramsey/augmented.hpp"
#include "ramsey/checks.hpp"
#include "ramsey/errors.hpp"
#include "ramsey/kernel.hpp"
#include "ramsey/model.hpp"
#include "ramsey/model_io.hpp"
#include "ramsey/oracle.hpp"
#include "ramsey/pipeline.hpp"
#include "ramsey/regulator.hpp"
#include "ramsey/simulate.hpp"
#include "ramsey/varrep.hpp"
