#pragma once

#include "baytta/bma.hpp"
#include "baytta/data.hpp"
#include "baytta/error.hpp"
#include "baytta/experiment.hpp"
#include "baytta/logreg.hpp"
#include "baytta/metrics.hpp"
#include "baytta/predict.hpp"
#include "baytta/random.hpp"
#include "baytta/table.hpp"
