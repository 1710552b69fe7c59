#pragma once

// Umbrella header.

#include "brt/assemble.hpp"
#include "brt/boosting.hpp"
#include "brt/dataset.hpp"
#include "brt/error.hpp"
#include "brt/interpret.hpp"
#include "brt/loss.hpp"
#include "brt/metrics.hpp"
#include "brt/model_io.hpp"
#include "brt/model_table.hpp"
#include "brt/sampling.hpp"
#include "brt/synthetic.hpp"
#include "brt/transforms.hpp"
#include "brt/tree.hpp"
