#pragma once

#include "core_model.hpp"
#include "numeric.hpp"
#include "csv.hpp"
#include "electrooptic.hpp"
#include "converter.hpp"
#include "dynamics_oracle.hpp"
#include "qed_readout.hpp"
#include "entanglement.hpp"
#include "sensing.hpp"
#include "presets.hpp"
