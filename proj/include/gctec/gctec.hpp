#pragma once

#include "config.hpp"
#include "csv.hpp"
#include "datasets.hpp"
#include "dielectrics.hpp"
#include "errors.hpp"
#include "network.hpp"
#include "path_impedance.hpp"
#include "safety.hpp"
#include "svg.hpp"
#include "sweeps.hpp"
