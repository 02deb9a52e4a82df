#pragma once

#include "geometry.hpp"
#include "domain.hpp"
#include "field.hpp"
#include "routing.hpp"
#include "partition.hpp"
#include "optimizers.hpp"
#include "scenario_io.hpp"
