#pragma once

#include "spdc/experiment/detection.hpp"
#include "spdc/experiment/fringe.hpp"
#include "spdc/experiment/jsi.hpp"
#include "spdc/experiment/polarization.hpp"
