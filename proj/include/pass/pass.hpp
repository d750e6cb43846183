#pragma once

#include "pass/core_model.hpp"
#include "pass/downlink.hpp"
#include "pass/errors.hpp"
#include "pass/region.hpp"
#include "pass/uplink_multi.hpp"
#include "pass/uplink_single.hpp"
