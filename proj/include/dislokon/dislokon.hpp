#pragma once

#include "dislokon/error.hpp"
#include "dislokon/model.hpp"
#include "dislokon/oracle.hpp"
#include "dislokon/specfun.hpp"
#include "dislokon/spectra.hpp"
