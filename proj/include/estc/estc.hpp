#pragma once

#include "block_operator.hpp"
#include "dirac_fd.hpp"
#include "evolution.hpp"
#include "field.hpp"
#include "gamma.hpp"
#include "lattice.hpp"
#include "projector.hpp"
#include "spectral.hpp"
#include "volkov.hpp"
#include "pipeline.hpp"
