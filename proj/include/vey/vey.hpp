#pragma once

#include "fit.hpp"
#include "forms.hpp"
#include "germ.hpp"
#include "germ_io.hpp"
#include "hill.hpp"
#include "kernels.hpp"
#include "normalizer.hpp"
#include "operator_germ.hpp"
#include "phase_space.hpp"
