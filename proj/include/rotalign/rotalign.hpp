#pragma once

#include "rotalign/angular.hpp"
#include "rotalign/basis.hpp"
#include "rotalign/config.hpp"
#include "rotalign/dynamics.hpp"
#include "rotalign/ensemble.hpp"
#include "rotalign/errors.hpp"
#include "rotalign/legendre.hpp"
#include "rotalign/observables.hpp"
#include "rotalign/pulse.hpp"
#include "rotalign/scan.hpp"
#include "rotalign/sudden.hpp"
#include "rotalign/table.hpp"
